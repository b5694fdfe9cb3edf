#include <doctest.h>

#include <algorithm>
#include <limits>
#include <random>

#include "helpers.hpp"
#include "mobcost/derived.hpp"
#include "mobcost/error.hpp"
#include "mobcost/paging.hpp"

using namespace mobcost;
using testing::directed_rates;
using testing::flags;
using testing::undirected;

namespace {

struct Instance {
    NetworkGraph graph;
    DistanceMatrix d;
    TransitionMatrix t;
    StationaryDistribution b;
    double w;

    Instance(NetworkGraph g, const RateMatrix& r)
        : graph(std::move(g)),
          d(all_pairs_distances(graph)),
          t(to_transition_matrix(r)),
          b(stationary_continuous(r)),
          w(average_weight(graph)) {}
};

// MAPs 0-2 and 3-5 form triangles; 2-3 is the bridge. Relay 6 leads to HA 7.
Instance two_triangles() {
    const auto w = undirected(8, {{0, 1}, {0, 2}, {1, 2}, {2, 3}, {3, 4}, {3, 5}, {4, 5}, {2, 6}, {3, 6}, {6, 7}});
    Matrix q = directed_rates(8, {{0, 2}, {1, 2}, {2, 0}, {2, 1}, {2, 3}, {3, 2}, {3, 4}, {3, 5}, {4, 3}, {5, 3}});
    q(0, 1) = q(1, 0) = q(4, 5) = q(5, 4) = 2;
    const auto maps = flags(8, {0, 1, 2, 3, 4, 5});
    return Instance(NetworkGraph(w, maps, 7), RateMatrix(q, maps));
}

// Best medoid objective over every head subset of size k.
double brute_force_objective(const Instance& in, std::size_t k) {
    const auto maps = in.graph.maps();
    const std::size_t n = maps.size();
    std::vector<bool> pick(n, false);
    std::fill(pick.begin(), pick.begin() + static_cast<long>(k), true);
    double best = std::numeric_limits<double>::infinity();
    do {
        double total = 0.0;
        for (auto i : maps) {
            double nearest = std::numeric_limits<double>::infinity();
            for (std::size_t h = 0; h < n; ++h)
                if (pick[h]) nearest = std::min(nearest, in.d(i, maps[h]));
            total += in.b[i] * nearest;
        }
        best = std::min(best, total);
    } while (std::prev_permutation(pick.begin(), pick.end()));
    return best;
}

}  // namespace

TEST_CASE("two triangles split along the bridge") {
    const auto in = two_triangles();
    const auto plan = plan_areas(in.graph, in.d, in.b, in.t, 2, in.w);
    CHECK(plan.n_d == 2);
    CHECK(plan.n_C == doctest::Approx(3.0));
    CHECK(plan.area_of[0] == plan.area_of[1]);
    CHECK(plan.area_of[1] == plan.area_of[2]);
    CHECK(plan.area_of[3] == plan.area_of[4]);
    CHECK(plan.area_of[4] == plan.area_of[5]);
    CHECK(plan.area_of[0] != plan.area_of[3]);
    CHECK_FALSE(plan.area_of[6].has_value());
    CHECK(plan.P_cell == doctest::Approx(1.0 / 9.0));
    CHECK(plan.objective == doctest::Approx(brute_force_objective(in, 2)));

    // A hand-built plan with the same areas gives the same statistics.
    std::vector<std::optional<std::size_t>> area(8);
    for (std::size_t i = 0; i < 6; ++i) area[i] = i < 3 ? 0 : 1;
    const auto manual = plan_from_assignment(in.graph, in.d, in.b, in.t, area, {2, 3}, in.w);
    CHECK(manual.P_cell == doctest::Approx(plan.P_cell));
    CHECK(manual.g_C == doctest::Approx(plan.g_C));
}

TEST_CASE("one area and singleton areas are the boundary plans") {
    const auto in = two_triangles();
    const auto one = plan_areas(in.graph, in.d, in.b, in.t, 1, in.w);
    CHECK(one.P_cell == 0.0);
    CHECK(one.n_d == 1);
    CHECK(one.objective == doctest::Approx(brute_force_objective(in, 1)));

    const auto all = plan_areas(in.graph, in.d, in.b, in.t, 6, in.w);
    CHECK(all.g_C == 0.0);
    CHECK(all.P_cell == doctest::Approx(1.0));
    CHECK(all.n_C == doctest::Approx(1.0));
    CHECK_THROWS_AS(plan_areas(in.graph, in.d, in.b, in.t, 7, in.w), Error);
    CHECK_THROWS_AS(plan_areas(in.graph, in.d, in.b, in.t, 0, in.w), Error);
}

TEST_CASE("a single area headed by the HA has g_C equal to m") {
    const testing::RelayStar s;
    const auto d = all_pairs_distances(s.graph);
    const auto t = to_transition_matrix(s.rates);
    const auto b = stationary_continuous(s.rates);
    std::vector<std::optional<std::size_t>> area(6);
    for (std::size_t i = 2; i < 6; ++i) area[i] = 0;
    // The HA is not a MAP, so it may not head an area; the relay may not either.
    CHECK_THROWS_AS(plan_from_assignment(s.graph, d, b, t, area, {0}, 1.0), Error);

    const NetworkGraph with_ha(s.graph.weights(), flags(6, {0, 2, 3, 4, 5}), 0);
    area[0] = 0;
    StationaryDistribution bb = b;
    const auto plan = plan_from_assignment(with_ha, d, bb, t, area, {0}, 1.0);
    CHECK(plan.g_C == doctest::Approx(depth_m(d, bb, 1.0)));
}

TEST_CASE("explicit plans are validated") {
    const auto in = two_triangles();
    std::vector<std::optional<std::size_t>> area(8);
    for (std::size_t i = 0; i < 5; ++i) area[i] = i < 3 ? 0 : 1;
    CHECK_THROWS_AS(plan_from_assignment(in.graph, in.d, in.b, in.t, area, {2, 3}, in.w), Error);
    area[5] = 1;
    CHECK_THROWS_AS(plan_from_assignment(in.graph, in.d, in.b, in.t, area, {3, 2}, in.w), Error);
    area[5] = 2;
    CHECK_THROWS_AS(plan_from_assignment(in.graph, in.d, in.b, in.t, area, {2, 3}, in.w), Error);

    std::vector<std::optional<std::size_t>> singletons(8);
    std::vector<std::size_t> heads;
    for (std::size_t i = 0; i < 6; ++i) {
        singletons[i] = i;
        heads.push_back(i);
    }
    CHECK(plan_from_assignment(in.graph, in.d, in.b, in.t, singletons, heads, in.w).g_C == 0.0);
}

TEST_CASE("heuristic stays within 10 percent of the optimum on random instances") {
    std::mt19937 rng(29);
    std::uniform_int_distribution<int> weight(1, 6);
    std::uniform_real_distribution<double> rate(0.1, 2.0);
    std::bernoulli_distribution extra(0.25);
    for (int trial = 0; trial < 60; ++trial) {
        const std::size_t maps = 3 + static_cast<std::size_t>(trial) % 6;
        const std::size_t n = maps + 1;  // node `maps` is the HA
        Matrix w = Matrix::Zero(n, n);
        for (std::size_t i = 0; i + 1 < n; ++i) w(i, i + 1) = w(i + 1, i) = weight(rng);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j)
                if (extra(rng)) w(i, j) = w(j, i) = weight(rng);
        std::vector<std::size_t> map_ids(maps);
        for (std::size_t i = 0; i < maps; ++i) map_ids[i] = i;
        Matrix q = Matrix::Zero(n, n);
        for (auto [a, c] : testing::all_pairs(map_ids)) q(a, c) = rate(rng);
        const Instance in(NetworkGraph(w, flags(n, map_ids), maps), RateMatrix(q, flags(n, map_ids)));
        for (std::size_t k = 1; k <= std::min<std::size_t>(3, maps); ++k) {
            const auto plan = plan_areas(in.graph, in.d, in.b, in.t, k, in.w);
            const double best = brute_force_objective(in, k);
            CHECK(plan.objective <= 1.1 * best + 1e-12);
            CHECK(plan.objective >= best - 1e-12);
            CHECK(plan.P_cell >= 0.0);
            CHECK(plan.P_cell <= 1.0);
            CHECK(plan.n_C * static_cast<double>(plan.n_d) == doctest::Approx(static_cast<double>(maps)));
            for (std::size_t a = 0; a < plan.heads.size(); ++a) CHECK(plan.area_of[plan.heads[a]] == a);
            CHECK(plan.g_C <= in.d.dist.maxCoeff() / in.w + 1e-12);
        }
    }
}
