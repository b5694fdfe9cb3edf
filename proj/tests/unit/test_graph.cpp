#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <random>

#include "helpers.hpp"
#include "mobcost/error.hpp"
#include "mobcost/graph.hpp"
#include "oracles.hpp"

using namespace mobcost;
using testing::flags;
using testing::undirected;

namespace {

Matrix directed_example() {
    Matrix w = Matrix::Zero(3, 3);
    w(0, 1) = 1;
    w(1, 2) = 2;
    w(2, 0) = 4;
    w(0, 2) = 5;
    return w;
}

Matrix random_connected(std::mt19937& rng, std::size_t n) {
    std::uniform_int_distribution<int> weight(1, 9);
    std::bernoulli_distribution extra(0.3);
    Matrix w = Matrix::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i) w(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>((i + 1) % n)) = weight(rng);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (i != j && extra(rng)) w(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = weight(rng);
    return w;
}

}  // namespace

TEST_CASE("directed distances follow the cheapest path") {
    const NetworkGraph g(directed_example(), flags(3, {1, 2}), 0);
    const auto d = all_pairs_distances(g);
    CHECK(d(0, 2) == 3.0);
    CHECK(d(2, 1) == 5.0);
    CHECK(d(1, 0) == 6.0);
    CHECK(d(0, 0) == 0.0);
    CHECK(d.ha_row(2) == 3.0);
}

TEST_CASE("average weight modes") {
    const NetworkGraph g(directed_example(), flags(3, {1}), 0);
    CHECK(average_weight(g) == doctest::Approx(3.0));
    CHECK(average_weight(g, AveragingMode::LiteralN2) == doctest::Approx(12.0 / 9.0));
    const NetworkGraph lonely(Matrix::Zero(1, 1), {true}, 0);
    CHECK_THROWS_AS(average_weight(lonely), Error);
}

TEST_CASE("graph validation") {
    Matrix w = directed_example();
    CHECK_THROWS_AS(NetworkGraph(Matrix::Zero(2, 3), flags(2, {0}), 0), Error);
    CHECK_THROWS_AS(NetworkGraph(w, flags(3, {0}), 3), Error);
    CHECK_THROWS_AS(NetworkGraph(w, flags(3, {}), 0), Error);
    CHECK_THROWS_AS(NetworkGraph(w, flags(2, {0}), 0), Error);
    w(1, 1) = 1.0;
    CHECK_THROWS_AS(NetworkGraph(w, flags(3, {0}), 0), Error);
    w(1, 1) = 0.0;
    w(0, 1) = -1.0;
    CHECK_THROWS_AS(NetworkGraph(w, flags(3, {0}), 0), Error);
}

TEST_CASE("disconnected graph names the unreachable pair") {
    Matrix w = Matrix::Zero(3, 3);
    w(0, 1) = 1;
    w(1, 2) = 1;
    const NetworkGraph g(w, flags(3, {1, 2}), 0);
    try {
        all_pairs_distances(g);
        FAIL("expected an error");
    } catch (const Error& e) {
        CHECK(e.module() == "graph-core");
        CHECK(std::string(e.what()).find("unreachable") != std::string::npos);
    }
}

TEST_CASE("shortest-path tree breaks ties toward the lower index") {
    const NetworkGraph g(undirected(4, {{0, 1}, {0, 2}, {1, 3}, {2, 3}}), flags(4, {1, 2, 3}), 0);
    const auto d = all_pairs_distances(g);
    const auto t = shortest_path_tree(g, d);
    CHECK(t.parent[3] == 1);
    CHECK(t.parent[0] == 0);
    CHECK(t.depth[3] == 2);
    CHECK(t.lowest_common_ancestor(1, 2) == 0);
    CHECK(t.lowest_common_ancestor(3, 1) == 1);
    CHECK(t.lowest_common_ancestor(3, 3) == 3);
    const auto hops = shortest_path_hops(g, d);
    CHECK(hops[0][3] == 2);
    CHECK(hops[3][0] == 2);
    CHECK(hops[1][2] == 2);
}

TEST_CASE("distances match simple-path enumeration on random graphs") {
    std::mt19937 rng(7);
    for (int trial = 0; trial < 40; ++trial) {
        const std::size_t n = 2 + trial % 6;
        const Matrix w = random_connected(rng, n);
        const NetworkGraph g(w, std::vector<bool>(n, true), 0);
        const auto d = all_pairs_distances(g);
        oracle::Weights ow(n, std::vector<double>(n));
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) ow[i][j] = w(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
        const auto ref = oracle::simple_path_distances(ow);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) CHECK(d(i, j) == ref[i][j]);
    }
}

TEST_CASE("scaling every weight scales every distance") {
    std::mt19937 rng(3);
    const Matrix w = random_connected(rng, 6);
    const NetworkGraph g(w, std::vector<bool>(6, true), 0);
    const NetworkGraph g3(3.0 * w, std::vector<bool>(6, true), 0);
    const auto d = all_pairs_distances(g);
    const auto d3 = all_pairs_distances(g3);
    CHECK((d3.dist - 3.0 * d.dist).cwiseAbs().maxCoeff() < 1e-12);
    CHECK(average_weight(g3) == doctest::Approx(3.0 * average_weight(g)));
}

TEST_CASE("relabeling nodes permutes the distance matrix") {
    std::mt19937 rng(5);
    const std::size_t n = 7;
    const Matrix w = random_connected(rng, n);
    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    Matrix wp(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) wp(perm[i], perm[j]) = w(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
    const auto d = all_pairs_distances(NetworkGraph(w, std::vector<bool>(n, true), 0));
    const auto dp = all_pairs_distances(NetworkGraph(wp, std::vector<bool>(n, true), static_cast<std::size_t>(perm[0])));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) CHECK(dp(perm[i], perm[j]) == d(i, j));
}

TEST_CASE("recomputing distances is idempotent") {
    std::mt19937 rng(11);
    const Matrix w = random_connected(rng, 6);
    const NetworkGraph g(w, std::vector<bool>(6, true), 2);
    const auto d1 = all_pairs_distances(g);
    const auto d2 = all_pairs_distances(NetworkGraph(d1.dist, std::vector<bool>(6, true), 2));
    CHECK((d1.dist - d2.dist).cwiseAbs().maxCoeff() == 0.0);
}
