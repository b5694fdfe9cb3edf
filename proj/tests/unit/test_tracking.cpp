#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "helpers.hpp"
#include "mobcost/error.hpp"
#include "mobcost/tracking.hpp"

using namespace mobcost;
using testing::directed_rates;

namespace {

struct ChainEstimate {
    double P_H, P_0, Mh_r;
    double se_H, se_0, se_M;
};

// Event-by-event run of the chain-length process with batch-means errors.
ChainEstimate simulate_chain(std::size_t H, double rho, double p_loop, long events, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    constexpr int kBatches = 100;
    const long per_batch = events / kBatches;
    std::vector<double> bh, b0, bm;
    std::size_t s = 0;
    for (int batch = 0; batch < kBatches; ++batch) {
        double handovers = 0, normal = 0, calls = 0, empty = 0, length = 0;
        for (long e = 0; e < per_batch; ++e) {
            if (u(rng) < rho) {
                handovers += 1;
                if (s == H) {
                    normal += 1;
                    s = 0;
                } else if (p_loop > 0 && u(rng) < p_loop) {
                    s = s == 0 ? 0 : s - 1;
                } else {
                    ++s;
                }
            } else {
                calls += 1;
                if (s == 0) empty += 1;
                length += static_cast<double>(s);
                s = 0;
            }
        }
        bh.push_back(normal / handovers);
        b0.push_back(empty / calls);
        bm.push_back(length / calls);
    }
    auto mean_se = [](const std::vector<double>& v) {
        double m = 0;
        for (double x : v) m += x;
        m /= static_cast<double>(v.size());
        double ss = 0;
        for (double x : v) ss += (x - m) * (x - m);
        return std::pair{m, std::sqrt(ss / static_cast<double>(v.size() - 1) / static_cast<double>(v.size()))};
    };
    const auto [h, sh] = mean_se(bh);
    const auto [z, sz] = mean_se(b0);
    const auto [m, sm] = mean_se(bm);
    return {h, z, m, sh, sz, sm};
}

StrategyInputs deep_inputs(double rho) {
    StrategyInputs in;
    in.rho = rho;
    in.m = 5;
    in.g_H = 2;
    in.g_T = 1;
    return in;
}

}  // namespace

TEST_CASE("H = 0 is the degenerate policy") {
    for (double rho : {0.0, 0.3, 0.9}) {
        const auto s = chain_statistics(TrackingPolicy{0, 0.0}, rho);
        CHECK(s.P_H == 1.0);
        CHECK(s.P_0 == 1.0);
        CHECK(s.Mh_r == 0.0);
    }
}

TEST_CASE("H = 2 at rho = 1/2 has geometric weights") {
    const auto pi = chain_length_distribution(TrackingPolicy{2, 0.0}, 0.5);
    REQUIRE(pi.size() == 3);
    CHECK(pi(0) == doctest::Approx(4.0 / 7.0));
    CHECK(pi(1) == doctest::Approx(2.0 / 7.0));
    CHECK(pi(2) == doctest::Approx(1.0 / 7.0));
    const auto s = chain_statistics(TrackingPolicy{2, 0.0}, 0.5);
    CHECK(s.P_H == doctest::Approx(1.0 / 7.0));
    CHECK(s.P_0 == doctest::Approx(4.0 / 7.0));
    CHECK(s.Mh_r == doctest::Approx(4.0 / 7.0));
}

TEST_CASE("stationary vector satisfies its balance equations") {
    for (std::size_t H : {1u, 3u, 7u})
        for (double rho : {0.2, 0.6, 0.95})
            for (double p_loop : {0.0, 0.3}) {
                const auto pi = chain_length_distribution(TrackingPolicy{H, p_loop}, rho);
                CHECK(pi.sum() == doctest::Approx(1.0).epsilon(1e-12));
                Matrix p = Matrix::Zero(static_cast<Eigen::Index>(H + 1), static_cast<Eigen::Index>(H + 1));
                for (std::size_t s = 0; s <= H; ++s) {
                    const auto i = static_cast<Eigen::Index>(s);
                    p(i, 0) += 1 - rho;
                    if (s == H) {
                        p(i, 0) += rho;
                    } else {
                        p(i, static_cast<Eigen::Index>(s + 1)) += rho * (1 - p_loop);
                        p(i, static_cast<Eigen::Index>(s == 0 ? 0 : s - 1)) += rho * p_loop;
                    }
                }
                const Eigen::RowVectorXd residual = pi.transpose() * p - pi.transpose();
                CHECK(residual.cwiseAbs().maxCoeff() < 1e-9);
            }
}

TEST_CASE("chain statistics agree with an event-loop simulation") {
    for (double p_loop : {0.0, 0.4}) {
        const auto exact = chain_statistics(TrackingPolicy{2, p_loop}, 0.5);
        const auto mc = simulate_chain(2, 0.5, p_loop, 10'000'000, 99);
        CHECK(std::abs(exact.P_H - mc.P_H) <= 3 * mc.se_H);
        CHECK(std::abs(exact.P_0 - mc.P_0) <= 3 * mc.se_0);
        CHECK(std::abs(exact.Mh_r - mc.Mh_r) <= 3 * mc.se_M);
    }
}

TEST_CASE("limits and monotonicity") {
    const auto rare = chain_statistics(TrackingPolicy{5, 0.0}, 1e-6);
    CHECK(rare.P_0 == doctest::Approx(1.0).epsilon(1e-5));
    CHECK(rare.Mh_r < 1e-5);
    for (double rho : {0.3, 0.8}) {
        double prev = -1.0;
        for (std::size_t H = 0; H <= 12; ++H) {
            const auto s = chain_statistics(TrackingPolicy{H, 0.0}, rho);
            CHECK(s.Mh_r >= prev - 1e-12);
            CHECK(s.Mh_r <= static_cast<double>(H) + 1e-12);
            CHECK(chain_statistics(TrackingPolicy{H, 0.5}, rho).Mh_r <= s.Mh_r + 1e-12);
            prev = s.Mh_r;
        }
    }
    CHECK_THROWS_AS(chain_statistics(TrackingPolicy{2, 1.0}, 0.5), Error);
    CHECK_THROWS_AS(chain_statistics(TrackingPolicy{2, 0.0}, -0.1), Error);
}

TEST_CASE("two-step return probability") {
    const RateMatrix two(directed_rates(2, {{0, 1}, {1, 0}}), {true, true});
    CHECK(estimate_p_loop(to_transition_matrix(two), stationary_continuous(two)) == doctest::Approx(1.0));
    const RateMatrix ring(directed_rates(4, {{0, 1}, {1, 2}, {2, 3}, {3, 0}, {1, 0}, {2, 1}, {3, 2}, {0, 3}}),
                          std::vector<bool>(4, true));
    CHECK(estimate_p_loop(to_transition_matrix(ring), stationary_continuous(ring)) == doctest::Approx(0.5));
    const RateMatrix cycle(directed_rates(3, {{0, 1}, {1, 2}, {2, 0}}), std::vector<bool>(3, true));
    CHECK(estimate_p_loop(to_transition_matrix(cycle), stationary_continuous(cycle)) == 0.0);
}

TEST_CASE("optimal H responds to the cost balance") {
    const auto c = cost_preset("MIPV4");
    const auto opt = optimize_H(Strategy::WirelessTracking, deep_inputs(0.9), c, {}, 10, 0.0);
    REQUIRE(opt.curve.size() == 11);
    for (const auto& point : opt.curve) CHECK(opt.cost.total <= point.total + 1e-9);
    const auto first = std::min_element(opt.curve.begin(), opt.curve.end(),
                                        [](const auto& a, const auto& b) { return a.total < b.total; });
    CHECK(static_cast<std::size_t>(first - opt.curve.begin()) == opt.H);

    // Expensive updates push the optimum toward longer chains.
    for (Strategy s : {Strategy::WirelessTracking, Strategy::WiredTracking}) {
        CostConstants pricey = c;
        pricey.c_u *= 100;
        CHECK(optimize_H(s, deep_inputs(0.9), pricey, {}, 10, 0.0).H >= optimize_H(s, deep_inputs(0.9), c, {}, 10, 0.0).H);
        CHECK(optimize_H(s, deep_inputs(1e-6), c, {}, 10, 0.0).H == 0);
    }
}

TEST_CASE("H = 0 wireless tracking signals like the hierarchy on handovers") {
    const auto c = cost_preset("MIPV4");
    auto in = deep_inputs(1.0);
    in.chain = chain_statistics(TrackingPolicy{0, 0.0}, 0.5);
    CHECK(signalling_cost(Strategy::WirelessTracking, in, c) ==
          doctest::Approx(signalling_cost(Strategy::Hierarchical, in, c)));
}
