#include <doctest.h>

#include <random>

#include "helpers.hpp"
#include "mobcost/error.hpp"
#include "mobcost/mobility.hpp"
#include "oracles.hpp"

using namespace mobcost;
using testing::directed_rates;
using testing::flags;

namespace {

Matrix two_state(double a, double b) {
    Matrix r = Matrix::Zero(2, 2);
    r(0, 1) = a;
    r(1, 0) = b;
    return r;
}

}  // namespace

TEST_CASE("two-state chain balances flow") {
    const RateMatrix r(two_state(1.0, 3.0), {true, true});
    const auto b = stationary_continuous(r);
    CHECK(b[0] == doctest::Approx(0.75).epsilon(1e-14));
    CHECK(b[1] == doctest::Approx(0.25).epsilon(1e-14));
    const auto rates = mobility_rates(r, b, 0.5);
    CHECK(rates.lambda == doctest::Approx(1.5));
    CHECK(rates.rho == doctest::Approx(0.75));
    CHECK_FALSE(rates.rho_is_one);
}

TEST_CASE("zero call intensity gives rho = 1") {
    const RateMatrix r(two_state(1.0, 1.0), {true, true});
    const auto rates = mobility_rates(r, stationary_continuous(r), 0.0);
    CHECK(rates.rho == 1.0);
    CHECK(rates.rho_is_one);
    CHECK_THROWS_AS(mobility_rates(r, stationary_continuous(r), -1.0), Error);
}

TEST_CASE("birth-death chain matches detailed balance") {
    Matrix q = Matrix::Zero(3, 3);
    q(0, 1) = 1;
    q(1, 0) = 2;
    q(1, 2) = 1;
    q(2, 1) = 2;
    const auto b = stationary_continuous(RateMatrix(q, {true, true, true}));
    CHECK(b[0] == doctest::Approx(4.0 / 7.0));
    CHECK(b[1] == doctest::Approx(2.0 / 7.0));
    CHECK(b[2] == doctest::Approx(1.0 / 7.0));
}

TEST_CASE("transition matrix normalizes MAP rows") {
    const Matrix q = directed_rates(3, {{0, 1}, {0, 2}, {1, 0}, {2, 0}}, 2.0);
    const auto t = to_transition_matrix(RateMatrix(q, {true, true, true}));
    CHECK(t(0, 1) == doctest::Approx(0.5));
    CHECK(t(1, 0) == doctest::Approx(1.0));
    CHECK(t.probs().rowwise().sum().minCoeff() == doctest::Approx(1.0));
}

TEST_CASE("discrete stationary agrees with an elimination oracle") {
    Matrix p(3, 3);
    p << 0.1, 0.6, 0.3, 0.5, 0.0, 0.5, 0.2, 0.2, 0.6;
    const auto b = stationary(TransitionMatrix(p, {true, true, true}));
    oracle::Weights op{{0.1, 0.6, 0.3}, {0.5, 0.0, 0.5}, {0.2, 0.2, 0.6}};
    const auto ref = oracle::stationary_by_elimination(op);
    for (std::size_t i = 0; i < 3; ++i) CHECK(b[i] == doctest::Approx(ref[i]).epsilon(1e-10));
}

TEST_CASE("periodic and reducible chains are rejected") {
    Matrix flip(2, 2);
    flip << 0, 1, 1, 0;
    CHECK_THROWS_AS(stationary(TransitionMatrix(flip, {true, true})), Error);
    // The continuous-time solve is insensitive to the period.
    const auto b = stationary_continuous(RateMatrix(flip, {true, true}));
    CHECK(b[0] == doctest::Approx(0.5));

    const Matrix q = directed_rates(3, {{0, 1}, {1, 0}, {2, 0}});
    CHECK_FALSE(map_chain_irreducible(q, {true, true, true}));
    CHECK_THROWS_AS(stationary_continuous(RateMatrix(q, {true, true, true})), Error);
}

TEST_CASE("rate matrix validation") {
    Matrix q = two_state(1, 1);
    CHECK_THROWS_AS(RateMatrix(q, {true, false}), Error);
    CHECK_THROWS_AS(RateMatrix(Matrix::Zero(2, 2), {true, true}), Error);
    q(0, 1) = -1;
    CHECK_THROWS_AS(RateMatrix(q, {true, true}), Error);
    Matrix p(2, 2);
    p << 0, 0.9, 1, 0;
    CHECK_THROWS_AS(TransitionMatrix(p, {true, true}), Error);
}

TEST_CASE("random irreducible generators have zero residual") {
    std::mt19937 rng(17);
    std::uniform_real_distribution<double> u(0.1, 3.0);
    std::bernoulli_distribution keep(0.4);
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t n = 2 + static_cast<std::size_t>(trial) % 9;
        Matrix q = Matrix::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
        for (std::size_t i = 0; i < n; ++i) q(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>((i + 1) % n)) = u(rng);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                if (i != j && keep(rng)) q(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = u(rng);
        const RateMatrix r(q, std::vector<bool>(n, true));
        const auto b = stationary_continuous(r);
        Matrix gen = q;
        for (std::size_t i = 0; i < n; ++i) gen(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) = -r.row_sum(i);
        CHECK((b.b.transpose() * gen).cwiseAbs().maxCoeff() < 1e-9);
        CHECK(b.b.sum() == doctest::Approx(1.0).epsilon(1e-12));

        // Scaling time leaves occupancy unchanged and scales lambda.
        const RateMatrix r2(2.0 * q, std::vector<bool>(n, true));
        const auto b2 = stationary_continuous(r2);
        CHECK((b.b - b2.b).cwiseAbs().maxCoeff() < 1e-12);
        CHECK(mobility_rates(r2, b2, 1.0).lambda == doctest::Approx(2.0 * mobility_rates(r, b, 1.0).lambda));
    }
}

TEST_CASE("non-MAP nodes carry no occupancy") {
    const testing::RelayStar s;
    const auto b = stationary_continuous(s.rates);
    CHECK(b[0] == 0.0);
    CHECK(b[1] == 0.0);
    for (std::size_t i = 2; i < 6; ++i) CHECK(b[i] == doctest::Approx(0.25));
}
