#pragma once

#include <cstddef>
#include <vector>

#include "mobcost/graph.hpp"

namespace mobcost {

/// Aggregate handover intensities between MAPs (events per unit time).
/// Rows and columns of non-MAP nodes are zero.
class RateMatrix {
public:
    RateMatrix(Matrix rates, std::vector<bool> is_map);

    std::size_t size() const noexcept { return static_cast<std::size_t>(rates_.rows()); }
    const Matrix& rates() const noexcept { return rates_; }
    const std::vector<bool>& is_map() const noexcept { return is_map_; }
    double rate(std::size_t i, std::size_t j) const { return rates_(i, j); }
    double row_sum(std::size_t i) const { return rates_.row(static_cast<Eigen::Index>(i)).sum(); }

private:
    Matrix rates_;
    std::vector<bool> is_map_;
};

/// Row-stochastic over MAP rows; non-MAP rows are identically zero.
class TransitionMatrix {
public:
    TransitionMatrix(Matrix probs, std::vector<bool> is_map);

    std::size_t size() const noexcept { return static_cast<std::size_t>(probs_.rows()); }
    const Matrix& probs() const noexcept { return probs_; }
    const std::vector<bool>& is_map() const noexcept { return is_map_; }
    double operator()(std::size_t i, std::size_t j) const { return probs_(i, j); }

private:
    Matrix probs_;
    std::vector<bool> is_map_;
};

struct StationaryDistribution {
    Vector b;  ///< b[i]: probability the MN resides under MAP i (0 for non-MAPs)

    double operator[](std::size_t i) const { return b(static_cast<Eigen::Index>(i)); }
    std::size_t size() const noexcept { return static_cast<std::size_t>(b.size()); }
};

struct MobilityRates {
    double lambda = 0.0;  ///< b-weighted mean handover intensity
    double mu = 0.0;      ///< call arrival intensity
    double rho = 0.0;     ///< lambda / (lambda + mu)
    bool rho_is_one = false;  ///< mu == 0: paging-side terms vanish
};

TransitionMatrix to_transition_matrix(const RateMatrix& r);

/// Discrete-time stationary vector of a user-supplied transition matrix.
/// Power iteration and a direct linear solve must agree; a periodic or
/// reducible MAP chain is rejected.
StationaryDistribution stationary(const TransitionMatrix& t);

/// Continuous-time stationary vector: solves b Q = 0, sum(b) = 1 with Q the
/// generator built from the rates. This is the default pipeline path; it is
/// insensitive to periodicity of the embedded jump chain.
StationaryDistribution stationary_continuous(const RateMatrix& r);

MobilityRates mobility_rates(const RateMatrix& r, const StationaryDistribution& b, double mu);

/// True when the MAP-restricted handover graph (positive entries) is strongly
/// connected.
bool map_chain_irreducible(const Matrix& positive_pattern, const std::vector<bool>& is_map);

}  // namespace mobcost
