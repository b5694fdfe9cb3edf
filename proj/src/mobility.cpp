#include "mobcost/mobility.hpp"

#include <cmath>
#include <string>

#include "mobcost/error.hpp"

namespace mobcost {
namespace {

constexpr const char* kModule = "mobility-model";
constexpr double kStochasticTol = 1e-12;
constexpr double kPowerTol = 1e-12;
constexpr long kPowerIterationCap = 1'000'000;
constexpr double kAgreementTol = 1e-9;

std::vector<Eigen::Index> map_indices(const std::vector<bool>& is_map) {
    std::vector<Eigen::Index> out;
    for (std::size_t i = 0; i < is_map.size(); ++i)
        if (is_map[i]) out.push_back(static_cast<Eigen::Index>(i));
    return out;
}

void check_square(const Matrix& m, const std::vector<bool>& is_map, const char* what) {
    if (m.rows() < 1 || m.rows() != m.cols())
        throw Error(kModule, std::string(what) + " must be square and non-empty");
    if (static_cast<Eigen::Index>(is_map.size()) != m.rows())
        throw Error(kModule, std::string(what) + " size does not match MAP flag count");
}

Vector expand(const Vector& reduced, const std::vector<Eigen::Index>& idx, Eigen::Index n) {
    Vector full = Vector::Zero(n);
    for (std::size_t k = 0; k < idx.size(); ++k) full(idx[k]) = reduced(static_cast<Eigen::Index>(k));
    return full;
}

// Clears round-off negatives and renormalizes.
Vector tidy_distribution(Vector b) {
    for (Eigen::Index i = 0; i < b.size(); ++i)
        if (b(i) < 0.0) {
            if (b(i) < -1e-10) throw Error(kModule, "stationary solve produced a negative probability");
            b(i) = 0.0;
        }
    return b / b.sum();
}

}  // namespace

RateMatrix::RateMatrix(Matrix rates, std::vector<bool> is_map)
    : rates_(std::move(rates)), is_map_(std::move(is_map)) {
    check_square(rates_, is_map_, "rate matrix");
    const auto n = rates_.rows();
    bool any_positive_map_row = false;
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
            const double r = rates_(i, j);
            if (!std::isfinite(r) || r < 0.0)
                throw Error(kModule, "rate (" + std::to_string(i) + "," + std::to_string(j) +
                                         ") must be finite and non-negative");
            if (r > 0.0 && (!is_map_[static_cast<std::size_t>(i)] || !is_map_[static_cast<std::size_t>(j)]))
                throw Error(kModule, "rate (" + std::to_string(i) + "," + std::to_string(j) +
                                         ") involves a non-MAP node; its row and column must be zero");
        }
        if (rates_(i, i) != 0.0) throw Error(kModule, "rate diagonal at node " + std::to_string(i) + " must be 0");
        if (is_map_[static_cast<std::size_t>(i)] && rates_.row(i).sum() > 0.0) any_positive_map_row = true;
    }
    if (!any_positive_map_row) throw Error(kModule, "no MAP has a positive outgoing handover rate");
}

TransitionMatrix::TransitionMatrix(Matrix probs, std::vector<bool> is_map)
    : probs_(std::move(probs)), is_map_(std::move(is_map)) {
    check_square(probs_, is_map_, "transition matrix");
    for (Eigen::Index i = 0; i < probs_.rows(); ++i) {
        for (Eigen::Index j = 0; j < probs_.cols(); ++j) {
            const double p = probs_(i, j);
            if (!(p >= 0.0 && p <= 1.0))
                throw Error(kModule, "transition probability (" + std::to_string(i) + "," +
                                         std::to_string(j) + ") outside [0,1]");
        }
        const double s = probs_.row(i).sum();
        if (is_map_[static_cast<std::size_t>(i)]) {
            if (std::abs(s - 1.0) > kStochasticTol)
                throw Error(kModule, "transition row " + std::to_string(i) + " sums to " + std::to_string(s));
        } else if (s != 0.0) {
            throw Error(kModule, "transition row of non-MAP node " + std::to_string(i) + " must be zero");
        }
    }
}

bool map_chain_irreducible(const Matrix& positive_pattern, const std::vector<bool>& is_map) {
    const auto idx = map_indices(is_map);
    if (idx.empty()) return false;
    const std::size_t k = idx.size();
    auto reaches_all = [&](bool forward) {
        std::vector<bool> seen(k, false);
        std::vector<std::size_t> stack{0};
        seen[0] = true;
        std::size_t count = 1;
        while (!stack.empty()) {
            const std::size_t a = stack.back();
            stack.pop_back();
            for (std::size_t c = 0; c < k; ++c) {
                const double v = forward ? positive_pattern(idx[a], idx[c]) : positive_pattern(idx[c], idx[a]);
                if (!seen[c] && v > 0.0) {
                    seen[c] = true;
                    ++count;
                    stack.push_back(c);
                }
            }
        }
        return count == k;
    };
    return reaches_all(true) && reaches_all(false);
}

TransitionMatrix to_transition_matrix(const RateMatrix& r) {
    const auto n = static_cast<Eigen::Index>(r.size());
    Matrix probs = Matrix::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        if (!r.is_map()[static_cast<std::size_t>(i)]) continue;
        const double s = r.rates().row(i).sum();
        if (s <= 0.0)
            throw Error(kModule, "MAP " + std::to_string(i) +
                                     " has zero outgoing rate (absorbing state breaks irreducibility)");
        probs.row(i) = r.rates().row(i) / s;
    }
    return TransitionMatrix(std::move(probs), r.is_map());
}

StationaryDistribution stationary(const TransitionMatrix& t) {
    const auto idx = map_indices(t.is_map());
    const auto k = static_cast<Eigen::Index>(idx.size());
    const auto n = static_cast<Eigen::Index>(t.size());
    if (!map_chain_irreducible(t.probs(), t.is_map()))
        throw Error(kModule, "MAP transition chain is reducible; stationary distribution not unique");

    Matrix p(k, k);
    for (Eigen::Index a = 0; a < k; ++a)
        for (Eigen::Index c = 0; c < k; ++c) p(a, c) = t.probs()(idx[a], idx[c]);

    // A point mass start; the uniform vector can already be stationary for a
    // periodic chain and would hide the oscillation.
    Eigen::RowVectorXd power = Eigen::RowVectorXd::Zero(k);
    power(0) = 1.0;
    bool converged = false;
    for (long it = 0; it < kPowerIterationCap; ++it) {
        Eigen::RowVectorXd next = power * p;
        const double residual = (next - power).cwiseAbs().maxCoeff();
        power = std::move(next);
        if (residual < kPowerTol) {
            converged = true;
            break;
        }
    }
    if (!converged)
        throw Error(kModule, "power iteration did not converge; the MAP chain is periodic or nearly so");

    // (P^T - I) b = 0 with the last equation replaced by sum(b) = 1.
    Matrix system = p.transpose() - Matrix::Identity(k, k);
    system.row(k - 1).setOnes();
    Vector rhs = Vector::Zero(k);
    rhs(k - 1) = 1.0;
    const Vector direct = system.fullPivLu().solve(rhs);
    if ((direct - power.transpose()).cwiseAbs().maxCoeff() > kAgreementTol)
        throw Error(kModule, "power iteration and linear solve disagree on the stationary vector");

    return StationaryDistribution{expand(tidy_distribution(direct), idx, n)};
}

StationaryDistribution stationary_continuous(const RateMatrix& r) {
    const auto idx = map_indices(r.is_map());
    const auto k = static_cast<Eigen::Index>(idx.size());
    const auto n = static_cast<Eigen::Index>(r.size());
    if (!map_chain_irreducible(r.rates(), r.is_map()))
        throw Error(kModule, "MAP handover chain is reducible; stationary distribution not unique");

    Matrix q(k, k);
    for (Eigen::Index a = 0; a < k; ++a) {
        for (Eigen::Index c = 0; c < k; ++c) q(a, c) = r.rates()(idx[a], idx[c]);
        q(a, a) = -q.row(a).sum();
    }
    Matrix system = q.transpose();
    system.row(k - 1).setOnes();
    Vector rhs = Vector::Zero(k);
    rhs(k - 1) = 1.0;
    const Vector b = system.fullPivLu().solve(rhs);
    return StationaryDistribution{expand(tidy_distribution(b), idx, n)};
}

MobilityRates mobility_rates(const RateMatrix& r, const StationaryDistribution& b, double mu) {
    if (!std::isfinite(mu) || mu < 0.0) throw Error(kModule, "call intensity mu must be finite and >= 0");
    if (b.size() != r.size()) throw Error(kModule, "stationary vector size does not match rate matrix");
    MobilityRates out;
    for (std::size_t i = 0; i < r.size(); ++i) out.lambda += b[i] * r.row_sum(i);
    out.mu = mu;
    if (out.lambda + mu <= 0.0) throw Error(kModule, "lambda = mu = 0: mobility ratio undefined");
    out.rho = out.lambda / (out.lambda + mu);
    out.rho_is_one = (mu == 0.0);
    return out;
}

}  // namespace mobcost
