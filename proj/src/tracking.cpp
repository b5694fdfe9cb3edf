#include "mobcost/tracking.hpp"

#include <string>

#include "mobcost/error.hpp"

namespace mobcost {
namespace {

constexpr const char* kModule = "tracking-optimizer";

Matrix chain_transitions(const TrackingPolicy& policy, double rho) {
    const auto states = static_cast<Eigen::Index>(policy.H + 1);
    const auto H = states - 1;
    Matrix p = Matrix::Zero(states, states);
    for (Eigen::Index s = 0; s < states; ++s) {
        p(s, 0) += 1.0 - rho;
        if (s == H) {
            p(s, 0) += rho;
        } else {
            p(s, s + 1) += rho * (1.0 - policy.p_loop);
            p(s, s > 0 ? s - 1 : 0) += rho * policy.p_loop;
        }
    }
    return p;
}

}  // namespace

Vector chain_length_distribution(const TrackingPolicy& policy, double rho) {
    if (!(rho >= 0.0 && rho <= 1.0)) throw Error(kModule, "rho must lie in [0,1]");
    if (!(policy.p_loop >= 0.0 && policy.p_loop < 1.0)) throw Error(kModule, "p_loop must lie in [0,1)");
    const Matrix p = chain_transitions(policy, rho);
    const auto states = p.rows();
    Matrix system = p.transpose() - Matrix::Identity(states, states);
    system.row(states - 1).setOnes();
    Vector rhs = Vector::Zero(states);
    rhs(states - 1) = 1.0;
    Vector pi = system.fullPivLu().solve(rhs);
    for (Eigen::Index s = 0; s < states; ++s)
        if (pi(s) < 0.0) pi(s) = 0.0;  // round-off on transient states
    return pi / pi.sum();
}

ChainStatistics chain_statistics(const TrackingPolicy& policy, double rho) {
    const Vector pi = chain_length_distribution(policy, rho);
    ChainStatistics out;
    out.P_H = pi(pi.size() - 1);
    out.P_0 = pi(0);
    out.Mh_r = 0.0;
    for (Eigen::Index s = 0; s < pi.size(); ++s) out.Mh_r += static_cast<double>(s) * pi(s);
    return out;
}

double estimate_p_loop(const TransitionMatrix& t, const StationaryDistribution& b) {
    double p = 0.0;
    for (std::size_t i = 0; i < t.size(); ++i)
        for (std::size_t j = 0; j < t.size(); ++j) p += b[i] * t(i, j) * t(j, i);
    return p;
}

TrackingOptimum optimize_H(Strategy strategy, const StrategyInputs& in, const CostConstants& c,
                           const CostClassWeights& w, std::size_t H_max, double p_loop, const CostOptions& opts) {
    if (!is_tracking(strategy)) throw Error(kModule, to_string(strategy) + " has no tracking chain to optimize");
    TrackingOptimum best;
    best.curve.reserve(H_max + 1);
    for (std::size_t H = 0; H <= H_max; ++H) {
        StrategyInputs point = in;
        point.chain = chain_statistics({H, p_loop}, in.rho);
        const CostBreakdown b = cost(strategy, point, c, w, opts);
        best.curve.push_back(b);
        if (H == 0 || b.total < best.cost.total) {
            best.H = H;
            best.stats = *point.chain;
            best.cost = b;
        }
    }
    return best;
}

}  // namespace mobcost
