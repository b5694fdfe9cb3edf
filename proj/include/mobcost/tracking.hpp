#pragma once

#include <cstddef>
#include <vector>

#include "mobcost/costs.hpp"
#include "mobcost/graph.hpp"
#include "mobcost/mobility.hpp"

namespace mobcost {

struct TrackingPolicy {
    std::size_t H = 0;    ///< tracking handovers allowed before a forced normal one
    double p_loop = 0.0;  ///< chance a tracking handover returns to the previous MAP
};

/// Stationary distribution of the chain length s in {0..H} at event epochs.
///
/// Each event is a handover with probability rho, otherwise a call.
///   s < H, handover: s+1, or max(s-1, 0) with probability p_loop (loop removal)
///   s = H, handover: normal handover, s = 0
///   call:            deliver along s hops, update the CA, s = 0
Vector chain_length_distribution(const TrackingPolicy& policy, double rho);

/// P_H = pi_H, P_0 = pi_0, M[h_r] = sum s pi_s. Calls see the unconditional
/// distribution because the event type is drawn independently of s.
ChainStatistics chain_statistics(const TrackingPolicy& policy, double rho);

/// Two-step return probability sum_i b_i sum_j P_ij P_ji, a data-driven
/// default for p_loop.
double estimate_p_loop(const TransitionMatrix& t, const StationaryDistribution& b);

struct TrackingOptimum {
    std::size_t H = 0;
    ChainStatistics stats;
    CostBreakdown cost;
    std::vector<CostBreakdown> curve;  ///< cost for every H in [0, H_max]
};

/// Exhaustive sweep H = 0..H_max; the smallest minimizing H wins ties.
TrackingOptimum optimize_H(Strategy strategy, const StrategyInputs& in, const CostConstants& c,
                           const CostClassWeights& w, std::size_t H_max, double p_loop,
                           const CostOptions& opts = {});

}  // namespace mobcost
