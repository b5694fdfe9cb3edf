#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "mobcost/costs.hpp"
#include "mobcost/derived.hpp"
#include "mobcost/graph.hpp"
#include "mobcost/mobility.hpp"
#include "mobcost/paging.hpp"
#include "mobcost/tracking.hpp"

namespace mobcost {

struct ExplicitPlan {
    std::vector<std::optional<std::size_t>> area_of;
    std::vector<std::size_t> heads;
};

struct AnalysisOptions {
    DeriveOptions derive;
    bool g_H_measured = false;  ///< use the shortest-path-tree junction distance for g_H
    std::size_t target_areas = 1;
    std::optional<ExplicitPlan> plan;  ///< takes precedence over target_areas
    double P_M = 1.0;
};

/// Every analytic quantity derived from one (graph, rates, mu) scenario.
struct Analysis {
    DistanceMatrix dist;
    TransitionMatrix transitions;
    StationaryDistribution b;
    MobilityRates rates;
    DerivedParams params;
    PagingPlan plan;
    double P_M = 1.0;

    /// Strategy inputs without chain statistics.
    StrategyInputs inputs() const;
};

Analysis analyze(const NetworkGraph& g, const RateMatrix& r, double mu, const AnalysisOptions& opts = {});

struct TrackingSettings {
    std::optional<std::size_t> fixed_H;  ///< empty: optimize over [0, H_max]
    std::size_t H_max = 32;
    double p_loop = 0.0;
};

/// Cost of one strategy on an analysed scenario. Tracking strategies get
/// chain statistics from the fixed H or from the optimum over [0, H_max].
CostBreakdown evaluate(Strategy s, const Analysis& a, const CostConstants& c, const CostClassWeights& w,
                       const TrackingSettings& tracking = {}, const CostOptions& opts = {});

/// ChainRefresh for cost curves: recompute statistics at every grid point.
ChainRefresh chain_refresh(const TrackingSettings& tracking, const CostOptions& opts = {});

}  // namespace mobcost
