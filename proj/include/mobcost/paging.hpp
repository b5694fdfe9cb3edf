#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "mobcost/graph.hpp"
#include "mobcost/mobility.hpp"

namespace mobcost {

/// Partition of the MAPs into paging (location) areas.
struct PagingPlan {
    std::vector<std::optional<std::size_t>> area_of;  ///< per node; empty for non-MAPs
    std::vector<std::size_t> heads;                   ///< heads[a]: head MA of area a
    double g_C = 0.0;     ///< b-weighted MAP-to-head distance, normalized by w
    double n_C = 0.0;     ///< mean MAP count per area
    std::size_t n_d = 0;  ///< number of areas
    double P_cell = 0.0;  ///< probability a handover crosses an area boundary
    double objective = 0.0;  ///< sum_i b_i dist(i, head(area(i))), unnormalized
};

/// Greedy k-medoids: farthest-point seeding, nearest-head assignment (ties to
/// the lower index), then single head swaps while the b-weighted objective
/// strictly decreases. Restarted with each of the first 64 MAPs as the first
/// seed; the best plan wins, earlier starts on ties.
PagingPlan plan_areas(const NetworkGraph& g, const DistanceMatrix& d, const StationaryDistribution& b,
                      const TransitionMatrix& t, std::size_t target_areas, double w);

/// Statistics of a user-supplied plan. `area_of` maps every MAP to an area id
/// in [0, heads.size()); heads[a] must itself be assigned to area a.
PagingPlan plan_from_assignment(const NetworkGraph& g, const DistanceMatrix& d, const StationaryDistribution& b,
                                const TransitionMatrix& t, std::vector<std::optional<std::size_t>> area_of,
                                std::vector<std::size_t> heads, double w);

/// Probability mass of handovers that leave their area.
double boundary_crossing_probability(const std::vector<std::optional<std::size_t>>& area_of,
                                     const StationaryDistribution& b, const TransitionMatrix& t);

}  // namespace mobcost
