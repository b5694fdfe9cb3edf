#pragma once

#include <cstddef>
#include <optional>
#include <string>

#include "mobcost/graph.hpp"
#include "mobcost/mobility.hpp"

namespace mobcost {

enum class ParamSource { Computed, Overridden, Clamped, Measured };

std::string to_string(ParamSource s);

/// How the neighbour-degree average is normalized.
enum class DeltaMode {
    Weighted,  ///< sum_i b_i * outdeg(i)
    LiteralN,  ///< the same, additionally divided by the node count
};

struct ParamOverrides {
    std::optional<double> m;
    std::optional<double> g_T;
    std::optional<double> delta;
    std::optional<double> g_H;
};

struct DerivedParams {
    double w = 0.0;
    double m = 0.0;
    double g_T = 0.0;
    double delta = 0.0;
    double g_H = 0.0;
    ParamSource m_source = ParamSource::Computed;
    ParamSource g_T_source = ParamSource::Computed;
    ParamSource delta_source = ParamSource::Computed;
    ParamSource g_H_source = ParamSource::Computed;
};

/// Average HA depth: (a . b) / w with a the HA distance row.
double depth_m(const DistanceMatrix& d, const StationaryDistribution& b, double w);

/// b-weighted expected distance of one handover, normalized by w:
/// sum_i b_i sum_j P_ij dist(i,j) / w.
double tracking_distance_g_T(const DistanceMatrix& d, const TransitionMatrix& t,
                             const StationaryDistribution& b, double w);

/// b-weighted mean out-degree of the handover graph.
double neighbor_degree_delta(const TransitionMatrix& t, const StationaryDistribution& b, std::size_t n,
                             DeltaMode mode = DeltaMode::Weighted);

/// Mean number of levels from a leaf up to the lowest common ancestor shared
/// with another uniformly chosen distinct leaf, in the complete beta-ary tree
/// of depth D. Exposed for the enumeration tests.
double expected_lca_levels(std::size_t beta, std::size_t depth);

/// Hierarchy junction distance. Models the hierarchy as the complete
/// ceil(delta)-ary tree with at least n leaves (branching is at least 2) and
/// returns w * E[levels to the LCA of two distinct random leaves].
/// An override is returned verbatim. derive_params passes w = 1 so g_H is
/// normalized like m.
double hierarchy_junction_g_H(std::size_t n, double delta, double w, std::optional<double> override_value = {});

/// Junction distance measured on the HA shortest-path tree of an actual
/// graph: sum_i b_i sum_j P_ij (dist(ha,j) - dist(ha,lca(i,j))) / w.
/// Useful as a measured override for g_H.
double measured_junction_distance(const NetworkGraph& g, const DistanceMatrix& d, const TransitionMatrix& t,
                                  const StationaryDistribution& b, double w);

struct DeriveOptions {
    AveragingMode averaging = AveragingMode::Edges;
    DeltaMode delta_mode = DeltaMode::Weighted;
    ParamOverrides overrides;
};

DerivedParams derive_params(const NetworkGraph& g, const DistanceMatrix& d, const TransitionMatrix& t,
                            const StationaryDistribution& b, const DeriveOptions& opts = {});

}  // namespace mobcost
