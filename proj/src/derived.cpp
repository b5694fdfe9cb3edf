#include "mobcost/derived.hpp"

#include <algorithm>
#include <cmath>

#include "mobcost/error.hpp"

namespace mobcost {
namespace {

constexpr const char* kModule = "derived-params";

void require_positive_w(double w) {
    if (!(w > 0.0) || !std::isfinite(w)) throw Error(kModule, "average weight w must be positive");
}

void require_same_size(std::size_t a, std::size_t b) {
    if (a != b) throw Error(kModule, "input sizes do not match");
}

std::size_t ipow(std::size_t base, std::size_t exp) {
    std::size_t r = 1;
    for (std::size_t i = 0; i < exp; ++i) r *= base;
    return r;
}

}  // namespace

std::string to_string(ParamSource s) {
    switch (s) {
        case ParamSource::Computed: return "computed";
        case ParamSource::Overridden: return "overridden";
        case ParamSource::Clamped: return "computed-clamped";
        case ParamSource::Measured: return "measured";
    }
    return "unknown";
}

double depth_m(const DistanceMatrix& d, const StationaryDistribution& b, double w) {
    require_positive_w(w);
    require_same_size(d.size(), b.size());
    return d.ha_row.dot(b.b) / w;
}

double tracking_distance_g_T(const DistanceMatrix& d, const TransitionMatrix& t,
                             const StationaryDistribution& b, double w) {
    require_positive_w(w);
    require_same_size(d.size(), t.size());
    require_same_size(d.size(), b.size());
    // Row sums of the elementwise product give the expected hop distance per MAP.
    const Vector per_map = d.dist.cwiseProduct(t.probs()).rowwise().sum();
    return b.b.dot(per_map) / w;
}

double neighbor_degree_delta(const TransitionMatrix& t, const StationaryDistribution& b, std::size_t n,
                             DeltaMode mode) {
    require_same_size(t.size(), b.size());
    double delta = 0.0;
    for (std::size_t i = 0; i < t.size(); ++i) {
        std::size_t degree = 0;
        for (std::size_t j = 0; j < t.size(); ++j)
            if (t(i, j) > 0.0) ++degree;
        delta += b[i] * static_cast<double>(degree);
    }
    if (mode == DeltaMode::LiteralN) {
        if (n == 0) throw Error(kModule, "node count must be positive");
        delta /= static_cast<double>(n);
    }
    return delta;
}

double expected_lca_levels(std::size_t beta, std::size_t depth) {
    if (beta < 2 || depth < 1) throw Error(kModule, "tree needs branching >= 2 and depth >= 1");
    const double others = static_cast<double>(ipow(beta, depth) - 1);
    double expectation = 0.0;
    for (std::size_t l = 1; l <= depth; ++l) {
        const double at_level = static_cast<double>(ipow(beta, l) - ipow(beta, l - 1));
        expectation += static_cast<double>(l) * at_level / others;
    }
    return expectation;
}

double hierarchy_junction_g_H(std::size_t n, double delta, double w, std::optional<double> override_value) {
    if (override_value) return *override_value;
    if (n < 2) throw Error(kModule, "junction model needs at least 2 MAPs");
    if (!(delta >= 1.0)) throw Error(kModule, "neighbour degree delta must be >= 1");
    require_positive_w(w);
    // Non-integer delta rounds up; a chain (delta < 2) is widened to a binary tree.
    const auto beta = std::max<std::size_t>(2, static_cast<std::size_t>(std::ceil(delta - 1e-12)));
    std::size_t depth = 0;
    for (std::size_t leaves = 1; leaves < n; leaves *= beta) ++depth;
    return w * expected_lca_levels(beta, depth);
}

double measured_junction_distance(const NetworkGraph& g, const DistanceMatrix& d, const TransitionMatrix& t,
                                  const StationaryDistribution& b, double w) {
    require_positive_w(w);
    const RootedTree tree = shortest_path_tree(g, d);
    const std::size_t ha = g.ha();
    double total = 0.0;
    for (std::size_t i = 0; i < t.size(); ++i) {
        if (b[i] == 0.0) continue;
        double row = 0.0;
        for (std::size_t j = 0; j < t.size(); ++j) {
            if (t(i, j) == 0.0) continue;
            const std::size_t junction = tree.lowest_common_ancestor(i, j);
            row += t(i, j) * (d(ha, j) - d(ha, junction));
        }
        total += b[i] * row;
    }
    return total / w;
}

DerivedParams derive_params(const NetworkGraph& g, const DistanceMatrix& d, const TransitionMatrix& t,
                            const StationaryDistribution& b, const DeriveOptions& opts) {
    DerivedParams p;
    p.w = average_weight(g, opts.averaging);
    const auto& ov = opts.overrides;

    if (ov.m) {
        p.m = *ov.m;
        p.m_source = ParamSource::Overridden;
    } else {
        p.m = depth_m(d, b, p.w);
    }
    if (ov.g_T) {
        p.g_T = *ov.g_T;
        p.g_T_source = ParamSource::Overridden;
    } else {
        p.g_T = tracking_distance_g_T(d, t, b, p.w);
    }
    if (ov.delta) {
        p.delta = *ov.delta;
        p.delta_source = ParamSource::Overridden;
    } else {
        p.delta = neighbor_degree_delta(t, b, g.size(), opts.delta_mode);
    }
    if (ov.g_H) {
        p.g_H = *ov.g_H;
        p.g_H_source = ParamSource::Overridden;
    } else {
        // The tree model's delta is the branching factor; the literal /n
        // reading would drive it below 1, so the model always uses the
        // weighted degree.
        const double branching = ov.delta ? *ov.delta : neighbor_degree_delta(t, b, g.size(), DeltaMode::Weighted);
        // Normalized like m: levels of the modelled tree, one link each.
        p.g_H = hierarchy_junction_g_H(g.map_count(), branching, 1.0);
        // The junction lies on the HA path, so it can never be deeper than m.
        if (p.g_H > p.m) {
            p.g_H = p.m;
            p.g_H_source = ParamSource::Clamped;
        }
    }
    for (double v : {p.m, p.g_T, p.delta, p.g_H})
        if (!(v >= 0.0) || !std::isfinite(v)) throw Error(kModule, "derived parameters must be finite and >= 0");
    return p;
}

}  // namespace mobcost
