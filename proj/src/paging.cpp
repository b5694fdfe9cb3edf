#include "mobcost/paging.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "mobcost/error.hpp"

namespace mobcost {
namespace {

constexpr const char* kModule = "paging-planner";
constexpr std::size_t kMaxStarts = 64;

struct Assignment {
    std::vector<std::size_t> area_of_map;  // parallel to the MAP list
    double objective = 0.0;
};

Assignment assign(const std::vector<std::size_t>& maps, const std::vector<std::size_t>& heads,
                  const DistanceMatrix& d, const StationaryDistribution& b) {
    Assignment out;
    out.area_of_map.resize(maps.size());
    for (std::size_t k = 0; k < maps.size(); ++k) {
        const std::size_t i = maps[k];
        std::size_t best = 0;
        for (std::size_t a = 1; a < heads.size(); ++a) {
            const double da = d(i, heads[a]);
            const double db = d(i, heads[best]);
            if (da < db || (da == db && heads[a] < heads[best])) best = a;
        }
        out.area_of_map[k] = best;
        out.objective += b[i] * d(i, heads[best]);
    }
    return out;
}

struct Seeded {
    std::vector<std::size_t> heads;
    Assignment assignment;
};

// Farthest-point seeding from `first`, then single head swaps while the
// objective strictly decreases.
Seeded local_search(const NetworkGraph& g, const std::vector<std::size_t>& maps, const DistanceMatrix& d,
                    const StationaryDistribution& b, std::size_t target_areas, std::size_t first) {
    std::vector<std::size_t> heads{first};
    std::vector<bool> is_head(g.size(), false);
    is_head[first] = true;
    while (heads.size() < target_areas) {
        std::size_t pick = maps.front();
        double pick_gap = -1.0;
        for (std::size_t i : maps) {
            if (is_head[i]) continue;
            double gap = d(i, heads.front());
            for (std::size_t h : heads) gap = std::min(gap, d(i, h));
            if (gap > pick_gap) {
                pick_gap = gap;
                pick = i;
            }
        }
        heads.push_back(pick);
        is_head[pick] = true;
    }

    Assignment current = assign(maps, heads, d, b);
    const double eps = 1e-12 * std::max(1.0, current.objective);
    bool improved = true;
    while (improved) {
        improved = false;
        for (std::size_t a = 0; a < heads.size() && !improved; ++a) {
            for (std::size_t x : maps) {
                if (is_head[x]) continue;
                std::vector<std::size_t> trial = heads;
                trial[a] = x;
                Assignment candidate = assign(maps, trial, d, b);
                if (candidate.objective < current.objective - eps) {
                    is_head[heads[a]] = false;
                    is_head[x] = true;
                    heads = std::move(trial);
                    current = std::move(candidate);
                    improved = true;
                    break;
                }
            }
        }
    }

    return Seeded{std::move(heads), std::move(current)};
}

}  // namespace

double boundary_crossing_probability(const std::vector<std::optional<std::size_t>>& area_of,
                                     const StationaryDistribution& b, const TransitionMatrix& t) {
    double p = 0.0;
    for (std::size_t i = 0; i < t.size(); ++i) {
        if (!area_of[i] || b[i] == 0.0) continue;
        double leave = 0.0;
        for (std::size_t j = 0; j < t.size(); ++j)
            if (t(i, j) > 0.0 && area_of[j] != area_of[i]) leave += t(i, j);
        p += b[i] * leave;
    }
    return std::clamp(p, 0.0, 1.0);
}

PagingPlan plan_from_assignment(const NetworkGraph& g, const DistanceMatrix& d, const StationaryDistribution& b,
                                const TransitionMatrix& t, std::vector<std::optional<std::size_t>> area_of,
                                std::vector<std::size_t> heads, double w) {
    const std::size_t n = g.size();
    if (!(w > 0.0)) throw Error(kModule, "average weight w must be positive");
    if (area_of.size() != n) throw Error(kModule, "area assignment must list every node");
    if (heads.empty()) throw Error(kModule, "plan needs at least one area head");
    std::vector<std::size_t> members(heads.size(), 0);
    for (std::size_t i = 0; i < n; ++i) {
        if (g.is_map(i) && !area_of[i]) throw Error(kModule, "MAP " + std::to_string(i) + " is not assigned to an area");
        if (!g.is_map(i) && area_of[i]) throw Error(kModule, "non-MAP node " + std::to_string(i) + " cannot join an area");
        if (area_of[i]) {
            if (*area_of[i] >= heads.size())
                throw Error(kModule, "MAP " + std::to_string(i) + " assigned to unknown area " +
                                         std::to_string(*area_of[i]));
            ++members[*area_of[i]];
        }
    }
    for (std::size_t a = 0; a < heads.size(); ++a) {
        const std::size_t h = heads[a];
        if (h >= n || !area_of[h] || *area_of[h] != a)
            throw Error(kModule, "head " + std::to_string(h) + " lies outside its area " + std::to_string(a));
        if (members[a] == 0) throw Error(kModule, "area " + std::to_string(a) + " is empty");
    }

    PagingPlan plan;
    plan.n_d = heads.size();
    plan.n_C = static_cast<double>(g.map_count()) / static_cast<double>(plan.n_d);
    for (std::size_t i = 0; i < n; ++i)
        if (area_of[i]) plan.objective += b[i] * d(i, heads[*area_of[i]]);
    plan.g_C = plan.objective / w;
    plan.P_cell = boundary_crossing_probability(area_of, b, t);
    plan.area_of = std::move(area_of);
    plan.heads = std::move(heads);
    return plan;
}

PagingPlan plan_areas(const NetworkGraph& g, const DistanceMatrix& d, const StationaryDistribution& b,
                      const TransitionMatrix& t, std::size_t target_areas, double w) {
    const std::vector<std::size_t> maps = g.maps();
    if (target_areas < 1 || target_areas > maps.size())
        throw Error(kModule, "target_areas " + std::to_string(target_areas) + " must lie in [1, " +
                                 std::to_string(maps.size()) + "]");

    // Swap search has local optima, so it is restarted from several seeds in
    // node-index order; the first strictly best result wins.
    const std::size_t starts = std::min<std::size_t>(maps.size(), kMaxStarts);
    Seeded best = local_search(g, maps, d, b, target_areas, maps.front());
    for (std::size_t s = 1; s < starts; ++s) {
        Seeded candidate = local_search(g, maps, d, b, target_areas, maps[s]);
        if (candidate.assignment.objective < best.assignment.objective - 1e-12 * std::max(1.0, best.assignment.objective))
            best = std::move(candidate);
    }
    std::vector<std::size_t> heads = std::move(best.heads);
    const Assignment& current = best.assignment;

    std::vector<std::optional<std::size_t>> area_of(g.size());
    for (std::size_t k = 0; k < maps.size(); ++k) area_of[maps[k]] = current.area_of_map[k];
    return plan_from_assignment(g, d, b, t, std::move(area_of), std::move(heads), w);
}

}  // namespace mobcost
