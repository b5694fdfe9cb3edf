#include "mobcost/graph.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "mobcost/error.hpp"

namespace mobcost {
namespace {

constexpr const char* kModule = "graph-core";

bool on_shortest_path(double via, double direct) {
    return std::abs(via - direct) <= 1e-9 * std::max(1.0, std::abs(direct));
}

}  // namespace

NetworkGraph::NetworkGraph(Matrix weights, std::vector<bool> is_map, std::size_t ha)
    : weights_(std::move(weights)), is_map_(std::move(is_map)), ha_(ha) {
    const auto n = weights_.rows();
    if (n < 1 || weights_.cols() != n)
        throw Error(kModule, "weight matrix must be square and non-empty");
    if (static_cast<Eigen::Index>(is_map_.size()) != n)
        throw Error(kModule, "MAP flag count " + std::to_string(is_map_.size()) +
                                 " does not match node count " + std::to_string(n));
    if (ha_ >= static_cast<std::size_t>(n))
        throw Error(kModule, "HA index " + std::to_string(ha_) + " out of range");
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
            const double w = weights_(i, j);
            if (!std::isfinite(w) || w < 0.0)
                throw Error(kModule, "weight (" + std::to_string(i) + "," + std::to_string(j) +
                                         ") must be finite and non-negative");
        }
        if (weights_(i, i) != 0.0)
            throw Error(kModule, "diagonal weight at node " + std::to_string(i) + " must be 0");
    }
    if (map_count() == 0) throw Error(kModule, "at least one node must be a MAP");
}

std::size_t NetworkGraph::map_count() const noexcept {
    std::size_t count = 0;
    for (bool flag : is_map_) count += flag ? 1 : 0;
    return count;
}

std::vector<std::size_t> NetworkGraph::maps() const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < is_map_.size(); ++i)
        if (is_map_[i]) out.push_back(i);
    return out;
}

DistanceMatrix all_pairs_distances(const NetworkGraph& g) {
    const auto n = static_cast<Eigen::Index>(g.size());
    constexpr double inf = std::numeric_limits<double>::infinity();
    Matrix dist = Matrix::Constant(n, n, inf);
    for (Eigen::Index i = 0; i < n; ++i) {
        dist(i, i) = 0.0;
        for (Eigen::Index j = 0; j < n; ++j)
            if (i != j && g.weights()(i, j) > 0.0) dist(i, j) = g.weights()(i, j);
    }
    for (Eigen::Index k = 0; k < n; ++k)
        for (Eigen::Index i = 0; i < n; ++i) {
            const double dik = dist(i, k);
            if (dik == inf) continue;
            for (Eigen::Index j = 0; j < n; ++j) {
                const double via = dik + dist(k, j);
                if (via < dist(i, j)) dist(i, j) = via;
            }
        }
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j)
            if (dist(i, j) == inf)
                throw Error(kModule, "graph is not strongly connected: node " + std::to_string(j) +
                                         " unreachable from node " + std::to_string(i));
    DistanceMatrix out;
    out.ha_row = dist.row(static_cast<Eigen::Index>(g.ha())).transpose();
    out.dist = std::move(dist);
    return out;
}

double average_weight(const NetworkGraph& g, AveragingMode mode) {
    const Matrix& w = g.weights();
    std::size_t edges = 0;
    for (Eigen::Index i = 0; i < w.rows(); ++i)
        for (Eigen::Index j = 0; j < w.cols(); ++j)
            if (w(i, j) > 0.0) ++edges;
    if (edges == 0) throw Error(kModule, "graph has no edges; average weight undefined");
    const double total = w.sum();
    if (mode == AveragingMode::LiteralN2) return total / static_cast<double>(w.size());
    return total / static_cast<double>(edges);
}

std::size_t RootedTree::lowest_common_ancestor(std::size_t u, std::size_t v) const {
    while (depth[u] > depth[v]) u = parent[u];
    while (depth[v] > depth[u]) v = parent[v];
    while (u != v) {
        u = parent[u];
        v = parent[v];
    }
    return u;
}

RootedTree shortest_path_tree(const NetworkGraph& g, const DistanceMatrix& d) {
    const std::size_t n = g.size();
    const std::size_t root = g.ha();
    RootedTree tree;
    tree.root = root;
    tree.parent.assign(n, root);
    tree.depth.assign(n, 0);
    for (std::size_t v = 0; v < n; ++v) {
        if (v == root) continue;
        bool found = false;
        for (std::size_t u = 0; u < n && !found; ++u) {
            if (!g.has_edge(u, v)) continue;
            if (on_shortest_path(d(root, u) + g.weight(u, v), d(root, v))) {
                tree.parent[v] = u;
                found = true;
            }
        }
        if (!found) throw Error(kModule, "no shortest-path parent for node " + std::to_string(v));
    }
    // Parents have strictly smaller HA distance, so resolving depths in
    // increasing-distance order never reads an unresolved parent.
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return d(root, a) < d(root, b); });
    for (std::size_t v : order)
        if (v != root) tree.depth[v] = tree.depth[tree.parent[v]] + 1;
    return tree;
}

std::vector<std::vector<int>> shortest_path_hops(const NetworkGraph& g, const DistanceMatrix& d) {
    const std::size_t n = g.size();
    std::vector<std::vector<int>> hops(n, std::vector<int>(n, 0));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            std::size_t at = i;
            int count = 0;
            while (at != j) {
                std::size_t next = n;
                for (std::size_t k = 0; k < n; ++k) {
                    if (g.has_edge(at, k) && on_shortest_path(g.weight(at, k) + d(k, j), d(at, j))) {
                        next = k;
                        break;
                    }
                }
                if (next == n || count > static_cast<int>(n))
                    throw Error(kModule, "cannot trace shortest path " + std::to_string(i) + "->" +
                                             std::to_string(j));
                at = next;
                ++count;
            }
            hops[i][j] = count;
        }
    return hops;
}

}  // namespace mobcost
