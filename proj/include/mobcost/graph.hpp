#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/Dense>

namespace mobcost {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Directed, weighted graph of Mobility Agents. A zero off-diagonal weight
/// means "no direct link". Weights are relative and dimensionless.
class NetworkGraph {
public:
    /// Validates shape, non-negativity, zero diagonal, HA range and that at
    /// least one node is a MAP. Strong connectivity is checked when distances
    /// are computed, so the error can name the unreachable pair.
    NetworkGraph(Matrix weights, std::vector<bool> is_map, std::size_t ha);

    std::size_t size() const noexcept { return static_cast<std::size_t>(weights_.rows()); }
    const Matrix& weights() const noexcept { return weights_; }
    double weight(std::size_t from, std::size_t to) const { return weights_(from, to); }
    bool has_edge(std::size_t from, std::size_t to) const { return from != to && weights_(from, to) > 0.0; }
    const std::vector<bool>& is_map() const noexcept { return is_map_; }
    bool is_map(std::size_t i) const { return is_map_[i]; }
    std::size_t ha() const noexcept { return ha_; }
    std::size_t map_count() const noexcept;
    std::vector<std::size_t> maps() const;

private:
    Matrix weights_;
    std::vector<bool> is_map_;
    std::size_t ha_;
};

struct DistanceMatrix {
    Matrix dist;    ///< dist(i, j): cheapest directed path weight i -> j
    Vector ha_row;  ///< distances from the HA, row `ha` of dist

    std::size_t size() const noexcept { return static_cast<std::size_t>(dist.rows()); }
    double operator()(std::size_t i, std::size_t j) const { return dist(i, j); }
};

/// Floyd-Warshall over the nonzero-weight edges. Throws mobcost::Error naming
/// the first unreachable (from, to) pair when the graph is not strongly
/// connected.
DistanceMatrix all_pairs_distances(const NetworkGraph& g);

enum class AveragingMode {
    Edges,      ///< mean over existing (nonzero) directed edges
    LiteralN2,  ///< sum of all entries divided by n^2
};

double average_weight(const NetworkGraph& g, AveragingMode mode = AveragingMode::Edges);

/// Shortest-path tree rooted at the HA. parent[v] is the lowest-index node u
/// with dist(ha,u) + w(u,v) == dist(ha,v); parent[ha] == ha. depth counts edges.
struct RootedTree {
    std::vector<std::size_t> parent;
    std::vector<std::size_t> depth;
    std::size_t root = 0;

    std::size_t lowest_common_ancestor(std::size_t u, std::size_t v) const;
};

RootedTree shortest_path_tree(const NetworkGraph& g, const DistanceMatrix& d);

/// Number of edges on the deterministic shortest path i -> j (at every step
/// the lowest-index neighbour that stays on a shortest path is taken).
std::vector<std::vector<int>> shortest_path_hops(const NetworkGraph& g, const DistanceMatrix& d);

}  // namespace mobcost
