#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "mobcost/graph.hpp"
#include "mobcost/mobility.hpp"

namespace testing {

using Edge = std::pair<std::size_t, std::size_t>;

inline mobcost::Matrix undirected(std::size_t n, const std::vector<Edge>& edges, double w = 1.0) {
    mobcost::Matrix m = mobcost::Matrix::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    for (auto [a, b] : edges) {
        m(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) = w;
        m(static_cast<Eigen::Index>(b), static_cast<Eigen::Index>(a)) = w;
    }
    return m;
}

inline mobcost::Matrix directed_rates(std::size_t n, const std::vector<Edge>& pairs, double r = 1.0) {
    mobcost::Matrix m = mobcost::Matrix::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    for (auto [a, b] : pairs) m(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) = r;
    return m;
}

inline std::vector<bool> flags(std::size_t n, const std::vector<std::size_t>& maps) {
    std::vector<bool> f(n, false);
    for (auto i : maps) f[i] = true;
    return f;
}

inline std::vector<Edge> all_pairs(const std::vector<std::size_t>& nodes) {
    std::vector<Edge> out;
    for (auto a : nodes)
        for (auto b : nodes)
            if (a != b) out.emplace_back(a, b);
    return out;
}

// HA (0) - relay (1) - four leaf MAPs (2..5), all-to-all handovers.
struct RelayStar {
    mobcost::NetworkGraph graph{undirected(6, {{0, 1}, {1, 2}, {1, 3}, {1, 4}, {1, 5}}), flags(6, {2, 3, 4, 5}), 0};
    mobcost::RateMatrix rates{directed_rates(6, all_pairs({2, 3, 4, 5})), flags(6, {2, 3, 4, 5})};
};

inline std::string fixture(const std::string& name) { return std::string(MOBCOST_FIXTURE_DIR) + "/" + name; }

}  // namespace testing
