#pragma once

// Independent reference implementations used by the unit and acceptance
// tests. They share no code with the library.

#include <cstddef>
#include <cmath>
#include <functional>
#include <limits>
#include <vector>

namespace oracle {

using Weights = std::vector<std::vector<double>>;

// Cheapest simple path for every ordered pair by exhaustive DFS.
// Infinity marks unreachable pairs.
inline Weights simple_path_distances(const Weights& w) {
    const std::size_t n = w.size();
    const double inf = std::numeric_limits<double>::infinity();
    Weights best(n, std::vector<double>(n, inf));
    std::vector<bool> on_path(n, false);
    std::function<void(std::size_t, std::size_t, double)> dfs = [&](std::size_t src, std::size_t at, double len) {
        if (len < best[src][at]) best[src][at] = len;
        for (std::size_t k = 0; k < n; ++k) {
            if (k == at || w[at][k] <= 0.0 || on_path[k]) continue;
            on_path[k] = true;
            dfs(src, k, len + w[at][k]);
            on_path[k] = false;
        }
    };
    for (std::size_t s = 0; s < n; ++s) {
        on_path.assign(n, false);
        on_path[s] = true;
        dfs(s, s, 0.0);
    }
    return best;
}

// Mean number of levels from a leaf up to its lowest common ancestor with
// another distinct leaf, over all ordered leaf pairs of the complete
// beta-ary tree of the given depth. Leaves are numbered 0..beta^depth-1 and
// two leaves share an ancestor at level l iff their indices agree after
// dividing by beta^l.
inline double lca_levels_by_enumeration(std::size_t beta, std::size_t depth) {
    std::size_t leaves = 1;
    for (std::size_t i = 0; i < depth; ++i) leaves *= beta;
    double total = 0.0;
    double pairs = 0.0;
    for (std::size_t a = 0; a < leaves; ++a)
        for (std::size_t b = 0; b < leaves; ++b) {
            if (a == b) continue;
            std::size_t level = 0, x = a, y = b;
            while (x != y) {
                x /= beta;
                y /= beta;
                ++level;
            }
            total += static_cast<double>(level);
            pairs += 1.0;
        }
    return total / pairs;
}

// Stationary vector of a small chain by Gauss-Jordan elimination on
// pi P = pi, sum pi = 1 (P row-stochastic).
inline std::vector<double> stationary_by_elimination(const Weights& p) {
    const std::size_t n = p.size();
    Weights a(n, std::vector<double>(n + 1, 0.0));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) a[i][j] = p[j][i] - (i == j ? 1.0 : 0.0);
    }
    for (std::size_t j = 0; j < n; ++j) a[n - 1][j] = 1.0;
    a[n - 1][n] = 1.0;
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t piv = c;
        for (std::size_t r = c + 1; r < n; ++r)
            if (std::abs(a[r][c]) > std::abs(a[piv][c])) piv = r;
        std::swap(a[c], a[piv]);
        for (std::size_t r = 0; r < n; ++r) {
            if (r == c) continue;
            const double f = a[r][c] / a[c][c];
            for (std::size_t k = c; k <= n; ++k) a[r][k] -= f * a[c][k];
        }
    }
    std::vector<double> x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = a[i][n] / a[i][i];
    return x;
}

}  // namespace oracle
