#ifndef HMT_THRESHOLD_HPP
#define HMT_THRESHOLD_HPP

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <vector>

#include "hmt/coloring.hpp"
#include "hmt/parallel.hpp"

namespace hmt {

struct ThresholdResult {
    /// found: `threshold` is exact. budget_exhausted: only `lower_bound` is known.
    SearchStatus status = SearchStatus::budget_exhausted;
    std::uint64_t threshold = 0;
    /// Every N below this admits an avoider.
    std::uint64_t lower_bound = 0;
    /// Avoider coloring of {1..threshold-1}, index 0 unused.
    std::vector<Color> avoider;
    std::uint64_t nodes = 0;
};

/**
 * Least N such that every k-coloring of {1..N} has x, y (x = y allowed iff
 * allow_repeats) with {x, y, x+y} monochromatic. Colors are assigned to
 * 1, 2, ... in order as restricted growth strings (a new color is used only
 * after all smaller ones), which removes color permutations. The deepest
 * assignment reached is the longest avoider.
 */
inline ThresholdResult threshold_search(std::size_t k, std::size_t m, bool allow_repeats, std::uint64_t max_n = 200,
                                        std::uint64_t node_limit = 10'000'000) {
    if (k == 0) throw std::invalid_argument("palette must be at least 1");
    if (m != 2) throw std::invalid_argument("threshold search supports m = 2 only");
    ThresholdResult r;
    std::vector<Color> col(max_n + 2, 0);
    std::vector<Color> best(1, 0);
    std::uint64_t deepest = 0;
    bool out_of_nodes = false;

    std::function<void(std::uint64_t, Color)> dfs = [&](std::uint64_t z, Color used) {
        if (out_of_nodes) return;
        if (z - 1 > deepest) {
            deepest = z - 1;
            best.assign(col.begin(), col.begin() + static_cast<std::ptrdiff_t>(z));
        }
        if (z > max_n) return;
        const Color top = std::min<Color>(static_cast<Color>(k), used + 1);
        for (Color c = 1; c <= top; ++c) {
            if (++r.nodes > node_limit) {
                out_of_nodes = true;
                return;
            }
            bool ok = true;
            for (std::uint64_t x = 1; 2 * x <= z && ok; ++x) {
                const std::uint64_t y = z - x;
                if (x == y && !allow_repeats) continue;
                ok = !(col[x] == c && col[y] == c);
            }
            if (!ok) continue;
            col[z] = c;
            dfs(z + 1, std::max(used, c));
            col[z] = 0;
            if (deepest == max_n) return;
        }
    };
    dfs(1, 0);

    r.lower_bound = deepest + 1;
    if (out_of_nodes || deepest == max_n) {
        r.status = SearchStatus::budget_exhausted;
        return r;
    }
    r.status = SearchStatus::found;
    r.threshold = deepest + 1;
    r.avoider = best;
    return r;
}

/// Checks that `col` (index 0 unused) has no monochromatic {x, y, x+y}.
inline bool is_avoider(const std::vector<Color>& col, bool allow_repeats) {
    const std::uint64_t n = col.size() - 1;
    for (std::uint64_t x = 1; x <= n; ++x)
        for (std::uint64_t y = allow_repeats ? x : x + 1; x + y <= n; ++y)
            if (col[x] == col[y] && col[y] == col[x + y]) return false;
    return true;
}

}  // namespace hmt

#endif
