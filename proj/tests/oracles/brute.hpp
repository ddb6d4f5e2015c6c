#ifndef HMT_TESTS_BRUTE_HPP
#define HMT_TESTS_BRUTE_HPP

// Deliberately naive reference computations. Nothing here reuses the
// library's masks, tables or search code.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <set>
#include <vector>

namespace oracle {

using Index = std::vector<int>;

// All nonempty subsets of {1..n}, each sorted, built by recursion.
inline std::vector<Index> subsets(int n) {
    std::vector<Index> out;
    Index cur;
    std::function<void(int)> go = [&](int i) {
        if (i > n) {
            if (!cur.empty()) out.push_back(cur);
            return;
        }
        go(i + 1);
        cur.push_back(i);
        go(i + 1);
        cur.pop_back();
    };
    go(1);
    return out;
}

inline bool before(const Index& f, const Index& h) { return f.back() < h.front(); }

inline long long sum_over(const std::vector<long long>& a, const Index& f) {
    long long s = 0;
    for (int i : f) s += a[i - 1];
    return s;
}

// Distinct edges {a_F, a_H}, F < H, as sorted pairs.
inline std::set<std::pair<long long, long long>> sum_graph(const std::vector<long long>& a) {
    std::set<std::pair<long long, long long>> out;
    auto subs = subsets(static_cast<int>(a.size()));
    for (const auto& f : subs)
        for (const auto& h : subs)
            if (before(f, h)) {
                auto x = sum_over(a, f), y = sum_over(a, h);
                out.insert({std::min(x, y), std::max(x, y)});
            }
    return out;
}

inline bool proper(const std::vector<long long>& a) {
    auto subs = subsets(static_cast<int>(a.size()));
    for (const auto& f : subs)
        for (const auto& h : subs)
            if (before(f, h) && sum_over(a, f) == sum_over(a, h)) return false;
    return true;
}

// Does every k-coloring of {1..n} contain x, y (x == y allowed iff repeats)
// with x, y, x + y <= n all one color? Plain base-k counting, no symmetry.
inline bool every_coloring_has_triple(int k, int n, bool repeats, std::vector<int>* avoider = nullptr) {
    std::vector<int> col(n + 1, 0);
    long long total = 1;
    for (int i = 0; i < n; ++i) total *= k;
    for (long long code = 0; code < total; ++code) {
        long long c = code;
        for (int i = 1; i <= n; ++i) {
            col[i] = static_cast<int>(c % k);
            c /= k;
        }
        bool found = false;
        for (int x = 1; x <= n && !found; ++x)
            for (int y = repeats ? x : x + 1; x + y <= n && !found; ++y)
                found = col[x] == col[y] && col[y] == col[x + y];
        if (!found) {
            if (avoider) *avoider = col;
            return false;
        }
    }
    return true;
}

}  // namespace oracle

#endif
