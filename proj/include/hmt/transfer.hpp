#ifndef HMT_TRANSFER_HPP
#define HMT_TRANSFER_HPP

#include <algorithm>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "hmt/cover.hpp"
#include "hmt/game.hpp"
#include "hmt/verdict.hpp"

namespace hmt {

/// Greedy strictly ascending subsequence, starting from the first member.
inline std::vector<PointSet> thin_to_ascending(const std::vector<PointSet>& sets) {
    std::vector<PointSet> out;
    for (const auto& s : sets)
        if (out.empty() || out.back().is_proper_subset_of(s)) out.push_back(s);
    return out;
}

/// The largest of a nested family of picks; throws if they are not nested.
inline PointSet largest_of_nested(const std::vector<PointSet>& picks) {
    if (picks.empty()) throw std::invalid_argument("empty selection has no largest member");
    PointSet top = picks.front();
    for (const auto& s : picks) {
        if (top.is_subset_of(s)) top = s;
        else if (!s.is_subset_of(top)) throw std::invalid_argument("selected sets are not nested");
    }
    return top;
}

/**
 * Turns Alice's strategy in G1 over ascending covers into a Gfin strategy:
 * the inner offer is thinned to an ascending chain, sets Bob already chose
 * are removed, and each Gfin answer F_n is fed back to the inner strategy
 * as its largest set B_n. Rounds where Bob chose nothing do not advance the
 * inner game.
 */
inline AliceStrategy<PointSet> convert_gfin_to_g1(const AliceStrategy<PointSet>& inner, std::size_t prefix) {
    AliceStrategy<PointSet> out;
    out.name = "thinned(" + inner.name + ")";
    out.move = [inner, prefix](const History<PointSet>& h) {
        History<PointSet> inner_h;
        std::vector<PointSet> used;
        for (const auto& r : h) {
            used.insert(used.end(), r.picks.begin(), r.picks.end());
            if (r.picks.empty()) continue;
            Round<PointSet> ir;
            ir.offer = inner.move(inner_h);
            ir.picks = {largest_of_nested(r.picks)};
            inner_h.push_back(std::move(ir));
        }
        auto offer = inner.move(inner_h);
        std::vector<PointSet> kept;
        for (auto& s : thin_to_ascending(offer.first(prefix)))
            if (std::find(used.begin(), used.end(), s) == used.end()) kept.push_back(std::move(s));
        if (kept.empty()) throw std::runtime_error("thinned cover is empty");
        return cover_offer(Cover::finite("thin(" + offer.name + ")", std::move(kept)), prefix);
    };
    return out;
}

/// B_n for each round with a nonempty answer.
inline std::vector<PointSet> collapse_selections(const GameTranscript<PointSet>& t) {
    std::vector<PointSet> out;
    for (const auto& r : t.rounds)
        if (!r.picks.empty()) out.push_back(largest_of_nested(r.picks));
    return out;
}

/// For each horizon point, the number of rounds whose answer covers it.
inline std::vector<std::size_t> round_multiplicity(const std::vector<std::vector<PointSet>>& rounds, std::size_t horizon) {
    std::vector<std::size_t> m(horizon, 0);
    for (const auto& picks : rounds)
        for (std::size_t x = 0; x < horizon; ++x)
            m[x] += std::any_of(picks.begin(), picks.end(), [x](const PointSet& s) { return s.test(x); }) ? 1 : 0;
    return m;
}

// ---- strategy trees --------------------------------------------------------

using Path = std::vector<std::size_t>;

/// Alice's strategy in G1(Asc, B) as a tree: the cover played after Bob
/// chose members m_1, ..., m_k. nullopt marks a gap.
using StrategyTree = std::function<std::optional<Cover>(const Path&)>;

class TreeGap : public std::runtime_error {
public:
    explicit TreeGap(const Path& p) : std::runtime_error("strategy tree has no cover at " + str(p)), path(p) {}
    Path path;

    static std::string str(const Path& p) {
        std::string s = "(";
        for (std::size_t i = 0; i < p.size(); ++i) s += (i ? "," : "") + std::to_string(p[i]);
        return s + ")";
    }
};

inline Cover tree_at(const StrategyTree& tree, const Path& p) {
    auto c = tree(p);
    if (!c) throw TreeGap(p);
    return *c;
}

/// All sequences of length <= n over {1..n}, shortest first.
inline std::vector<Path> short_paths(std::size_t n) {
    std::vector<Path> out{{}};
    for (std::size_t len = 1, from = 0; len <= n; ++len) {
        const std::size_t to = out.size();
        for (std::size_t i = from; i < to; ++i)
            for (std::size_t v = 1; v <= n; ++v) {
                Path p = out[i];
                p.push_back(v);
                out.push_back(std::move(p));
            }
        from = to;
    }
    return out;
}

/**
 * V_n: the m-th member is the intersection of the m-th members of the covers
 * at all paths in {1..n}^{<=n}; stalls are dropped. Each tree cover must be
 * strictly ascending on the prefix.
 */
inline Cover diagonal_transfer(const StrategyTree& tree, std::size_t n, std::size_t prefix) {
    if (n == 0) throw std::invalid_argument("diagonal index starts at 1");
    if (n > 6) throw std::invalid_argument("diagonal index above 6 is too large to enumerate");
    std::vector<Cover> covers;
    for (const auto& p : short_paths(n)) {
        covers.push_back(tree_at(tree, p));
        covers.back().name = "U" + TreeGap::str(p);
    }
    auto c = intersect_ascending(covers, prefix);
    c.name = "V" + std::to_string(n);
    return c;
}

struct TransferExtraction {
    /// m_1, m_2, ...
    std::vector<std::size_t> m;
    /// Path of the cover each pick came from, and the pick itself.
    std::vector<Path> paths;
    std::vector<PointSet> picked;
    /// For each distinct selection (first occurrence, 0-based index into the
    /// selections), the index of its image in `picked`.
    std::map<std::size_t, std::size_t> f;

    std::vector<std::size_t> fiber_sizes() const {
        std::vector<std::size_t> out(picked.size(), 0);
        for (const auto& [v, u] : f) ++out[u];
        return out;
    }
    bool surjective() const {
        auto fs = fiber_sizes();
        return std::all_of(fs.begin(), fs.end(), [](std::size_t k) { return k > 0; });
    }
    /// Picks along the plays through m_1, m_3, ... (side 0) and m_2, m_4, ... (side 1).
    std::vector<PointSet> play(int side) const {
        std::vector<PointSet> out;
        for (std::size_t i = side; i < picked.size(); i += 2) out.push_back(picked[i]);
        return out;
    }
};

/**
 * Rebuilds the two parallel plays from selections V_1, V_2, ... (V_j a
 * member of the j-th diagonal cover). Step n picks the least m_n > m_{n-1}
 * such that the block V_{m_{n-2}+1..m_{n-1}} (V_1 alone for n = 1) lies in
 * the member m_n of the cover at path (m_1, m_3, .., m_{n-2}) or
 * (m_2, m_4, .., m_{n-2}), that member differs from earlier picks, and a new
 * selection appears among V_{m_{n-1}+1..m_n}. Stops when the selections run
 * out; throws when a block lies in no member of the cover prefix.
 */
inline TransferExtraction extract_transfer(const StrategyTree& tree, const std::vector<PointSet>& sel, std::size_t prefix) {
    if (sel.empty()) throw std::invalid_argument("no selections");
    TransferExtraction x;
    const std::size_t M = sel.size();
    auto seen_before = [&](std::size_t j, std::size_t upto) {  // sel[j] among sel[0..upto)
        for (std::size_t i = 0; i < upto; ++i)
            if (sel[i] == sel[j]) return true;
        return false;
    };
    auto has_new = [&](std::size_t lo, std::size_t hi) {  // 1-based V_lo..V_hi vs V_1..V_{lo-1}
        for (std::size_t j = lo; j <= hi; ++j)
            if (!seen_before(j - 1, lo - 1)) return true;
        return false;
    };
    for (std::size_t n = 1;; ++n) {
        Path path;
        for (std::size_t i = (n % 2 == 1) ? 0 : 1; i + 2 < n; i += 2) path.push_back(x.m[i]);
        const Cover c = tree_at(tree, path);
        const auto members = c.prefix(prefix);
        // the block this step must absorb
        std::size_t lo = 1, hi = 1;
        if (n == 2) lo = 2, hi = x.m[0];
        if (n >= 3) lo = x.m[n - 3] + 1, hi = x.m[n - 2];
        PointSet block(c.universe);
        for (std::size_t j = lo; j <= hi; ++j) block |= sel[j - 1];
        const std::size_t floor = n == 1 ? 1 : x.m[n - 2];
        bool contained_somewhere = false;
        std::optional<std::size_t> pick;
        for (std::size_t mm = floor + 1; mm <= members.size(); ++mm) {
            const PointSet& u = members[mm - 1];
            if (!block.is_subset_of(u)) continue;
            contained_somewhere = true;
            if (std::find(x.picked.begin(), x.picked.end(), u) != x.picked.end()) continue;
            if (mm > M) break;
            if (!has_new(n == 1 ? 2 : floor + 1, mm)) continue;
            pick = mm;
            break;
        }
        if (!pick) {
            if (!contained_somewhere)
                throw std::runtime_error("selections V_" + std::to_string(lo) + "..V_" + std::to_string(hi) +
                                         " refine no member of the cover at " + TreeGap::str(path));
            break;
        }
        x.m.push_back(*pick);
        x.paths.push_back(path);
        x.picked.push_back(members[*pick - 1]);
        for (std::size_t j = lo; j <= hi; ++j)
            if (!seen_before(j - 1, j - 1)) x.f[j - 1] = x.picked.size() - 1;
    }
    return x;
}

// ---- regular families -------------------------------------------------------

using CoverFamily = std::function<Verdict(const std::vector<PointSet>&)>;

struct RegularityReport {
    Verdict partition = Verdict::holds;
    Verdict enlargement = Verdict::holds;
    std::size_t splits_checked = 0;
    std::size_t maps_checked = 0;
    std::string counterexample;
};

namespace detail {

inline std::vector<std::vector<bool>> sample_splits(std::size_t k, std::uint64_t seed) {
    std::vector<std::vector<bool>> out;
    std::vector<bool> parity(k), halves(k);
    for (std::size_t i = 0; i < k; ++i) {
        parity[i] = i % 2 == 1;
        halves[i] = 2 * i >= k;
    }
    out.push_back(parity);
    out.push_back(halves);
    std::mt19937_64 rng(seed);
    for (int r = 0; r < 4; ++r) {
        std::vector<bool> s(k);
        for (std::size_t i = 0; i < k; ++i) s[i] = rng() & 1;
        out.push_back(s);
    }
    return out;
}

inline void worsen(Verdict& acc, Verdict v) {
    if (v == Verdict::fails) acc = Verdict::fails;
    else if (v == Verdict::unknown && acc == Verdict::holds) acc = Verdict::unknown;
}

}  // namespace detail

/**
 * Sampled check of the two regularity conditions on the given covers that
 * belong to the family: (1) when a member splits into two parts one part is
 * in the family; (2) the image under an enlargement U -> U ∪ {x} is in the
 * family, skipping maps that produce the whole space. Maps that glue several
 * members together are left out: at a finite multiplicity threshold they
 * can push a Lambda cover below t although the infinite property survives.
 */
inline RegularityReport check_regular_family(const CoverFamily& family, const std::vector<std::vector<PointSet>>& samples,
                                             std::uint64_t seed = 1) {
    RegularityReport rep;
    for (const auto& c : samples) {
        if (family(c) != Verdict::holds || c.empty()) continue;
        for (const auto& split : detail::sample_splits(c.size(), seed)) {
            std::vector<PointSet> a, b;
            for (std::size_t i = 0; i < c.size(); ++i) (split[i] ? b : a).push_back(c[i]);
            ++rep.splits_checked;
            const Verdict v = either(a.empty() ? Verdict::fails : family(a), b.empty() ? Verdict::fails : family(b));
            if (v == Verdict::fails && rep.partition != Verdict::fails)
                rep.counterexample = "split of a " + std::to_string(c.size()) + "-member cover into " +
                                     std::to_string(a.size()) + "+" + std::to_string(b.size()) + " with neither part in the family";
            detail::worsen(rep.partition, v);
        }
        const std::size_t universe = c.front().size();
        std::vector<std::vector<PointSet>> images;
        for (std::size_t pt = 0; pt < std::min<std::size_t>(universe, 4); ++pt) {
            std::vector<PointSet> img = c;
            for (auto& s : img) s.set(pt);
            images.push_back(img);
        }
        for (auto& img : images) {
            if (std::any_of(img.begin(), img.end(), [](const PointSet& s) { return s.all(); })) continue;
            ++rep.maps_checked;
            const Verdict v = family(drop_duplicates(img));
            if (v == Verdict::fails && rep.enlargement != Verdict::fails)
                rep.counterexample = "enlargement of a " + std::to_string(c.size()) + "-member cover leaves the family";
            detail::worsen(rep.enlargement, v);
        }
    }
    return rep;
}

}  // namespace hmt

#endif
