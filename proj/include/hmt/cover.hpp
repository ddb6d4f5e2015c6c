#ifndef HMT_COVER_HPP
#define HMT_COVER_HPP

#include <algorithm>
#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "hmt/semigroup.hpp"
#include "hmt/verdict.hpp"

namespace hmt {

/**
 * Points {0..universe-1}. A finite space is its universe; a symbolic space
 * (naturals, cofinite sets, ...) is truncated to a universe and checked on
 * the horizon points {0..horizon-1}.
 */
struct Space {
    std::size_t universe = 0;
    std::size_t horizon = 0;
    bool symbolic = false;

    void validate() const {
        if (universe == 0) throw std::invalid_argument("space needs at least one point");
        if (horizon == 0 || horizon > universe) throw std::invalid_argument("horizon must lie in 1..universe");
    }
    PointSet horizon_points() const {
        PointSet p(universe);
        for (std::size_t i = 0; i < horizon; ++i) p.set(i);
        return p;
    }
};

inline PointSet point_range(std::size_t universe, std::size_t lo, std::size_t hi) {
    PointSet p(universe);
    for (std::size_t i = lo; i <= hi && i < universe; ++i) p.set(i);
    return p;
}

/**
 * A sequence U_1, U_2, ... of subsets of a space: finite (explicit members)
 * or generator-backed, in which case only a prefix is ever inspected.
 * `escape(n)`, when present, names a point outside U_1 u ... u U_n.
 */
struct Cover {
    std::string name = "cover";
    std::size_t universe = 0;
    std::optional<std::size_t> length;
    std::function<PointSet(std::size_t)> member;
    std::function<std::optional<std::size_t>(std::size_t)> escape;

    static Cover finite(std::string name, std::vector<PointSet> sets) {
        if (sets.empty()) throw std::invalid_argument("finite cover needs a member");
        Cover c;
        c.name = std::move(name);
        c.universe = sets.front().size();
        for (const auto& s : sets)
            if (s.size() != c.universe) throw std::invalid_argument("cover members must share one universe");
        c.length = sets.size();
        auto shared = std::make_shared<const std::vector<PointSet>>(std::move(sets));
        c.member = [shared](std::size_t i) { return shared->at(i - 1); };
        return c;
    }

    static Cover generated(std::string name, std::size_t universe, std::function<PointSet(std::size_t)> gen,
                           std::function<std::optional<std::size_t>(std::size_t)> escape = nullptr) {
        Cover c;
        c.name = std::move(name);
        c.universe = universe;
        c.member = std::move(gen);
        c.escape = std::move(escape);
        return c;
    }

    bool is_finite() const { return length.has_value(); }

    /// Members 1..n (or all of a shorter finite cover).
    std::vector<PointSet> prefix(std::size_t n) const {
        const std::size_t k = length ? std::min(n, *length) : n;
        std::vector<PointSet> out;
        out.reserve(k);
        for (std::size_t i = 1; i <= k; ++i) {
            auto s = member(i);
            if (s.size() != universe) throw std::invalid_argument("cover member " + std::to_string(i) + " has wrong universe");
            out.push_back(std::move(s));
        }
        return out;
    }
};

/// Intervals [0..m], m = 1, 2, ..., with escape point n + 1.
inline Cover interval_cover(std::size_t universe) {
    return Cover::generated(
        "intervals", universe, [universe](std::size_t m) { return point_range(universe, 0, m); },
        [universe](std::size_t n) -> std::optional<std::size_t> {
            if (n + 1 >= universe) return std::nullopt;
            return n + 1;
        });
}

/// Cofinite sets N \ {n-1}, n = 1, 2, ... (point n-1 is excluded from member n).
inline Cover cofinite_cover(std::size_t universe) {
    return Cover::generated("cofinite", universe, [universe](std::size_t n) {
        PointSet p(universe);
        p.set();
        if (n - 1 < universe) p.reset(n - 1);
        return p;
    });
}

enum class CoverKind { op, asc, lambda, omega, gamma };

inline std::string_view to_string(CoverKind k) {
    switch (k) {
        case CoverKind::op: return "Op";
        case CoverKind::asc: return "Asc";
        case CoverKind::lambda: return "Lambda";
        case CoverKind::omega: return "Omega";
        case CoverKind::gamma: return "Gamma";
    }
    return "?";
}

inline std::optional<CoverKind> cover_kind_from(std::string_view s) {
    for (auto k : {CoverKind::op, CoverKind::asc, CoverKind::lambda, CoverKind::omega, CoverKind::gamma})
        if (s == to_string(k)) return k;
    return std::nullopt;
}

/// Finitary stand-ins for "infinitely many" (t), "every finite set" (s),
/// "all but finitely many" (f); `prefix` members are inspected.
struct CoverParams {
    std::size_t t = 2;
    std::size_t s = 2;
    std::size_t f = 2;
    std::size_t prefix = 32;
};

namespace detail {

/// A finite cover that failed an "eventually" property is refuted; an
/// infinite one may still satisfy it further along.
inline Verdict short_prefix(const Cover& c) { return c.is_finite() ? Verdict::fails : Verdict::unknown; }

inline bool for_each_small_subset(std::size_t horizon, std::size_t s, const std::function<bool(const std::vector<std::size_t>&)>& fn) {
    std::vector<std::size_t> cur;
    std::function<bool(std::size_t)> rec = [&](std::size_t next) {
        if (!cur.empty() && !fn(cur)) return false;
        if (cur.size() == s) return true;
        for (std::size_t p = next; p < horizon; ++p) {
            cur.push_back(p);
            if (!rec(p + 1)) return false;
            cur.pop_back();
        }
        return true;
    };
    return rec(0);
}

}  // namespace detail

/// Classifies a family of sets given as an explicit list (finite cover).
Verdict classify_sets(const std::vector<PointSet>& sets, CoverKind kind, const Space& space, const CoverParams& p,
                      bool finite = true);

/**
 * Classifies the cover at the space's horizon.
 *  Asc: some subsequence V_1 ⊊ ... ⊊ V_r (r >= 2) of the prefix has V_r
 *       containing every horizon point.
 *  Lambda: every horizon point lies in >= t members.
 *  Omega: every set of <= s horizon points lies in a member, and no member is
 *       the whole space (checked on the universe).
 *  Gamma: every horizon point is outside <= f members.
 * Shortfalls on an infinite cover give unknown; a Gamma excess or an Omega
 * member equal to the space fails outright.
 */
inline Verdict classify_cover(const Cover& c, CoverKind kind, const Space& space, const CoverParams& p) {
    space.validate();
    if (c.universe != space.universe) throw std::invalid_argument("cover and space disagree on the universe");
    if (!c.is_finite() && p.prefix == 0) throw std::invalid_argument("empty prefix");
    return classify_sets(c.prefix(p.prefix), kind, space, p, c.is_finite());
}

inline Verdict classify_sets(const std::vector<PointSet>& sets, CoverKind kind, const Space& space,
                             const CoverParams& p, bool finite) {
    const Verdict shortfall = finite ? Verdict::fails : Verdict::unknown;
    const PointSet horizon = space.horizon_points();
    switch (kind) {
        case CoverKind::op: {
            PointSet u(space.universe);
            for (const auto& s : sets) u |= s;
            return horizon.is_subset_of(u) ? Verdict::holds : shortfall;
        }
        case CoverKind::asc: {
            // longest strictly increasing chain ending at each member
            std::vector<std::size_t> len(sets.size(), 1);
            for (std::size_t j = 0; j < sets.size(); ++j) {
                for (std::size_t i = 0; i < j; ++i)
                    if (sets[i].is_proper_subset_of(sets[j])) len[j] = std::max(len[j], len[i] + 1);
                if (len[j] >= 2 && horizon.is_subset_of(sets[j])) return Verdict::holds;
            }
            return shortfall;
        }
        case CoverKind::lambda: {
            for (std::size_t x = 0; x < space.horizon; ++x) {
                std::size_t count = 0;
                for (const auto& s : sets) count += s.test(x) ? 1 : 0;
                if (count < p.t) return shortfall;
            }
            return Verdict::holds;
        }
        case CoverKind::omega: {
            for (const auto& s : sets)
                if (s.all()) return Verdict::fails;
            bool ok = detail::for_each_small_subset(space.horizon, p.s, [&](const std::vector<std::size_t>& pts) {
                return std::any_of(sets.begin(), sets.end(), [&](const PointSet& s) {
                    return std::all_of(pts.begin(), pts.end(), [&](std::size_t x) { return s.test(x); });
                });
            });
            return ok ? Verdict::holds : shortfall;
        }
        case CoverKind::gamma: {
            if (sets.empty()) return shortfall;
            for (std::size_t x = 0; x < space.horizon; ++x) {
                std::size_t out = 0;
                for (const auto& s : sets) out += s.test(x) ? 0 : 1;
                if (out > p.f) return Verdict::fails;
            }
            return Verdict::holds;
        }
    }
    return Verdict::unknown;
}

enum class SubcoverVerdict { found, none_certified, not_a_cover, unknown };

inline std::string_view to_string(SubcoverVerdict v) {
    switch (v) {
        case SubcoverVerdict::found: return "finite-subcover";
        case SubcoverVerdict::none_certified: return "no-finite-subcover";
        case SubcoverVerdict::not_a_cover: return "not-a-cover";
        case SubcoverVerdict::unknown: return "unknown-at-depth";
    }
    return "?";
}

struct SubcoverResult {
    SubcoverVerdict verdict = SubcoverVerdict::unknown;
    /// 1-based member indices of the subcover found.
    std::vector<std::size_t> members;
    /// Escape points x_1..x_n checked outside U_1 u ... u U_n.
    std::vector<std::size_t> escapes;
};

/**
 * Looks for <= max_size members of the prefix covering the horizon. When the
 * cover has an escape function, "no finite subcover" is certified on the
 * prefix by checking x_n outside U_1 u ... u U_n for every n (escape points
 * may lie beyond the horizon). A horizon point in no prefix member of a
 * finite cover, or of an infinite cover without escape data, is reported as
 * not a cover.
 */
inline SubcoverResult has_finite_subcover(const Cover& c, const Space& space, std::size_t max_size, std::size_t prefix) {
    space.validate();
    SubcoverResult r;
    const auto sets = c.prefix(prefix);
    const PointSet horizon = space.horizon_points();
    if (c.escape) {
        PointSet acc(space.universe);
        bool certified = !sets.empty();
        for (std::size_t n = 1; n <= sets.size() && certified; ++n) {
            acc |= sets[n - 1];
            auto x = c.escape(n);
            certified = x && *x < space.universe && !acc.test(*x);
            if (certified) r.escapes.push_back(*x);
        }
        if (certified) {
            r.verdict = SubcoverVerdict::none_certified;
            return r;
        }
        r.escapes.clear();
    }
    PointSet all(space.universe);
    for (const auto& s : sets) all |= s;
    if (!horizon.is_subset_of(all)) {
        r.verdict = (c.is_finite() || !c.escape) ? SubcoverVerdict::not_a_cover : SubcoverVerdict::unknown;
        return r;
    }
    std::vector<std::size_t> pick;
    std::function<bool(std::size_t, const PointSet&)> rec = [&](std::size_t next, const PointSet& acc) {
        if (horizon.is_subset_of(acc)) return true;
        if (pick.size() == max_size) return false;
        for (std::size_t i = next; i < sets.size(); ++i) {
            pick.push_back(i + 1);
            if (rec(i + 1, acc | sets[i])) return true;
            pick.pop_back();
        }
        return false;
    };
    if (rec(0, PointSet(space.universe))) {
        r.verdict = SubcoverVerdict::found;
        r.members = pick;
    }
    return r;
}

/// Drops consecutive repeats, recovering a strictly increasing chain from an
/// ascending one with stalls.
inline std::vector<PointSet> drop_stalls(const std::vector<PointSet>& sets) {
    std::vector<PointSet> out;
    for (const auto& s : sets)
        if (out.empty() || out.back() != s) out.push_back(s);
    return out;
}

/// The family of distinct sets, first occurrences kept in order.
inline std::vector<PointSet> drop_duplicates(const std::vector<PointSet>& sets) {
    std::vector<PointSet> out;
    for (const auto& s : sets)
        if (std::find(out.begin(), out.end(), s) == out.end()) out.push_back(s);
    return out;
}

inline bool is_ascending(const std::vector<PointSet>& sets, bool strict) {
    for (std::size_t i = 1; i < sets.size(); ++i) {
        if (!sets[i - 1].is_subset_of(sets[i])) return false;
        if (strict && sets[i - 1] == sets[i]) return false;
    }
    return true;
}

/**
 * Pointwise intersections U_i ∩ V_i ∩ ... of ascending covers over equal
 * prefixes, with stalls removed. Throws if an input prefix is not strictly
 * ascending or the prefixes differ in length.
 */
inline Cover intersect_ascending(const std::vector<Cover>& covers, std::size_t prefix) {
    if (covers.empty()) throw std::invalid_argument("nothing to intersect");
    std::vector<std::vector<PointSet>> pre;
    for (const auto& c : covers) {
        pre.push_back(c.prefix(prefix));
        if (pre.back().size() != pre.front().size()) throw std::invalid_argument("prefix lengths differ");
        if (!is_ascending(pre.back(), true)) throw std::invalid_argument("cover '" + c.name + "' is not ascending");
    }
    std::vector<PointSet> out = pre.front();
    for (std::size_t k = 1; k < pre.size(); ++k)
        for (std::size_t i = 0; i < out.size(); ++i) out[i] &= pre[k][i];
    std::string name = "meet(";
    for (std::size_t k = 0; k < covers.size(); ++k) name += (k ? "," : "") + covers[k].name;
    return Cover::finite(name + ")", drop_stalls(out));
}

}  // namespace hmt

#endif
