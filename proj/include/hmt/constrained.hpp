#ifndef HMT_CONSTRAINED_HPP
#define HMT_CONSTRAINED_HPP

#include <boost/rational.hpp>

#include <algorithm>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "hmt/chain.hpp"
#include "hmt/semigroup.hpp"

namespace hmt {

/// A set of positive naturals, enumerated inside {1..64}.
struct NatSubset {
    std::string name;
    std::function<bool(unsigned)> contains;

    /// a_n, the n-th element, or nullopt above 64.
    std::optional<unsigned> nth(std::size_t n) const {
        std::size_t seen = 0;
        for (unsigned x = 1; x <= 64; ++x)
            if (contains(x) && ++seen == n) return x;
        return std::nullopt;
    }
    /// Index of x in the enumeration (x must belong to the set).
    std::size_t index_of(unsigned x) const {
        std::size_t i = 0;
        for (unsigned y = 1; y <= x; ++y) i += contains(y) ? 1 : 0;
        return i;
    }
};

/**
 * Families F_1, F_2, ... of finite sets. witness(n, lo) returns a member of
 * F_n inside A ∩ [lo, ∞), standing in for "every cofinite subset of A
 * contains a member of each family".
 */
struct FamilySequence {
    std::string name;
    std::function<bool(std::size_t, const FinSet&)> member;
    std::function<std::optional<FinSet>(std::size_t, unsigned)> witness;
    /// F contains some member of F_n; defaults to a search over subsets.
    std::function<bool(std::size_t, const FinSet&)> contains_member;
};

namespace detail {

inline bool some_subset_in(const FamilySequence& fam, std::size_t n, const FinSet& f) {
    if (fam.contains_member) return fam.contains_member(n, f);
    if (f.size() > 20) throw std::invalid_argument("set too large for a subset search");
    const auto bits = f.bits();
    for (std::uint64_t sub = bits; sub != 0; sub = (sub - 1) & bits)
        if (fam.member(n, FinSet::from_bits(sub))) return true;
    return false;
}

}  // namespace detail

inline FinSet fin_of(const std::vector<unsigned>& xs) {
    std::uint64_t b = 0;
    for (auto x : xs) {
        if (x < 1 || x > 64) throw std::out_of_range("element outside 1..64");
        b |= std::uint64_t{1} << (x - 1);
    }
    return FinSet::from_bits(b);
}

/**
 * A_n = {F ⊆ {a_n, a_{n+1}, ...} : F contains a member of F_n}. The
 * hypothesis is checked for n <= depth at every lower bound a_n..a_n+span;
 * a missing or wrong witness throws. The exclusion index of F is one past the
 * position of min F in A (or 1 when F is not inside A).
 */
inline SymbolicChain<FiniteSets> build_constrained_chain(const NatSubset& a, const FamilySequence& fam, std::size_t depth,
                                                         unsigned span = 4) {
    for (std::size_t n = 1; n <= depth; ++n) {
        auto an = a.nth(n);
        if (!an) throw std::invalid_argument(a.name + " has fewer than " + std::to_string(n) + " elements below 65");
        for (unsigned lo = *an; lo <= *an + span; ++lo) {
            auto h = fam.witness ? fam.witness(n, lo) : std::nullopt;
            const std::string at = " for n=" + std::to_string(n) + ", lo=" + std::to_string(lo);
            if (!h) throw std::invalid_argument("hypothesis witness missing" + at);
            for (unsigned x = 1; x <= 64; ++x)
                if (h->contains(x) && (x < lo || !a.contains(x)))
                    throw std::invalid_argument("hypothesis witness leaves the tail of A" + at);
            if (h->empty() || !fam.member(n, *h)) throw std::invalid_argument("hypothesis witness not in the family" + at);
        }
    }
    SymbolicChain<FiniteSets> c;
    c.name = "constrained(" + a.name + "," + fam.name + ")";
    c.member = [a, fam](std::size_t n, const FinSet& f) {
        if (f.empty()) return false;
        auto an = a.nth(n);
        if (!an || f.min() < *an) return false;
        for (unsigned x = f.min(); x <= f.max(); ++x)
            if (f.contains(x) && !a.contains(x)) return false;
        return detail::some_subset_in(fam, n, f);
    };
    c.exclusion_index = [a](const FinSet& f) -> std::optional<std::size_t> {
        if (f.empty()) return std::nullopt;
        for (unsigned x = f.min(); x <= f.max(); ++x)
            if (f.contains(x) && !a.contains(x)) return 1;
        return a.index_of(f.min()) + 1;
    };
    return c;
}

/**
 * Sample for chain_check: hypothesis witnesses for n <= top at a few lower
 * bounds, their pairwise unions, and the singletons {a_1}..{a_top}.
 */
inline std::vector<FinSet> constrained_sample(const NatSubset& a, const FamilySequence& fam, std::size_t top) {
    std::vector<FinSet> base;
    auto add = [&](const FinSet& f) {
        if (std::find(base.begin(), base.end(), f) == base.end()) base.push_back(f);
    };
    for (std::size_t n = 1; n <= top; ++n) {
        auto an = a.nth(n);
        if (!an) continue;
        add(fin_of({*an}));
        for (unsigned lo = *an; lo <= *an + 3; ++lo)
            if (auto h = fam.witness(n, lo)) add(*h);
    }
    const std::size_t k = base.size();
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = i + 1; j < k; ++j) add(FinSet::from_bits(base[i].bits() | base[j].bits()));
    return base;
}

/// F_n = {{a_n}}.
inline FamilySequence singleton_families(const NatSubset& a) {
    FamilySequence f;
    f.name = "singletons";
    f.member = [a](std::size_t n, const FinSet& h) { return h.size() == 1 && a.nth(n) == h.min(); };
    f.witness = [a](std::size_t n, unsigned lo) -> std::optional<FinSet> {
        auto an = a.nth(n);
        if (!an || *an < lo) return std::nullopt;
        return fin_of({*an});
    };
    f.contains_member = [a](std::size_t n, const FinSet& h) {
        auto an = a.nth(n);
        return an && h.contains(*an);
    };
    return f;
}

/// F_n = arithmetic progressions of length n inside A.
inline FamilySequence progression_families(const NatSubset& a) {
    FamilySequence f;
    f.name = "progressions";
    auto is_ap = [a](std::size_t n, const FinSet& h) {
        if (h.size() != n) return false;
        std::vector<unsigned> xs;
        for (unsigned x = 1; x <= 64; ++x)
            if (h.contains(x)) xs.push_back(x);
        for (auto x : xs)
            if (!a.contains(x)) return false;
        for (std::size_t i = 2; i < xs.size(); ++i)
            if (xs[i] - xs[i - 1] != xs[1] - xs[0]) return false;
        return true;
    };
    f.member = is_ap;
    f.witness = [a](std::size_t n, unsigned lo) -> std::optional<FinSet> {
        for (unsigned step = 1; step <= 16; ++step)
            for (unsigned x = lo; x + step * (n - 1) <= 64; ++x) {
                bool ok = true;
                for (std::size_t i = 0; i < n && ok; ++i) ok = a.contains(x + step * static_cast<unsigned>(i));
                if (!ok) continue;
                std::vector<unsigned> xs;
                for (std::size_t i = 0; i < n; ++i) xs.push_back(x + step * static_cast<unsigned>(i));
                return fin_of(xs);
            }
        return std::nullopt;
    };
    f.contains_member = [a](std::size_t n, const FinSet& h) {
        std::vector<unsigned> xs;
        for (unsigned x = 1; x <= 64; ++x)
            if (h.contains(x) && a.contains(x)) xs.push_back(x);
        if (n <= 1) return !xs.empty();
        for (std::size_t i = 0; i < xs.size(); ++i)
            for (std::size_t j = i + 1; j < xs.size(); ++j) {
                const unsigned step = xs[j] - xs[i];
                std::size_t len = 2;
                for (unsigned y = xs[j] + step; len < n && y <= 64 && h.contains(y) && a.contains(y); y += step) ++len;
                if (len >= n) return true;
            }
        return false;
    };
    return f;
}

using Rational = boost::rational<std::int64_t>;

/// delta_n = delta * n / (n + 3), increasing to delta.
inline Rational density_threshold(Rational delta, std::size_t n) {
    return delta * Rational(static_cast<std::int64_t>(n), static_cast<std::int64_t>(n + 3));
}

/// F_n = {F ⊆ A : |F| / max F > delta_n}.
inline FamilySequence density_families(const NatSubset& a, Rational delta) {
    FamilySequence f;
    f.name = "density>" + std::to_string(delta.numerator()) + "/" + std::to_string(delta.denominator());
    auto dense = [a, delta](std::size_t n, const FinSet& h) {
        if (h.empty()) return false;
        for (unsigned x = 1; x <= 64; ++x)
            if (h.contains(x) && !a.contains(x)) return false;
        return Rational(static_cast<std::int64_t>(h.size()), h.max()) > density_threshold(delta, n);
    };
    f.member = dense;
    f.witness = [a, dense](std::size_t n, unsigned lo) -> std::optional<FinSet> {
        std::vector<unsigned> xs;
        for (unsigned x = lo; x <= 64; ++x) {
            if (!a.contains(x)) continue;
            xs.push_back(x);
            auto h = fin_of(xs);
            if (dense(n, h)) return h;
        }
        return std::nullopt;
    };
    // a dense subset exists iff some initial run of F ∩ A up to an element is dense
    f.contains_member = [a, dense](std::size_t n, const FinSet& h) {
        std::vector<unsigned> xs;
        for (unsigned x = 1; x <= 64; ++x)
            if (h.contains(x) && a.contains(x)) {
                xs.push_back(x);
                if (dense(n, fin_of(xs))) return true;
            }
        return false;
    };
    return f;
}

struct DensityStage {
    Rational stage;
    /// max of |A ∩ {1..j}| / j over j in [n/2, n]
    Rational tail_max;
};

inline DensityStage upper_density(const std::function<bool(std::uint64_t)>& a, std::uint64_t n) {
    if (n == 0) throw std::invalid_argument("density stage must be positive");
    std::int64_t count = 0;
    DensityStage d{Rational(0), Rational(0)};
    for (std::uint64_t j = 1; j <= n; ++j) {
        count += a(j) ? 1 : 0;
        const Rational r(count, static_cast<std::int64_t>(j));
        if (2 * j >= n && r > d.tail_max) d.tail_max = r;
        if (j == n) d.stage = r;
    }
    return d;
}

}  // namespace hmt

#endif
