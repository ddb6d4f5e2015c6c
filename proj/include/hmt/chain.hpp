#ifndef HMT_CHAIN_HPP
#define HMT_CHAIN_HPP

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "hmt/semigroup.hpp"
#include "hmt/sequence.hpp"
#include "hmt/verdict.hpp"

namespace hmt {

template <class E>
using Membership = std::function<bool(const E&)>;

/**
 * Finite view of a countable semigroup: elements of enumeration rank below
 * `inner` are sampled; a sum is observable when its rank is below `outer`.
 * Anything outside the outer window is neither evidence nor violation.
 */
struct Window {
    std::uint64_t inner = 32;
    std::uint64_t outer = 66;

    static Window of(std::uint64_t inner) { return Window{inner, 2 * inner + 2}; }
};

template <GroundSemigroup S>
std::vector<typename S::element_type> window_elements(const S& s, const Window& w) {
    std::vector<typename S::element_type> out;
    out.reserve(w.inner);
    for (std::uint64_t r = 0; r < w.inner; ++r) out.push_back(s.enumerate(r));
    return out;
}

template <GroundSemigroup S>
bool observable(const S& s, const typename S::element_type& x, const Window& w) {
    auto r = s.rank(x);
    return r && *r < w.outer;
}

/// How b + C sits against A inside the window.
template <GroundSemigroup S>
Verdict translate_within(const S& s, const typename S::element_type& b, const Membership<typename S::element_type>& c,
                         const Membership<typename S::element_type>& a,
                         const std::vector<typename S::element_type>& sample, const Window& w) {
    std::size_t seen = 0;
    for (const auto& x : sample) {
        if (!c(x)) continue;
        auto sum = s.combine(b, x);
        if (!observable(s, sum, w)) continue;
        if (!a(sum)) return Verdict::fails;
        ++seen;
    }
    return seen > 0 ? Verdict::holds : Verdict::unknown;
}

template <class E>
struct StarEntry {
    E element;
    Verdict verdict = Verdict::unknown;
    /// Index of the first generator C with b + C inside A, when one was found.
    std::optional<std::size_t> generator;
};

/**
 * A*(F) = {b : some C in F has b + C inside A}, for the filter F generated
 * by `generators`. Since members of F contain a generator, it suffices to
 * try the generators. One entry per sampled b: holds when some generator
 * shows observed sums all inside A, fails when every generator shows a sum
 * outside A, unknown otherwise. With `complete = false` (a truncated list of
 * an infinite generating sequence) fails is weakened to unknown.
 */
template <GroundSemigroup S>
std::vector<StarEntry<typename S::element_type>> star_set(const Membership<typename S::element_type>& a,
                                                          const std::vector<Membership<typename S::element_type>>& generators,
                                                          const S& s, const Window& w, bool complete = true) {
    const auto sample = window_elements(s, w);
    std::vector<StarEntry<typename S::element_type>> out;
    out.reserve(sample.size());
    for (const auto& b : sample) {
        StarEntry<typename S::element_type> e{b, Verdict::fails, std::nullopt};
        for (std::size_t i = 0; i < generators.size(); ++i) {
            auto v = translate_within(s, b, generators[i], a, sample, w);
            if (v == Verdict::holds) {
                e.verdict = Verdict::holds;
                e.generator = i;
                break;
            }
            e.verdict = either(e.verdict, v);
        }
        if (generators.empty()) e.verdict = Verdict::fails;
        if (!complete && e.verdict == Verdict::fails) e.verdict = Verdict::unknown;
        out.push_back(std::move(e));
    }
    return out;
}

/// Elements of a star computation with verdict holds.
template <class E>
std::vector<E> holding(const std::vector<StarEntry<E>>& entries) {
    std::vector<E> out;
    for (const auto& e : entries)
        if (e.verdict == Verdict::holds) out.push_back(e.element);
    return out;
}

/**
 * Idempotent filter check for the filter generated by `generators`: for each
 * generator A, A*(F) must contain some generator (on the sampled window).
 */
template <GroundSemigroup S>
Verdict is_idempotent_filter(const std::vector<Membership<typename S::element_type>>& generators, const S& s,
                             const Window& w, bool complete = true) {
    using E = typename S::element_type;
    const auto sample = window_elements(s, w);
    Verdict all = Verdict::holds;
    for (const auto& a : generators) {
        const auto star = star_set(a, generators, s, w, complete);
        Verdict some = Verdict::fails;
        for (const auto& g : generators) {
            Verdict inside = Verdict::unknown;
            bool any = false;
            for (std::size_t i = 0; i < sample.size(); ++i) {
                if (!g(sample[i])) continue;
                if (!any) inside = Verdict::holds;
                any = true;
                inside = both(inside, star[i].verdict);
            }
            some = either(some, inside);
        }
        if (!complete && some == Verdict::fails) some = Verdict::unknown;
        all = both(all, some);
    }
    (void)sizeof(E);
    return all;
}

/// Family membership for intensional sets (decided on the family's own window).
template <class E>
using FamilyPredicate = std::function<bool(const Membership<E>&)>;

/**
 * Sufficient condition for an idempotent superfilter: s + A stays in the
 * family for every sampled member A and sampled shift s. Members outside
 * the family are skipped; no sampled member gives unknown.
 */
template <GroundSemigroup S>
Verdict translation_invariant_on_samples(const FamilyPredicate<typename S::element_type>& family,
                                         const std::vector<Membership<typename S::element_type>>& sets,
                                         const std::vector<typename S::element_type>& shifts, const S& s,
                                         const Window& w) {
    using E = typename S::element_type;
    const auto sample = window_elements(s, w);
    std::size_t members = 0;
    for (const auto& a : sets) {
        if (!family(a)) continue;
        ++members;
        for (const auto& shift : shifts) {
            // x in shift + A iff x = shift + y for some sampled y in A
            Membership<E> moved = [s, shift, a, sample](const E& x) {
                for (const auto& y : sample)
                    if (a(y) && s.equal(s.combine(shift, y), x)) return true;
                return false;
            };
            if (!family(moved)) return Verdict::fails;
        }
    }
    return members > 0 ? Verdict::holds : Verdict::unknown;
}

/**
 * Direct idempotent-superfilter check on samples: for each sampled A whose
 * star (taken over the sampled sets C that lie in the family) is in the
 * family, A must be in the family.
 */
template <GroundSemigroup S>
Verdict is_idempotent_superfilter(const FamilyPredicate<typename S::element_type>& family,
                                  const std::vector<Membership<typename S::element_type>>& sets, const S& s,
                                  const Window& w) {
    using E = typename S::element_type;
    std::vector<Membership<E>> in_family;
    for (const auto& c : sets)
        if (family(c)) in_family.push_back(c);
    std::size_t applicable = 0;
    for (const auto& a : sets) {
        auto star = holding(star_set(a, in_family, s, w));
        Membership<E> star_pred = [s, star](const E& x) {
            for (const auto& y : star)
                if (s.equal(x, y)) return true;
            return false;
        };
        if (!family(star_pred)) continue;
        ++applicable;
        if (!family(a)) return Verdict::fails;
    }
    return applicable > 0 ? Verdict::holds : Verdict::unknown;
}

/**
 * Symbolic descending chain A_1 >= A_2 >= ... over a countable semigroup.
 *
 * `member(n, x)` decides x in A_n. `exclusion_index(x)` is the freeness
 * evidence: some n with x not in A_n, or nullopt when the chain asserts
 * that x lies in every A_n.
 */
template <GroundSemigroup S>
struct SymbolicChain {
    using element_type = typename S::element_type;

    S semigroup;
    std::function<bool(std::size_t, const element_type&)> member;
    std::function<std::optional<std::size_t>(const element_type&)> exclusion_index;
    std::string name = "chain";

    Membership<element_type> at(std::size_t n) const {
        auto m = member;
        return [m, n](const element_type& x) { return m(n, x); };
    }

    std::vector<Membership<element_type>> generators(std::size_t depth) const {
        std::vector<Membership<element_type>> out;
        for (std::size_t n = 1; n <= depth; ++n) out.push_back(at(n));
        return out;
    }
};

struct ChainReport {
    Verdict verdict = Verdict::unknown;
    Verdict descending = Verdict::unknown;
    Verdict freeness = Verdict::unknown;
    Verdict idempotence = Verdict::unknown;
    /// m chosen for each n (1..depth) with the witness k per element key of A_m.
    std::map<std::size_t, std::size_t> m_for;
    std::map<std::size_t, std::map<std::uint64_t, std::size_t>> k_for;
    std::vector<std::string> notes;
};

/**
 * Depth-bounded check of a free idempotent chain:
 *  - descending on the sampled window for n < depth + lookahead;
 *  - every sampled x in A_1 has an exclusion index k with x not in A_k;
 *  - for each n <= depth some m > n has, for each sampled a in A_m, a k > m
 *    with a + A_k inside A_m. This is the elementwise form; it
 *    implies that A_n* contains A_m.
 * Chain indices up to depth + lookahead are consulted.
 */
template <GroundSemigroup S>
ChainReport chain_check(const SymbolicChain<S>& chain, std::size_t depth,
                        const std::vector<typename S::element_type>& sample,
                        const Membership<typename S::element_type>& visible, std::size_t lookahead = 0) {
    using E = typename S::element_type;
    if (lookahead == 0) lookahead = depth + 1;
    const std::size_t top = depth + lookahead;
    const auto& s = chain.semigroup;
    ChainReport r;

    // members[n][i]: sample[i] in A_n
    std::vector<std::vector<char>> members(top + 1, std::vector<char>(sample.size(), 0));
    for (std::size_t n = 1; n <= top; ++n)
        for (std::size_t i = 0; i < sample.size(); ++i) members[n][i] = chain.member(n, sample[i]) ? 1 : 0;

    r.descending = Verdict::holds;
    for (std::size_t n = 1; n < top && r.descending == Verdict::holds; ++n)
        for (std::size_t i = 0; i < sample.size(); ++i)
            if (members[n + 1][i] && !members[n][i]) {
                r.descending = Verdict::fails;
                r.notes.push_back("not descending at n=" + std::to_string(n) + ": " + s.format(sample[i]));
                break;
            }

    r.freeness = Verdict::holds;
    bool any_member = false;
    for (std::size_t i = 0; i < sample.size(); ++i) {
        if (!members[1][i]) continue;
        any_member = true;
        auto k = chain.exclusion_index ? chain.exclusion_index(sample[i]) : std::nullopt;
        if (!k) {
            r.freeness = Verdict::fails;
            r.notes.push_back("no exclusion witness for " + s.format(sample[i]));
            break;
        }
        if (chain.member(*k, sample[i])) {
            r.freeness = Verdict::fails;
            r.notes.push_back("exclusion witness " + std::to_string(*k) + " wrong for " + s.format(sample[i]));
            break;
        }
    }
    if (!any_member) r.freeness = Verdict::unknown;
    for (std::size_t n = 1; n <= top; ++n) {
        bool nonempty = false;
        for (auto c : members[n]) nonempty = nonempty || c;
        if (!nonempty) {
            r.notes.push_back("A_" + std::to_string(n) + " has no sampled member");
            r.freeness = both(r.freeness, Verdict::unknown);
        }
    }

    r.idempotence = Verdict::holds;
    for (std::size_t n = 1; n <= depth; ++n) {
        bool found = false;
        for (std::size_t m = n + 1; m < top && !found; ++m) {
            std::map<std::uint64_t, std::size_t> ks;
            bool ok = false;
            for (std::size_t i = 0; i < sample.size(); ++i) {
                if (!members[m][i]) continue;
                ok = true;
                std::optional<std::size_t> kk;
                for (std::size_t k = m + 1; k <= top && !kk; ++k) {
                    std::size_t seen = 0;
                    bool bad = false;
                    for (std::size_t j = 0; j < sample.size() && !bad; ++j) {
                        if (!members[k][j]) continue;
                        auto sum = s.combine(sample[i], sample[j]);
                        if (!visible(sum)) continue;
                        ++seen;
                        bad = !chain.member(m, sum);
                    }
                    if (!bad && seen > 0) kk = k;
                }
                if (!kk) {
                    ok = false;
                    break;
                }
                ks[s.key(sample[i])] = *kk;
            }
            if (ok) {
                found = true;
                r.m_for[n] = m;
                r.k_for[n] = std::move(ks);
            }
        }
        if (!found) {
            r.idempotence = Verdict::unknown;
            r.notes.push_back("no absorbing m found for n=" + std::to_string(n) + " within depth");
        }
    }
    r.verdict = both(both(r.descending, r.freeness), r.idempotence);
    (void)sizeof(E);
    return r;
}

/// Samples the first w.inner enumerated elements; sums are evidence while
/// their rank stays below w.outer.
template <GroundSemigroup S>
ChainReport chain_check(const SymbolicChain<S>& chain, std::size_t depth, const Window& w, std::size_t lookahead = 0) {
    const auto& s = chain.semigroup;
    return chain_check(chain, depth, window_elements(s, w),
                       Membership<typename S::element_type>([s, w](const auto& x) { return observable(s, x, w); }),
                       lookahead);
}

/**
 * Chain A_n = FS(a_n, a_{n+1}, ...) with membership decided over the terms
 * with index <= index_bound (at most 20). The exclusion index of x is
 * max F + 1 for the representing block F with least maximum: for a proper
 * sequence no block above F sums to a_F. x outside FS(a_1..a_bound) gets
 * index 1 (truncated evidence). Throws improper_sequence_error when the
 * prefix is improper, since then the freeness evidence is unavailable.
 */
template <GroundSemigroup S>
SymbolicChain<S> fs_tail_chain(const ElementSequence<S>& seq, std::size_t index_bound) {
    using E = typename S::element_type;
    if (index_bound > 20) throw std::invalid_argument("fs-tail chains index at most 20 terms");
    if (auto bad = is_proper_up_to(seq, index_bound)) {
        throw improper_sequence_error("fs-tail chain of an improper prefix: b_" + bad->first.str() + " = b_" +
                                      bad->second.str());
    }
    const auto& s = seq.semigroup();
    auto table = fs_by_mask(seq.prefix(index_bound), s);
    // key -> (value, least min index, least max index) over representing blocks
    struct Rep {
        E value;
        std::size_t best_min;
        std::size_t least_max;
    };
    auto reps = std::make_shared<std::unordered_multimap<std::uint64_t, Rep>>();
    for (std::uint64_t mask = 1; mask < table.size(); ++mask) {
        const auto& v = *table[mask];
        const auto key = s.key(v);
        bool merged = false;
        auto range = reps->equal_range(key);
        for (auto it = range.first; it != range.second; ++it) {
            if (!s.equal(it->second.value, v)) continue;
            it->second.best_min = std::max(it->second.best_min, mask_min(mask));
            it->second.least_max = std::min(it->second.least_max, mask_max(mask));
            merged = true;
        }
        if (!merged) reps->emplace(key, Rep{v, mask_min(mask), mask_max(mask)});
    }
    auto find = [reps, s](const E& x) -> const Rep* {
        auto range = reps->equal_range(s.key(x));
        for (auto it = range.first; it != range.second; ++it)
            if (s.equal(it->second.value, x)) return &it->second;
        return nullptr;
    };
    SymbolicChain<S> c{s, nullptr, nullptr, "fs-tail"};
    // x in A_n iff some representing block starts at or after n
    c.member = [find](std::size_t n, const E& x) {
        const Rep* r = find(x);
        return r != nullptr && r->best_min >= n;
    };
    c.exclusion_index = [find](const E& x) -> std::optional<std::size_t> {
        const Rep* r = find(x);
        if (r == nullptr) return 1;
        return r->least_max + 1;
    };
    return c;
}

}  // namespace hmt

#endif
