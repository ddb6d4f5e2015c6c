#ifndef HMT_SEARCH_HPP
#define HMT_SEARCH_HPP

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "hmt/block.hpp"
#include "hmt/coloring.hpp"
#include "hmt/parallel.hpp"
#include "hmt/semigroup.hpp"
#include "hmt/sequence.hpp"

namespace hmt {

struct SearchBudget {
    /// Largest value (Hindman search) or largest base index (block searches).
    std::uint64_t max_value = 16;
    std::size_t max_blocks = 2;
    std::uint64_t node_limit = 10'000'000;
    unsigned parallelism = 1;

    void validate() const {
        if (max_value == 0 || max_blocks == 0 || node_limit == 0 || parallelism == 0)
            throw std::invalid_argument("search budget fields must be positive");
    }
};

/// A d-set together with the color the coloring gave it.
template <class E>
struct CertificateEntry {
    std::vector<E> members;
    Color color = 0;
};

template <class E>
struct Witness {
    std::vector<Block> blocks;
    std::vector<E> terms;
    std::optional<Color> color_vertex;
    std::optional<Color> color_edge;
    /// Every checked monochromatic set: FS values for vertex colorings,
    /// d-sets of the sum hypergraph for edge colorings.
    std::vector<CertificateEntry<E>> certificate;
};

template <class E>
struct SearchResult {
    SearchStatus status = SearchStatus::exhausted;
    std::optional<Witness<E>> witness;
    std::uint64_t nodes = 0;
    std::size_t best_depth = 0;

    bool found() const { return status == SearchStatus::found; }
};

/**
 * Finitary Hindman search on {1..N}: terms a_1 < ... < a_m with
 * FS(a_1..a_m) inside {1..N}, monochromatic for chi, and proper (a_F != a_H
 * for F < H). Depth-first with increasing terms; the first branch level
 * (choice of a_1) is split across threads, merged deterministically.
 */
inline SearchResult<std::uint64_t> hindman_search(const Coloring<std::uint64_t>& chi, const SearchBudget& budget) {
    budget.validate();
    if (chi.arity() != 1) throw std::invalid_argument("hindman search needs a vertex coloring");
    const std::uint64_t n_max = budget.max_value;
    const std::size_t m = budget.max_blocks;
    if (m > 20) throw std::invalid_argument("hindman search supports at most 20 terms");
    if (n_max < m) throw std::invalid_argument("hindman search needs N >= m");

    std::vector<Color> color(n_max + 1, 0);
    for (std::uint64_t x = 1; x <= n_max; ++x) color[x] = chi(x);

    using Terms = std::vector<std::uint64_t>;
    auto branch = [&](std::size_t i, std::uint64_t limit, const std::atomic<std::size_t>& first_found) {
        BranchOutcome<Terms> o;
        NodeMeter meter(limit);
        const std::uint64_t a1 = i + 1;
        const Color c = color[a1];
        Terms terms{a1};
        std::vector<std::uint64_t> fs{0, a1};  // fs[mask], slot 0 is the empty sum
        bool stop = false;

        std::function<bool()> dfs = [&]() -> bool {
            meter.reached(terms.size());
            if (terms.size() == m) return true;
            for (std::uint64_t x = terms.back() + 1; x <= n_max; ++x) {
                if ((meter.nodes() & 1023U) == 0 && first_found.load() < i) {
                    stop = true;
                    return false;
                }
                if (!meter.tick()) {
                    stop = true;
                    return false;
                }
                const std::size_t old = fs.size();
                bool ok = color[x] == c;
                for (std::size_t mask = 1; mask < old && ok; ++mask) ok = fs[mask] + x <= n_max && color[fs[mask] + x] == c;
                if (!ok) continue;
                fs.resize(2 * old);
                for (std::size_t mask = 0; mask < old; ++mask) fs[mask | old] = fs[mask] + x;
                // properness: blocks H containing the new index against F below min H
                for (std::size_t h = old; h < 2 * old && ok; ++h) {
                    const std::size_t below = (std::size_t{1} << (std::countr_zero(h))) - 1;
                    for (std::size_t f = below; f != 0 && ok; f = (f - 1) & below) ok = fs[f] != fs[h];
                }
                if (ok) {
                    terms.push_back(x);
                    if (dfs()) return true;
                    terms.pop_back();
                }
                fs.resize(old);
                if (stop) return false;
            }
            return false;
        };
        if (color[a1] != 0 && meter.tick() && dfs()) o.found = terms;
        o.nodes = meter.nodes();
        o.hit_limit = meter.nodes() > limit;
        o.cancelled = stop && !o.hit_limit;
        o.depth_marks = meter.marks();
        return o;
    };

    const std::size_t first_choices = static_cast<std::size_t>(n_max);
    auto merged = run_ordered<Terms>(first_choices, budget.node_limit, budget.parallelism, branch);
    SearchResult<std::uint64_t> r;
    r.status = merged.status;
    r.nodes = merged.nodes;
    r.best_depth = merged.best_depth;
    if (merged.value) {
        Witness<std::uint64_t> w;
        w.terms = *merged.value;
        for (std::size_t k = 1; k <= w.terms.size(); ++k) w.blocks.push_back(Block{k});
        w.color_vertex = color[w.terms.front()];
        const auto seq = make_sequence(Naturals{}, w.terms);
        for (const auto& [f, v] : fs_enumerate(seq, w.terms.size()))
            w.certificate.push_back(CertificateEntry<std::uint64_t>{{v}, color[v]});
        r.witness = std::move(w);
    }
    return r;
}

/// Independent re-check of a Hindman witness: recomputes FS by explicit
/// recursion over index subsets and re-evaluates the coloring.
inline bool verify_hindman_witness(const Coloring<std::uint64_t>& chi, std::uint64_t n_max,
                                   const Witness<std::uint64_t>& w) {
    if (w.terms.empty() || !w.color_vertex) return false;
    for (std::size_t k = 1; k < w.terms.size(); ++k)
        if (w.terms[k - 1] >= w.terms[k]) return false;
    const auto seq = make_sequence(Naturals{}, w.terms);
    if (!proper_up_to(seq, w.terms.size())) return false;
    std::function<bool(std::size_t, std::uint64_t, bool)> rec = [&](std::size_t i, std::uint64_t sum, bool any) {
        if (i == w.terms.size()) return !any || (sum <= n_max && chi(sum) == *w.color_vertex);
        return rec(i + 1, sum, any) && rec(i + 1, sum + w.terms[i], true);
    };
    return rec(0, 0, false);
}

template <class E>
using TargetPredicate = std::function<bool(const std::vector<std::uint64_t>& masks, const std::vector<E>& terms, Color color)>;

/// Partial feasibility: may the current prefix (with `remaining` blocks
/// still to place, whose maxima lie at or below max_index) still reach the target?
template <class E>
using FeasibilityPredicate =
    std::function<bool(const std::vector<std::uint64_t>& masks, const std::vector<E>& terms, std::size_t remaining)>;

/// b_n admissible at position n (1-based), e.g. membership in A_n of a chain.
template <class E>
using AdmissiblePredicate = std::function<bool(std::size_t n, std::uint64_t mask, const E& value)>;

template <class E>
struct MtOptions {
    /// Reject sumsequences with b_F == b_H for some F < H.
    bool require_proper = true;
    std::optional<Coloring<E>> vertex_coloring;
    AdmissiblePredicate<E> admissible;
    TargetPredicate<E> target;
    FeasibilityPredicate<E> feasible;
};

/**
 * Milliken-Taylor style search: blocks F_1 < ... < F_m inside {1..max_index}
 * such that every d-set {b_{F_1'}, ..., b_{F_d'}} over block chains of the
 * induced sumsequence b_i = a_{F_i} gets one color.
 *
 * Candidates for the next block are ordered by maximum index, then by the
 * semigroup's enumeration order of the block sum, then lexicographically.
 * The first-block choices are the parallel branches.
 *
 * With a vertex coloring (d = 2), the search runs on eta =
 * reduce_two_dim_to_one(vertex, chi) with one extra block whose sum must
 * enumeration-dominate every finite sum of the first m terms; the witness
 * reports the first m blocks. Then every b_F (F inside {1..m}) is the smaller
 * end of the edge {b_F, b_{m+1}}, so FS(b_1..b_m) is vertex-monochromatic
 * and the sum graph edge-monochromatic.
 */
template <GroundSemigroup S>
SearchResult<typename S::element_type> mt_search(const Coloring<typename S::element_type>& chi_in,
                                                 const ElementSequence<S>& base, std::size_t d,
                                                 const SearchBudget& budget,
                                                 const MtOptions<typename S::element_type>& opts = {}) {
    using E = typename S::element_type;
    budget.validate();
    const auto& s = base.semigroup();
    const std::size_t max_index = static_cast<std::size_t>(budget.max_value);
    if (max_index > 20) throw std::invalid_argument("block search supports at most 20 base indices");
    if (!base.has(max_index)) throw std::out_of_range("base sequence shorter than the index bound");
    if (chi_in.arity() != d) throw std::invalid_argument("coloring arity does not match d");
    const bool route = opts.vertex_coloring.has_value();
    if (route && d != 2) throw std::invalid_argument("vertex routing needs an edge coloring (d = 2)");
    const Coloring<E> chi = route ? reduce_two_dim_to_one(*opts.vertex_coloring, chi_in, s) : chi_in;
    const std::size_t m_out = budget.max_blocks;
    const std::size_t m = route ? m_out + 1 : m_out;
    if (m > 16) throw std::invalid_argument("block search supports at most 16 blocks");

    // base sums a_F for every mask inside {1..max_index}
    const auto table = fs_by_mask(base.prefix(max_index), s);

    // candidates[lo]: masks with min >= lo, sorted by (max, enum order, lex)
    std::vector<std::vector<std::uint64_t>> candidates(max_index + 2);
    for (std::size_t lo = 1; lo <= max_index; ++lo) {
        auto& c = candidates[lo];
        for (std::size_t hi = lo; hi <= max_index; ++hi) {
            const std::uint64_t free = index_range_mask(lo, hi - 1);
            std::vector<std::uint64_t> level;
            for (std::uint64_t sub = free;; sub = (sub - 1) & free) {
                level.push_back(sub | index_bit(hi));
                if (sub == 0) break;
            }
            std::sort(level.begin(), level.end(), [&](std::uint64_t x, std::uint64_t y) {
                const auto& ex = *table[x];
                const auto& ey = *table[y];
                if (s.enum_less(ex, ey)) return true;
                if (s.enum_less(ey, ex)) return false;
                return Block::from_mask(x) < Block::from_mask(y);
            });
            c.insert(c.end(), level.begin(), level.end());
        }
    }

    // chains of positions used when term j is added: d-chains inside {1..j}
    // whose last block contains j
    std::vector<std::vector<std::vector<std::uint64_t>>> new_chains(m + 1);
    for (std::size_t j = 1; j <= m; ++j) {
        if (j < d) continue;
        for (auto& ch : block_chains(j, d))
            if (ch.back() & index_bit(j)) new_chains[j].push_back(std::move(ch));
    }

    struct Found {
        std::vector<std::uint64_t> masks;
        Color color;
    };

    auto branch = [&](std::size_t bi, std::uint64_t limit, const std::atomic<std::size_t>& first_found) {
        BranchOutcome<Found> o;
        NodeMeter meter(limit);
        std::vector<std::uint64_t> masks;
        std::vector<E> terms;
        std::vector<std::optional<E>> fs{std::nullopt};  // sums of chosen terms by position mask
        std::optional<Color> color;
        bool stop = false;

        auto try_push = [&](std::uint64_t mask) -> bool {
            const std::size_t j = terms.size() + 1;
            const E& b = *table[mask];
            if (opts.admissible && !opts.admissible(j, mask, b)) return false;
            const std::size_t old = fs.size();
            fs.resize(2 * old);
            fs[old] = b;
            for (std::size_t pm = 1; pm < old; ++pm) fs[pm | old] = s.combine(*fs[pm], b);
            bool ok = true;
            if (opts.require_proper) {
                for (std::size_t h = old; h < 2 * old && ok; ++h) {
                    const std::size_t below = (std::size_t{1} << std::countr_zero(h)) - 1;
                    for (std::size_t f = below; f != 0 && ok; f = (f - 1) & below) ok = !s.equal(*fs[f], *fs[h]);
                }
            }
            if (ok && route && j == m) {
                for (std::size_t pm = 1; pm < old && ok; ++pm) ok = s.enum_less(*fs[pm], b);
            }
            std::optional<Color> c = color;
            std::vector<E> members(d, b);
            for (const auto& ch : new_chains[j]) {
                if (!ok) break;
                for (std::size_t t = 0; t < d; ++t) members[t] = *fs[ch[t]];
                const Color got = chi(std::span<const E>(members));
                if (!c) c = got;
                ok = *c == got;
            }
            if (!ok) {
                fs.resize(old);
                return false;
            }
            masks.push_back(mask);
            terms.push_back(b);
            color = c;
            return true;
        };
        auto pop = [&]() {
            masks.pop_back();
            terms.pop_back();
            fs.resize(fs.size() / 2);
            if (terms.size() < d) color.reset();
        };

        std::function<bool()> dfs = [&]() -> bool {
            meter.reached(terms.size());
            if (terms.size() == m) {
                if (!opts.target) return true;
                std::vector<std::uint64_t> out_masks(masks.begin(), masks.begin() + m_out);
                std::vector<E> out_terms(terms.begin(), terms.begin() + m_out);
                return opts.target(out_masks, out_terms, color.value_or(1));
            }
            if (opts.feasible && !opts.feasible(masks, terms, m - terms.size())) return false;
            const std::size_t lo = masks.empty() ? 1 : mask_max(masks.back()) + 1;
            if (lo > max_index) return false;
            for (auto mask : candidates[lo]) {
                if ((meter.nodes() & 1023U) == 0 && first_found.load() < bi) {
                    stop = true;
                    return false;
                }
                if (!meter.tick()) {
                    stop = true;
                    return false;
                }
                if (!try_push(mask)) continue;
                if (dfs()) return true;
                pop();
                if (stop) return false;
            }
            return false;
        };

        const auto first = candidates[1][bi];
        if (meter.tick() && try_push(first)) {
            if (dfs()) o.found = Found{masks, color.value_or(1)};
        }
        o.nodes = meter.nodes();
        o.hit_limit = meter.nodes() > limit;
        o.cancelled = stop && !o.hit_limit;
        o.depth_marks = meter.marks();
        return o;
    };

    auto merged = run_ordered<Found>(candidates[1].size(), budget.node_limit, budget.parallelism, branch);
    SearchResult<E> r;
    r.status = merged.status;
    r.nodes = merged.nodes;
    r.best_depth = std::min(merged.best_depth, m_out);
    if (!merged.value) return r;

    Witness<E> w;
    for (std::size_t k = 0; k < m_out; ++k) {
        w.blocks.push_back(Block::from_mask(merged.value->masks[k]));
        w.terms.push_back(*table[merged.value->masks[k]]);
    }
    const auto induced = make_sequence(s, w.terms);
    if (route) {
        const auto& vc = *opts.vertex_coloring;
        w.color_vertex = vc(w.terms.front());
        for (const auto& [f, v] : fs_enumerate(induced, m_out)) w.certificate.push_back({{v}, vc(v)});
        const auto fs_all = fs_by_mask(w.terms, s);
        if (m_out >= 2) w.color_edge = chi_in(w.terms[0], w.terms[1]);
        for (const auto& ch : block_chains(m_out, 2))
            w.certificate.push_back({{*fs_all[ch[0]], *fs_all[ch[1]]}, chi_in(*fs_all[ch[0]], *fs_all[ch[1]])});
    } else {
        const auto fs_all = fs_by_mask(w.terms, s);
        for (const auto& ch : block_chains(m_out, d)) {
            std::vector<E> members;
            for (auto pm : ch) members.push_back(*fs_all[pm]);
            const Color c = chi(std::span<const E>(members));
            w.certificate.push_back({std::move(members), c});
        }
        if (d == 1) {
            w.color_vertex = merged.value->color;
        } else {
            w.color_edge = merged.value->color;
        }
    }
    r.witness = std::move(w);
    return r;
}

/**
 * Independent re-check of an mt_search witness: block order, recomputed
 * sums, properness when required, and one color on every d-set of block
 * chains (enumerated by explicit recursion over Block values). When a vertex
 * coloring is given, FS(b_1..b_m) must also be vertex-monochromatic.
 */
template <GroundSemigroup S>
bool verify_mt_witness(const Coloring<typename S::element_type>& chi, const ElementSequence<S>& base, std::size_t d,
                       const Witness<typename S::element_type>& w, bool require_proper = true,
                       const std::optional<Coloring<typename S::element_type>>& vertex = std::nullopt,
                       std::string* why = nullptr) {
    using E = typename S::element_type;
    auto fail = [why](std::string msg) {
        if (why) *why = std::move(msg);
        return false;
    };
    const auto& s = base.semigroup();
    if (w.blocks.empty() || w.blocks.size() != w.terms.size()) return fail("blocks and terms disagree in length");
    for (std::size_t k = 1; k < w.blocks.size(); ++k)
        if (!block_less(w.blocks[k - 1], w.blocks[k])) return fail("blocks out of order");
    for (std::size_t k = 0; k < w.blocks.size(); ++k)
        if (!s.equal(indexed_sum(base, w.blocks[k]), w.terms[k])) return fail("term does not match its block sum");
    const auto induced = make_sequence(s, w.terms);
    const std::size_t m = w.terms.size();
    if (require_proper && !proper_up_to(induced, m)) return fail("induced sequence improper");

    // all nonempty subsets of {1..m} as Blocks, with their sums
    std::vector<std::pair<Block, E>> sums;
    for (std::uint64_t code = 1; code < (std::uint64_t{1} << m); ++code) {
        std::vector<std::size_t> idx;
        for (std::size_t k = 0; k < m; ++k)
            if ((code >> k) & 1U) idx.push_back(k + 1);
        Block b(idx);
        sums.emplace_back(b, indexed_sum(induced, b));
    }
    std::optional<Color> edge_color;
    std::vector<E> members;
    std::function<bool(std::optional<Block>)> rec = [&](std::optional<Block> last) -> bool {
        if (members.size() == d) {
            const Color c = chi(std::span<const E>(members));
            if (!edge_color) edge_color = c;
            return *edge_color == c;
        }
        for (const auto& [b, v] : sums) {
            if (last && !block_less(*last, b)) continue;
            members.push_back(v);
            const bool ok = rec(b);
            members.pop_back();
            if (!ok) return false;
        }
        return true;
    };
    if (!rec(std::nullopt)) return fail("sum hypergraph not monochromatic");
    const auto stated = d == 1 ? w.color_vertex : w.color_edge;
    if (edge_color && stated && *stated != *edge_color) return fail("stated color differs from recomputed color");
    if (vertex) {
        const Color c0 = (*vertex)(w.terms.front());
        for (const auto& [b, v] : sums)
            if ((*vertex)(v) != c0) return fail("finite sums not vertex-monochromatic");
        if (w.color_vertex && *w.color_vertex != c0) return fail("stated vertex color differs");
    }
    for (const auto& e : w.certificate) {
        const Color c = e.members.size() == 1 && vertex ? (*vertex)(e.members.front())
                        : e.members.size() == d         ? chi(std::span<const E>(e.members))
                                                        : e.color;
        if (c != e.color) return fail("certificate entry color mismatch");
    }
    return true;
}

}  // namespace hmt

#endif
