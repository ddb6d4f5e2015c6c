#ifndef HMT_SEQUENCE_HPP
#define HMT_SEQUENCE_HPP

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "hmt/block.hpp"
#include "hmt/semigroup.hpp"

namespace hmt {

class improper_sequence_error : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/**
 * A finite or generator-backed sequence a_1, a_2, ... of semigroup elements.
 *
 * Generator-backed sequences memoize every term up to the largest index
 * requested; the cache is shared between copies and guarded by a mutex, so
 * concurrent readers observe a pure function of the index.
 *
 * A sequence obtained with take_sumsequence remembers the blocks over its
 * root sequence (provenance), so nested sumsequences compose.
 */
template <GroundSemigroup S>
class ElementSequence {
public:
    using element_type = typename S::element_type;
    using generator_type = std::function<element_type(std::size_t)>;

    static ElementSequence from_terms(S semigroup, std::vector<element_type> terms) {
        for (std::size_t i = 0; i < terms.size(); ++i) {
            if (!semigroup.valid(terms[i])) throw std::invalid_argument("term " + std::to_string(i + 1) + " is not a valid element");
        }
        ElementSequence s(std::move(semigroup));
        s.state_->terms = std::move(terms);
        s.length_ = s.state_->terms.size();
        return s;
    }

    /// `gen` receives 1-based indices.
    static ElementSequence from_generator(S semigroup, generator_type gen) {
        ElementSequence s(std::move(semigroup));
        s.state_->gen = std::move(gen);
        return s;
    }

    const S& semigroup() const { return semigroup_; }

    /// Number of terms, or nullopt for a generator-backed sequence.
    std::optional<std::size_t> length() const { return length_; }
    bool has(std::size_t n) const { return !length_ || n <= *length_; }

    /// Term a_i (1-based).
    element_type at(std::size_t i) const {
        if (i == 0) throw std::out_of_range("sequence indices are 1-based");
        if (length_ && i > *length_) {
            throw std::out_of_range("index " + std::to_string(i) + " beyond sequence length " + std::to_string(*length_));
        }
        std::lock_guard lock(state_->mu);
        auto& terms = state_->terms;
        while (terms.size() < i) {
            auto t = state_->gen(terms.size() + 1);
            if (!semigroup_.valid(t)) throw std::invalid_argument("generated term " + std::to_string(terms.size() + 1) + " is invalid");
            terms.push_back(std::move(t));
        }
        return terms[i - 1];
    }

    std::vector<element_type> prefix(std::size_t n) const {
        std::vector<element_type> out;
        out.reserve(n);
        for (std::size_t i = 1; i <= n; ++i) out.push_back(at(i));
        return out;
    }

    /// Blocks over the root sequence, empty when this is a root sequence.
    const std::vector<Block>& provenance() const { return provenance_; }

    ElementSequence with_provenance(std::vector<Block> prov) const {
        ElementSequence out = *this;
        out.provenance_ = std::move(prov);
        return out;
    }

private:
    struct State {
        std::mutex mu;
        std::vector<element_type> terms;
        generator_type gen;
    };

    explicit ElementSequence(S semigroup) : semigroup_(std::move(semigroup)), state_(std::make_shared<State>()) {}

    S semigroup_;
    std::shared_ptr<State> state_;
    std::optional<std::size_t> length_;
    std::vector<Block> provenance_;
};

template <GroundSemigroup S>
ElementSequence<S> make_sequence(S s, std::vector<typename S::element_type> terms) {
    return ElementSequence<S>::from_terms(std::move(s), std::move(terms));
}

/// a_F: the left-to-right combine-fold of the terms indexed by F.
template <GroundSemigroup S>
typename S::element_type indexed_sum(const ElementSequence<S>& seq, const Block& f) {
    if (!seq.has(f.max())) {
        throw std::out_of_range("block " + f.str() + " references a missing term");
    }
    const auto& s = seq.semigroup();
    auto acc = seq.at(f.indices().front());
    for (std::size_t k = 1; k < f.size(); ++k) acc = s.combine(acc, seq.at(f.indices()[k]));
    return acc;
}

/// a_F for every nonempty F within {1..n}, indexed by mask (slot 0 unused).
/// Built as a_F = a_{F \ max F} + a_{max F}, which is the left-to-right fold.
template <GroundSemigroup S>
std::vector<std::optional<typename S::element_type>> fs_by_mask(const std::vector<typename S::element_type>& terms,
                                                                const S& s) {
    const std::size_t n = terms.size();
    if (n > 24) throw std::invalid_argument("finite-sum tables are limited to 24 terms");
    std::vector<std::optional<typename S::element_type>> out(std::size_t{1} << n);
    for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << n); ++mask) {
        const auto top = mask_max(mask);
        const auto rest = mask & ~index_bit(top);
        out[mask] = rest == 0 ? terms[top - 1] : s.combine(*out[rest], terms[top - 1]);
    }
    return out;
}

/// FS(a_1..a_n) keyed by block; n = 0 yields an empty mapping.
template <GroundSemigroup S>
std::map<Block, typename S::element_type> fs_enumerate(const ElementSequence<S>& seq, std::size_t n) {
    std::map<Block, typename S::element_type> out;
    if (n == 0) return out;
    if (!seq.has(n)) throw std::out_of_range("sequence has fewer than " + std::to_string(n) + " terms");
    auto table = fs_by_mask(seq.prefix(n), seq.semigroup());
    for (std::uint64_t mask = 1; mask < table.size(); ++mask) out.emplace(Block::from_mask(mask), *table[mask]);
    return out;
}

/// The sumsequence a_{F_1}, a_{F_2}, ...; provenance composes with the input's.
template <GroundSemigroup S>
ElementSequence<S> take_sumsequence(const ElementSequence<S>& seq, const BlockSequence& blocks) {
    std::vector<typename S::element_type> terms;
    terms.reserve(blocks.size());
    for (const auto& b : blocks) terms.push_back(indexed_sum(seq, b));
    auto out = ElementSequence<S>::from_terms(seq.semigroup(), std::move(terms));
    if (seq.provenance().empty()) return out.with_provenance(blocks.blocks());
    return out.with_provenance(compose(BlockSequence(seq.provenance()), blocks).blocks());
}

/// All block chains F_1 < ... < F_d inside {1..depth}, as masks.
inline std::vector<std::vector<std::uint64_t>> block_chains(std::size_t depth, std::size_t d) {
    if (d == 0) throw std::invalid_argument("chain length must be positive");
    if (depth > 24) throw std::invalid_argument("chain enumeration limited to depth 24");
    std::vector<std::vector<std::uint64_t>> out;
    std::vector<std::uint64_t> cur;
    std::function<void(std::size_t)> rec = [&](std::size_t lo) {
        if (cur.size() == d) {
            out.push_back(cur);
            return;
        }
        for (std::size_t hi = lo; hi <= depth; ++hi) {
            // blocks with minimum `lo'`>= lo and maximum exactly hi
            const std::uint64_t free = index_range_mask(lo, hi - 1);
            for (std::uint64_t sub = free;; sub = (sub - 1) & free) {
                cur.push_back(sub | index_bit(hi));
                rec(hi + 1);
                cur.pop_back();
                if (sub == 0) break;
            }
        }
    };
    rec(1);
    return out;
}

/**
 * Checks b_F != b_H for all F < H inside {1..depth}. Returns the
 * lexicographically least violating pair (ordered by F, then H), or nullopt
 * when the prefix is proper.
 */
template <GroundSemigroup S>
std::optional<std::pair<Block, Block>> is_proper_up_to(const ElementSequence<S>& seq, std::size_t depth) {
    if (!seq.has(depth)) throw std::out_of_range("sequence has fewer than " + std::to_string(depth) + " terms");
    if (depth < 2) return std::nullopt;
    const auto& s = seq.semigroup();
    auto table = fs_by_mask(seq.prefix(depth), s);
    std::optional<std::pair<Block, Block>> best;
    for (const auto& chain : block_chains(depth, 2)) {
        if (!s.equal(*table[chain[0]], *table[chain[1]])) continue;
        std::pair<Block, Block> cand{Block::from_mask(chain[0]), Block::from_mask(chain[1])};
        if (!best || cand < *best) best = std::move(cand);
    }
    return best;
}

/// Convenience boolean form.
template <GroundSemigroup S>
bool proper_up_to(const ElementSequence<S>& seq, std::size_t depth) {
    return !is_proper_up_to(seq, depth).has_value();
}

/**
 * All distinct d-sets {b_{F_1}, ..., b_{F_d}} for chains F_1 < ... < F_d in
 * {1..depth}; each set is listed in chain order of its first occurrence.
 * d = 1 gives FS(b_1..b_depth), d = 2 the sum graph.
 */
template <GroundSemigroup S>
std::vector<std::vector<typename S::element_type>> sum_hypergraph(const ElementSequence<S>& seq, std::size_t depth,
                                                                  std::size_t d) {
    if (d == 0) throw std::invalid_argument("hyperedge size must be at least 1");
    if (auto bad = is_proper_up_to(seq, depth)) {
        throw improper_sequence_error("sequence is improper: b_" + bad->first.str() + " = b_" + bad->second.str());
    }
    const auto& s = seq.semigroup();
    auto table = fs_by_mask(seq.prefix(depth), s);
    std::vector<std::vector<typename S::element_type>> out;
    std::vector<std::vector<std::uint64_t>> seen_keys;
    for (const auto& chain : block_chains(depth, d)) {
        std::vector<typename S::element_type> edge;
        std::vector<std::uint64_t> keys;
        for (auto m : chain) {
            edge.push_back(*table[m]);
            keys.push_back(s.key(*table[m]));
        }
        std::sort(keys.begin(), keys.end());
        bool dup = false;
        for (std::size_t i = 0; i < seen_keys.size() && !dup; ++i) {
            if (seen_keys[i] != keys) continue;
            // same keys: confirm with equality, as a set
            dup = std::all_of(edge.begin(), edge.end(), [&](const auto& x) {
                return std::any_of(out[i].begin(), out[i].end(), [&](const auto& y) { return s.equal(x, y); });
            }) && std::all_of(out[i].begin(), out[i].end(), [&](const auto& y) {
                return std::any_of(edge.begin(), edge.end(), [&](const auto& x) { return s.equal(x, y); });
            });
        }
        if (dup) continue;
        seen_keys.push_back(std::move(keys));
        out.push_back(std::move(edge));
    }
    return out;
}

}  // namespace hmt

#endif
