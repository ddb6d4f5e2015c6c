#ifndef HMT_COLLAPSE_HPP
#define HMT_COLLAPSE_HPP

#include <algorithm>
#include <optional>
#include <string_view>
#include <vector>

#include "hmt/search.hpp"

namespace hmt {

enum class Dichotomy { proper, collapse, unknown };

inline std::string_view to_string(Dichotomy d) {
    switch (d) {
        case Dichotomy::proper: return "proper";
        case Dichotomy::collapse: return "collapse";
        case Dichotomy::unknown: return "unknown-at-depth";
    }
    return "?";
}

template <class E>
struct CollapseResult {
    Dichotomy kind = Dichotomy::unknown;
    std::vector<Block> blocks;
    std::optional<E> element;
    std::uint64_t nodes = 0;
};

/**
 * Searches blocks F_1 < ... < F_m inside {1..depth} whose sum graph is
 * monochromatic for the cardinality coloring. Color 2 means all edges have
 * distinct ends, so the sumsequence is proper. Color 1 means every block sum
 * is one element e; it is accepted only after e + e = e is checked.
 * m defaults to max(2, depth - 1).
 */
template <GroundSemigroup S>
CollapseResult<typename S::element_type> proper_or_collapse(const ElementSequence<S>& seq, std::size_t depth,
                                                            std::size_t m = 0,
                                                            std::uint64_t node_limit = 10'000'000) {
    using E = typename S::element_type;
    const auto& s = seq.semigroup();
    if (m == 0) m = std::max<std::size_t>(2, depth - 1);
    MtOptions<E> opts;
    opts.require_proper = false;
    opts.target = [s](const std::vector<std::uint64_t>&, const std::vector<E>& terms, Color c) {
        if (c == 2) return true;
        const E& e = terms.front();
        return s.equal(s.combine(e, e), e);
    };
    SearchBudget b;
    b.max_value = depth;
    b.max_blocks = m;
    b.node_limit = node_limit;
    auto r = mt_search(cardinality_coloring(s, 2), seq, 2, b, opts);
    CollapseResult<E> out;
    out.nodes = r.nodes;
    if (!r.found()) return out;
    out.blocks = r.witness->blocks;
    if (r.witness->color_edge == 2U) {
        out.kind = Dichotomy::proper;
    } else {
        out.kind = Dichotomy::collapse;
        out.element = r.witness->terms.front();
    }
    return out;
}

/// Re-checks a dichotomy certificate without the search.
template <GroundSemigroup S>
bool verify_collapse_result(const ElementSequence<S>& seq, const CollapseResult<typename S::element_type>& r) {
    const auto& s = seq.semigroup();
    if (r.kind == Dichotomy::unknown) return true;
    if (r.blocks.size() < 2) return false;
    for (std::size_t i = 1; i < r.blocks.size(); ++i)
        if (!block_less(r.blocks[i - 1], r.blocks[i])) return false;
    auto induced = take_sumsequence(seq, BlockSequence(r.blocks));
    if (r.kind == Dichotomy::proper) return proper_up_to(induced, r.blocks.size());
    if (!r.element) return false;
    const auto& e = *r.element;
    if (!s.equal(s.combine(e, e), e)) return false;
    for (const auto& [f, v] : fs_enumerate(induced, r.blocks.size()))
        if (!s.equal(v, e)) return false;
    return true;
}

}  // namespace hmt

#endif
