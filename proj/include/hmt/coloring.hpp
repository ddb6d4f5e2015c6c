#ifndef HMT_COLORING_HPP
#define HMT_COLORING_HPP

#include <algorithm>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "hmt/hash.hpp"
#include "hmt/semigroup.hpp"
#include "hmt/sequence.hpp"

namespace hmt {

using Color = std::uint32_t;

/**
 * A finite coloring of d-element sets of elements, with colors in {1..k}.
 *
 * Inputs are passed as a list of d elements (possibly with repeats, which is
 * what the cardinality coloring inspects). Builtin colorings are symmetric in
 * their inputs; user functions are expected to be too. Every evaluation is
 * range-checked.
 */
template <class E>
class Coloring {
public:
    using function_type = std::function<Color(std::span<const E>)>;

    Coloring(std::size_t arity, std::size_t palette, function_type fn, std::string name = "custom")
        : arity_(arity), palette_(palette), fn_(std::move(fn)), name_(std::move(name)) {
        if (arity_ == 0) throw std::invalid_argument("coloring arity must be at least 1");
        if (palette_ == 0) throw std::invalid_argument("coloring palette must be at least 1");
    }

    std::size_t arity() const { return arity_; }
    std::size_t palette() const { return palette_; }
    const std::string& name() const { return name_; }

    Color operator()(std::span<const E> xs) const {
        if (xs.size() != arity_) {
            throw std::invalid_argument("coloring of arity " + std::to_string(arity_) + " applied to " +
                                        std::to_string(xs.size()) + " elements");
        }
        const Color c = fn_(xs);
        if (c < 1 || c > palette_) {
            throw std::logic_error("coloring '" + name_ + "' returned " + std::to_string(c) + " outside 1.." +
                                   std::to_string(palette_));
        }
        return c;
    }
    Color operator()(const E& a) const { return (*this)(std::span<const E>(&a, 1)); }
    Color operator()(const E& a, const E& b) const {
        const E xs[2] = {a, b};
        return (*this)(std::span<const E>(xs, 2));
    }

private:
    std::size_t arity_;
    std::size_t palette_;
    function_type fn_;
    std::string name_;
};

/// Pair colors (c1, c2) encoded as (c1 - 1) * k2 + c2.
template <class E>
Coloring<E> product_coloring(const Coloring<E>& c1, const Coloring<E>& c2) {
    if (c1.arity() != c2.arity()) throw std::invalid_argument("product of colorings with different arity");
    const std::size_t k2 = c2.palette();
    return Coloring<E>(
        c1.arity(), c1.palette() * k2,
        [c1, c2, k2](std::span<const E> xs) { return static_cast<Color>((c1(xs) - 1) * k2 + c2(xs)); },
        "product(" + c1.name() + "," + c2.name() + ")");
}

/// Inverse of the product encoding.
inline std::pair<Color, Color> split_product_color(Color c, std::size_t k2) {
    return {static_cast<Color>((c - 1) / k2 + 1), static_cast<Color>((c - 1) % k2 + 1)};
}

/**
 * Edge coloring eta = (kappa, chi_edge), kappa({s,t}) = chi_vertex of the
 * enumeration-smaller of s, t. On a proper sequence whose eta-sum graph is
 * monochromatic, every vertex that is the smaller end of some edge carries
 * one chi_vertex color.
 */
template <GroundSemigroup S>
Coloring<typename S::element_type> reduce_two_dim_to_one(const Coloring<typename S::element_type>& chi_vertex,
                                                         const Coloring<typename S::element_type>& chi_edge,
                                                         const S& s) {
    using E = typename S::element_type;
    if (chi_vertex.arity() != 1) throw std::invalid_argument("vertex coloring must have arity 1");
    if (chi_edge.arity() != 2) throw std::invalid_argument("edge coloring must have arity 2");
    Coloring<E> kappa(
        2, chi_vertex.palette(),
        [chi_vertex, s](std::span<const E> xs) { return chi_vertex(s.enum_less(xs[1], xs[0]) ? xs[1] : xs[0]); },
        "min(" + chi_vertex.name() + ")");
    return product_coloring(kappa, chi_edge);
}

/**
 * Pulls a coloring of d-sets of S back to (Fin, union) along a base sequence:
 * {F_1..F_d} gets chi({a_{F_1}..a_{F_d}}) when the F_i can be arranged into a
 * block chain, and color 1 otherwise. Throws improper_sequence_error when the
 * base collapses two comparable blocks.
 */
template <GroundSemigroup S>
Coloring<FinSet> pullback_to_fin(const Coloring<typename S::element_type>& chi, const ElementSequence<S>& base) {
    return Coloring<FinSet>(
        chi.arity(), chi.palette(),
        [chi, base](std::span<const FinSet> fs) -> Color {
            std::vector<FinSet> sorted(fs.begin(), fs.end());
            std::sort(sorted.begin(), sorted.end(), [](const FinSet& a, const FinSet& b) {
                if (a.empty() || b.empty()) return a.bits() < b.bits();
                return a.min() < b.min();
            });
            for (std::size_t i = 0; i < sorted.size(); ++i) {
                if (sorted[i].empty()) return 1;
                if (i > 0 && !(sorted[i - 1].max() < sorted[i].min())) return 1;
            }
            std::vector<typename S::element_type> vals;
            for (const auto& f : sorted) {
                std::vector<std::size_t> idx(f.elements().begin(), f.elements().end());
                vals.push_back(indexed_sum(base, Block(std::move(idx))));
            }
            for (std::size_t i = 0; i < vals.size(); ++i)
                for (std::size_t j = i + 1; j < vals.size(); ++j)
                    if (base.semigroup().equal(vals[i], vals[j]))
                        throw improper_sequence_error("base collapses comparable blocks " + sorted[i].str() + " and " +
                                                      sorted[j].str());
            return chi(std::span<const typename S::element_type>(vals));
        },
        "pullback(" + chi.name() + ")");
}

/// Colors a d-set by how many distinct elements it has (palette d).
template <GroundSemigroup S>
Coloring<typename S::element_type> cardinality_coloring(const S& s, std::size_t d) {
    using E = typename S::element_type;
    return Coloring<E>(
        d, d,
        [s](std::span<const E> xs) {
            Color distinct = 0;
            for (std::size_t i = 0; i < xs.size(); ++i) {
                bool fresh = true;
                for (std::size_t j = 0; j < i && fresh; ++j) fresh = !s.equal(xs[i], xs[j]);
                distinct += fresh ? 1 : 0;
            }
            return distinct;
        },
        "cardinality");
}

template <class E>
Coloring<E> constant_coloring(std::size_t arity, Color c = 1, std::size_t palette = 1) {
    return Coloring<E>(arity, std::max<std::size_t>(palette, c), [c](std::span<const E>) { return c; }, "constant");
}

/// (sum of weights mod k) + 1; k = 2 is the parity coloring (even -> 1).
template <GroundSemigroup S>
Coloring<typename S::element_type> mod_coloring(const S& s, std::size_t arity, std::size_t k) {
    using E = typename S::element_type;
    if (k == 0) throw std::invalid_argument("mod coloring needs k >= 1");
    return Coloring<E>(
        arity, k,
        [s, k](std::span<const E> xs) {
            std::uint64_t sum = 0;
            for (const auto& x : xs) sum += s.weight(x);
            return static_cast<Color>(sum % k + 1);
        },
        k == 2 ? "parity" : "mod-" + std::to_string(k));
}

template <GroundSemigroup S>
Coloring<typename S::element_type> parity_coloring(const S& s, std::size_t arity) {
    return mod_coloring(s, arity, 2);
}

/// Reproducible pseudo-random coloring: a seeded hash of the sorted element keys.
template <GroundSemigroup S>
Coloring<typename S::element_type> seeded_hash_coloring(const S& s, std::size_t arity, std::size_t k,
                                                        std::uint64_t seed) {
    using E = typename S::element_type;
    if (k == 0) throw std::invalid_argument("hash coloring needs k >= 1");
    return Coloring<E>(
        arity, k,
        [s, k, seed](std::span<const E> xs) {
            std::vector<std::uint64_t> keys;
            keys.reserve(xs.size());
            for (const auto& x : xs) keys.push_back(s.key(x));
            std::sort(keys.begin(), keys.end());
            std::uint64_t h = mix64(seed);
            for (auto key : keys) h = hash_combine(h, key);
            return static_cast<Color>(h % k + 1);
        },
        "seeded-hash-" + std::to_string(k));
}

/// Coloring given by an explicit table over natural numbers (index = value).
inline Coloring<std::uint64_t> table_coloring(std::vector<Color> colors, std::size_t palette) {
    return Coloring<std::uint64_t>(
        1, palette,
        [colors = std::move(colors)](std::span<const std::uint64_t> xs) -> Color {
            if (xs[0] >= colors.size() || colors[xs[0]] == 0) {
                throw std::out_of_range("table coloring undefined at " + std::to_string(xs[0]));
            }
            return colors[xs[0]];
        },
        "table");
}

}  // namespace hmt

#endif
