#ifndef HMT_SEMIGROUP_HPP
#define HMT_SEMIGROUP_HPP

#include <bit>
#include <concepts>
#include <cstdint>
#include <initializer_list>
#include <limits>
#include <memory>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <boost/dynamic_bitset.hpp>

#include "hmt/hash.hpp"

namespace hmt {

/// Extensional subset of a finite universe of points {0, ..., size-1}.
using PointSet = boost::dynamic_bitset<std::uint64_t>;

inline std::uint64_t point_set_key(const PointSet& s) {
    std::vector<std::uint64_t> blocks;
    boost::to_block_range(s, std::back_inserter(blocks));
    std::uint64_t h = mix64(s.size());
    for (auto b : blocks) h = hash_combine(h, b);
    return h;
}

/// Largest point in the set, or nullopt when empty.
inline std::optional<std::size_t> point_set_max(const PointSet& s) {
    std::optional<std::size_t> best;
    for (auto p = s.find_first(); p != PointSet::npos; p = s.find_next(p)) best = p;
    return best;
}

enum class SemigroupKind { naturals, finite_sets, indexed_union };

inline std::string_view to_string(SemigroupKind k) {
    switch (k) {
        case SemigroupKind::naturals: return "naturals";
        case SemigroupKind::finite_sets: return "finite-sets";
        case SemigroupKind::indexed_union: return "indexed-union";
    }
    return "?";
}

/**
 * Requirements on a ground semigroup.
 *
 * `enumerate` is an injective map from 0-based ranks to elements; `rank`
 * inverts it. `enum_less` is the induced order, in which every element has
 * finitely many predecessors. `key` is a stable 64-bit key compatible with
 * `equal`; `weight` is a natural-number statistic used by builtin colorings.
 */
template <class S>
concept GroundSemigroup = requires(const S& s, const typename S::element_type& a, std::uint64_t n) {
    typename S::element_type;
    { s.kind() } -> std::same_as<SemigroupKind>;
    { s.combine(a, a) } -> std::same_as<typename S::element_type>;
    { s.equal(a, a) } -> std::convertible_to<bool>;
    { s.enumerate(n) } -> std::same_as<typename S::element_type>;
    { s.rank(a) } -> std::same_as<std::optional<std::uint64_t>>;
    { s.enum_less(a, a) } -> std::convertible_to<bool>;
    { s.key(a) } -> std::same_as<std::uint64_t>;
    { s.weight(a) } -> std::same_as<std::uint64_t>;
    { s.valid(a) } -> std::convertible_to<bool>;
    { s.format(a) } -> std::same_as<std::string>;
};

/// (N, +) over the positive integers.
struct Naturals {
    using element_type = std::uint64_t;

    SemigroupKind kind() const { return SemigroupKind::naturals; }
    element_type combine(element_type a, element_type b) const {
        if (a > std::numeric_limits<element_type>::max() - b) throw std::overflow_error("natural sum overflows");
        return a + b;
    }
    bool equal(element_type a, element_type b) const { return a == b; }
    element_type enumerate(std::uint64_t n) const { return n + 1; }
    std::optional<std::uint64_t> rank(element_type a) const {
        if (a == 0) return std::nullopt;
        return a - 1;
    }
    bool enum_less(element_type a, element_type b) const { return a < b; }
    std::uint64_t key(element_type a) const { return a; }
    std::uint64_t weight(element_type a) const { return a; }
    bool valid(element_type a) const { return a >= 1; }
    std::string format(element_type a) const { return std::to_string(a); }
};

/**
 * Nonempty finite subset of {1, ..., 64}, held as a bitmask (bit i-1 for i).
 */
class FinSet {
public:
    FinSet() = default;
    FinSet(std::initializer_list<unsigned> elems) {
        for (auto e : elems) insert(e);
    }
    static FinSet from_bits(std::uint64_t bits) {
        FinSet f;
        f.bits_ = bits;
        return f;
    }
    static FinSet range(unsigned lo, unsigned hi) {
        FinSet f;
        for (unsigned i = lo; i <= hi; ++i) f.insert(i);
        return f;
    }

    void insert(unsigned e) {
        if (e == 0 || e > 64) throw std::out_of_range("finite-set elements must lie in 1..64");
        bits_ |= std::uint64_t{1} << (e - 1);
    }
    bool contains(unsigned e) const { return e >= 1 && e <= 64 && ((bits_ >> (e - 1)) & 1U); }
    bool empty() const { return bits_ == 0; }
    std::size_t size() const { return std::popcount(bits_); }
    unsigned min() const { return std::countr_zero(bits_) + 1; }
    unsigned max() const { return 64 - std::countl_zero(bits_); }
    std::uint64_t bits() const { return bits_; }
    bool subset_of(const FinSet& o) const { return (bits_ & ~o.bits_) == 0; }
    std::vector<unsigned> elements() const {
        std::vector<unsigned> out;
        for (auto m = bits_; m != 0; m &= m - 1) out.push_back(std::countr_zero(m) + 1);
        return out;
    }

    friend FinSet operator|(FinSet a, FinSet b) { return from_bits(a.bits_ | b.bits_); }
    friend FinSet operator&(FinSet a, FinSet b) { return from_bits(a.bits_ & b.bits_); }
    friend bool operator==(const FinSet&, const FinSet&) = default;

    std::string str() const {
        std::ostringstream os;
        os << '{';
        bool first = true;
        for (auto e : elements()) {
            os << (first ? "" : ",") << e;
            first = false;
        }
        os << '}';
        return os.str();
    }

private:
    std::uint64_t bits_ = 0;
};

/// (Fin, union): nonempty finite sets of naturals, every element idempotent.
/// Enumeration is the binary order: rank r <-> set with bitmask r + 1.
struct FiniteSets {
    using element_type = FinSet;

    SemigroupKind kind() const { return SemigroupKind::finite_sets; }
    FinSet combine(const FinSet& a, const FinSet& b) const { return a | b; }
    bool equal(const FinSet& a, const FinSet& b) const { return a == b; }
    FinSet enumerate(std::uint64_t n) const {
        if (n == std::numeric_limits<std::uint64_t>::max()) throw std::out_of_range("rank too large");
        return FinSet::from_bits(n + 1);
    }
    std::optional<std::uint64_t> rank(const FinSet& a) const {
        if (a.empty()) return std::nullopt;
        return a.bits() - 1;
    }
    bool enum_less(const FinSet& a, const FinSet& b) const { return a.bits() < b.bits(); }
    std::uint64_t key(const FinSet& a) const { return a.bits(); }
    std::uint64_t weight(const FinSet& a) const { return a.size(); }
    bool valid(const FinSet& a) const { return !a.empty(); }
    std::string format(const FinSet& a) const { return a.str(); }
};

/// Element of an indexed-union semigroup: the generator indices it is the
/// union of, plus the resulting point set.
struct UnionElement {
    std::uint64_t gens = 0;
    PointSet value;
};

/**
 * Finite unions of indexed generator sets U_1, U_2, ... over a point universe.
 *
 * When `independent` is set the map F -> U_F is injective (certified by the
 * instance, e.g. the cofinite-sets encoding) and equality compares generator
 * indices; otherwise it compares the extensional point sets.
 */
class IndexedUnion {
public:
    using element_type = UnionElement;

    IndexedUnion(std::vector<PointSet> generators, bool independent)
        : gens_(std::make_shared<const std::vector<PointSet>>(std::move(generators))), independent_(independent) {
        if (gens_->empty()) throw std::invalid_argument("indexed union needs at least one generator");
        if (gens_->size() > 64) throw std::invalid_argument("indexed union supports at most 64 generators");
        universe_ = gens_->front().size();
        for (const auto& g : *gens_) {
            if (g.size() != universe_) throw std::invalid_argument("generators must share one universe");
        }
    }

    SemigroupKind kind() const { return SemigroupKind::indexed_union; }
    std::size_t generator_count() const { return gens_->size(); }
    std::size_t universe() const { return universe_; }
    bool independent() const { return independent_; }
    const PointSet& generator(std::size_t i) const { return gens_->at(i - 1); }

    /// The element U_i (1-based).
    UnionElement unit(std::size_t i) const {
        if (i == 0 || i > gens_->size()) throw std::out_of_range("generator index " + std::to_string(i));
        return UnionElement{std::uint64_t{1} << (i - 1), generator(i)};
    }

    UnionElement from_gens(std::uint64_t gens) const {
        if (gens == 0) throw std::invalid_argument("union of no generators");
        PointSet v(universe_);
        for (auto m = gens; m != 0; m &= m - 1) {
            const auto i = static_cast<std::size_t>(std::countr_zero(m)) + 1;
            if (i > gens_->size()) throw std::out_of_range("generator index " + std::to_string(i));
            v |= generator(i);
        }
        return UnionElement{gens, std::move(v)};
    }

    UnionElement combine(const UnionElement& a, const UnionElement& b) const {
        return UnionElement{a.gens | b.gens, a.value | b.value};
    }
    bool equal(const UnionElement& a, const UnionElement& b) const {
        return independent_ ? a.gens == b.gens : a.value == b.value;
    }
    UnionElement enumerate(std::uint64_t n) const { return from_gens(n + 1); }
    std::optional<std::uint64_t> rank(const UnionElement& a) const {
        if (a.gens == 0) return std::nullopt;
        return a.gens - 1;
    }
    bool enum_less(const UnionElement& a, const UnionElement& b) const { return a.gens < b.gens; }
    std::uint64_t key(const UnionElement& a) const { return independent_ ? mix64(a.gens) : point_set_key(a.value); }
    std::uint64_t weight(const UnionElement& a) const {
        auto m = point_set_max(a.value);
        return m ? *m : 0;
    }
    bool valid(const UnionElement& a) const {
        return a.gens != 0 && a.value.size() == universe_ && std::bit_width(a.gens) <= gens_->size();
    }
    std::string format(const UnionElement& a) const {
        std::ostringstream os;
        os << "U" << FinSet::from_bits(a.gens).str();
        return os.str();
    }

private:
    std::shared_ptr<const std::vector<PointSet>> gens_;
    std::size_t universe_ = 0;
    bool independent_ = false;
};

/// Samples associativity on all triples of the first `n` enumerated elements
/// and injectivity of the enumeration on all pairs. Returns the first failing
/// description, or nullopt.
template <GroundSemigroup S>
std::optional<std::string> check_semigroup_laws(const S& s, std::uint64_t n) {
    std::vector<typename S::element_type> els;
    for (std::uint64_t i = 0; i < n; ++i) els.push_back(s.enumerate(i));
    for (std::size_t i = 0; i < els.size(); ++i) {
        for (std::size_t j = i + 1; j < els.size(); ++j) {
            if (s.equal(els[i], els[j])) return "enumeration not injective at ranks " + std::to_string(i) + "," + std::to_string(j);
        }
    }
    for (const auto& a : els)
        for (const auto& b : els)
            for (const auto& c : els)
                if (!s.equal(s.combine(s.combine(a, b), c), s.combine(a, s.combine(b, c))))
                    return "associativity fails on " + s.format(a) + "," + s.format(b) + "," + s.format(c);
    return std::nullopt;
}

}  // namespace hmt

#endif
