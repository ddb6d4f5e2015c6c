#ifndef HMT_COFINITE_HPP
#define HMT_COFINITE_HPP

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "hmt/coloring.hpp"
#include "hmt/cover.hpp"
#include "hmt/partition.hpp"
#include "hmt/search.hpp"
#include "hmt/semigroup.hpp"

namespace hmt {

/**
 * The space of cofinite subsets of N, truncated to sets whose complement
 * lies in {1..T}. Point p stands for the set whose complement has bit n-1
 * of p set exactly when n is missing. O_n = {A : n in A}. The horizon is
 * the 2^H points whose complement lies in {1..H}.
 */
struct CofiniteEncoding {
    std::size_t truncation = 0;
    std::size_t horizon_bits = 0;
    DescendingCovers covers;

    std::size_t universe() const { return std::size_t{1} << truncation; }

    PointSet o(std::size_t n) const {
        PointSet s(universe());
        for (std::size_t p = 0; p < universe(); ++p)
            if (n > truncation || !((p >> (n - 1)) & 1U)) s.set(p);
        return s;
    }

    /// O_F = union of O_n over n in F.
    PointSet o_of(const FinSet& f) const {
        PointSet s(universe());
        for (unsigned n = 1; n <= truncation; ++n)
            if (f.contains(n)) s |= o(n);
        return s;
    }

    /// The point missing exactly {1..T} \ {n}: it lies in O_F iff n in F.
    std::size_t probe(std::size_t n) const { return (universe() - 1) ^ (std::size_t{1} << (n - 1)); }

    /// F with V = O_F; throws when V is no such union.
    FinSet decode(const PointSet& v) const {
        std::uint64_t bits = 0;
        for (std::size_t n = 1; n <= truncation; ++n)
            if (v.test(probe(n))) bits |= std::uint64_t{1} << (n - 1);
        if (bits == 0) throw std::invalid_argument("empty union does not decode");
        FinSet f = FinSet::from_bits(bits);
        if (o_of(f) != v) throw std::invalid_argument("set is not a union of the O_n");
        return f;
    }

    Cover cover() const {
        auto self = *this;
        return Cover::generated("O_n", universe(), [self](std::size_t n) { return self.o(n); },
                                [self](std::size_t n) -> std::optional<std::size_t> {
                                    if (n > self.truncation) return std::nullopt;
                                    return (std::size_t{1} << n) - 1;
                                });
    }
};

inline CofiniteEncoding encode_cofinite_example(std::size_t truncation, std::size_t horizon_bits) {
    if (truncation == 0 || truncation > 16) throw std::invalid_argument("truncation must lie in 1..16");
    if (horizon_bits == 0 || horizon_bits >= truncation)
        throw std::invalid_argument("horizon bits must lie in 1..truncation-1");
    CofiniteEncoding e;
    e.truncation = truncation;
    e.horizon_bits = horizon_bits;
    auto& dc = e.covers;
    dc.name = "cofinite-O";
    dc.space = {e.universe(), std::size_t{1} << horizon_bits, true};
    for (std::size_t n = 1; n <= truncation; ++n) dc.members.push_back(e.o(n));
    dc.in_cover = [](std::size_t n, std::size_t m) { return m >= n; };
    dc.escape = [truncation](std::size_t n) -> std::optional<std::size_t> {
        if (n > truncation) return std::nullopt;
        return (std::size_t{1} << n) - 1;
    };
    dc.independent = true;
    return e;
}

/// A Fin coloring carried over to unions of the O_n through F -> O_F.
inline Coloring<UnionElement> transport_from_fin(const Coloring<FinSet>& chi) {
    return Coloring<UnionElement>(
        chi.arity(), chi.palette(),
        [chi](std::span<const UnionElement> xs) {
            std::vector<FinSet> fs;
            for (const auto& x : xs) fs.push_back(FinSet::from_bits(x.gens));
            return chi(std::span<const FinSet>(fs));
        },
        "transported(" + chi.name() + ")");
}

/// Blocks F_n of a witness on this instance, read off the unions.
inline std::vector<FinSet> decode_witness(const CofiniteEncoding& e, const PartitionWitness& w) {
    std::vector<FinSet> out;
    for (const auto& v : w.unions) out.push_back(e.decode(v));
    return out;
}

/// Lambda(t) at the horizon in Fin terms: the horizon point with complement
/// c lies in O_F iff F is not inside c. `left` blocks are still to come.
inline bool fin_lambda(const std::vector<FinSet>& fs, std::size_t left, std::size_t horizon_bits, std::size_t t) {
    for (std::uint64_t c = 0; c < (std::uint64_t{1} << horizon_bits); ++c) {
        std::size_t k = 0;
        for (const auto& f : fs) k += (f.bits() & ~c) != 0 ? 1 : 0;
        if (k + left < t) return false;
    }
    return true;
}

struct RoundTrip {
    PartitionResult menger;
    SearchResult<FinSet> direct;
    std::vector<FinSet> decoded;
    bool match = false;
    std::string why;
};

/**
 * Runs menger_mt_search on the encoding with the transported pair coloring
 * and mt_search on (Fin, u) over ({1}, {2}, ...) with the same conditions
 * written in Fin terms, then compares status, node counts and decoded blocks.
 */
inline RoundTrip cofinite_round_trip(const CofiniteEncoding& e, const Coloring<FinSet>& chi, std::size_t m,
                                     std::size_t t, SearchBudget budget) {
    RoundTrip out;
    PartitionRequest req;
    req.edge = transport_from_fin(chi);
    req.m = m;
    req.params.t = t;
    out.menger = menger_mt_search(e.covers, req, budget);

    FiniteSets fin;
    std::vector<FinSet> units;
    for (unsigned n = 1; n <= e.truncation; ++n) units.push_back(FinSet::from_bits(std::uint64_t{1} << (n - 1)));
    const auto base = make_sequence(fin, units);
    const std::size_t h = e.horizon_bits;
    MtOptions<FinSet> opts;
    // min F >= n also puts the escape points x_1..x_{n-1} in O_F
    opts.admissible = [](std::size_t n, std::uint64_t, const FinSet& f) { return f.min() >= n; };
    opts.target = [h, t](const std::vector<std::uint64_t>&, const std::vector<FinSet>& fs, Color) {
        return fin_lambda(fs, 0, h, t);
    };
    opts.feasible = [h, t, m](const std::vector<std::uint64_t>&, const std::vector<FinSet>& fs, std::size_t) {
        return fin_lambda(fs, m - std::min(m, fs.size()), h, t);
    };
    budget.max_blocks = m;
    out.direct = mt_search(chi, base, chi.arity(), budget, opts);

    if (out.menger.status != out.direct.status) {
        out.why = "status differs";
        return out;
    }
    if (out.menger.nodes != out.direct.nodes) {
        out.why = "node counts differ";
        return out;
    }
    if (out.menger.witness) {
        out.decoded = decode_witness(e, *out.menger.witness);
        if (out.decoded != out.direct.witness->terms) {
            out.why = "decoded blocks differ";
            return out;
        }
        std::string why;
        if (!verify_partition_witness(e.covers, req, *out.menger.witness, &why)) {
            out.why = "menger witness: " + why;
            return out;
        }
        if (!verify_mt_witness(chi, base, chi.arity(), *out.direct.witness, true, std::nullopt, &why)) {
            out.why = "direct witness: " + why;
            return out;
        }
    }
    out.match = true;
    return out;
}

}  // namespace hmt

#endif
