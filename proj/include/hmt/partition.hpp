#ifndef HMT_PARTITION_HPP
#define HMT_PARTITION_HPP

#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "hmt/coloring.hpp"
#include "hmt/cover.hpp"
#include "hmt/search.hpp"
#include "hmt/semigroup.hpp"
#include "hmt/sequence.hpp"

namespace hmt {

/**
 * Descending covers U_1 ⊇ U_2 ⊇ ... given through an enumeration
 * U_1, U_2, ... of the first cover: in_cover(n, m) says whether U_m belongs
 * to the n-th cover. escape(n) is a point outside U_1 u ... u U_n.
 * `independent` certifies that F -> U_F is injective on finite index sets.
 */
struct DescendingCovers {
    std::string name = "covers";
    Space space;
    std::vector<PointSet> members;
    std::function<bool(std::size_t, std::size_t)> in_cover;
    std::function<std::optional<std::size_t>(std::size_t)> escape;
    bool independent = false;

    std::size_t length() const { return members.size(); }

    /// First problem found up to cover index `depth`, if any.
    std::optional<std::string> validate(std::size_t depth) const {
        try {
            space.validate();
        } catch (const std::exception& e) {
            return std::string(e.what());
        }
        if (members.empty()) return "no cover members";
        for (const auto& u : members)
            if (u.size() != space.universe) return "member outside the universe";
        for (std::size_t m = 1; m <= length(); ++m)
            if (!in_cover(1, m)) return "member " + std::to_string(m) + " missing from the first cover";
        for (std::size_t n = 1; n < depth; ++n)
            for (std::size_t m = 1; m <= length(); ++m)
                if (in_cover(n + 1, m) && !in_cover(n, m))
                    return "cover " + std::to_string(n + 1) + " is not inside cover " + std::to_string(n);
        PointSet acc(space.universe);
        for (std::size_t n = 1; n <= depth && n <= length(); ++n) {
            acc |= members[n - 1];
            auto x = escape ? escape(n) : std::nullopt;
            if (!x || *x >= space.universe) return "no escape point x_" + std::to_string(n);
            if (acc.test(*x)) return "escape point x_" + std::to_string(n) + " lies in U_1..U_n";
        }
        return std::nullopt;
    }

    PointSet union_of(const Block& f) const {
        PointSet v(space.universe);
        for (auto i : f.indices()) v |= members.at(i - 1);
        return v;
    }
};

/// U_m = [0..m] inside `universe`, n-th cover {U_m : m >= n}, x_n = n + 1.
inline DescendingCovers interval_covers(std::size_t universe, std::size_t horizon, std::size_t length) {
    if (length + 2 > universe) throw std::invalid_argument("universe too small for the escape points");
    DescendingCovers dc;
    dc.name = "intervals";
    dc.space = {universe, horizon, true};
    for (std::size_t m = 1; m <= length; ++m) dc.members.push_back(point_range(universe, 0, m));
    dc.in_cover = [](std::size_t n, std::size_t m) { return m >= n; };
    dc.escape = [](std::size_t n) -> std::optional<std::size_t> { return n + 1; };
    return dc;
}

struct PartitionWitness {
    std::vector<Block> blocks;
    std::vector<PointSet> unions;
    std::optional<Color> color_vertex;
    std::optional<Color> color_edge;
    Verdict coverage = Verdict::unknown;
    std::vector<CertificateEntry<UnionElement>> certificate;
};

struct PartitionResult {
    SearchStatus status = SearchStatus::exhausted;
    std::optional<PartitionWitness> witness;
    std::uint64_t nodes = 0;
    std::size_t best_depth = 0;

    bool found() const { return status == SearchStatus::found; }
};

struct PartitionRequest {
    std::optional<Coloring<UnionElement>> vertex;
    std::optional<Coloring<UnionElement>> edge;
    std::size_t m = 2;
    CoverKind target = CoverKind::lambda;
    CoverParams params;
};

inline IndexedUnion union_semigroup(const DescendingCovers& dc) { return IndexedUnion(dc.members, dc.independent); }

inline ElementSequence<IndexedUnion> union_base(const DescendingCovers& dc) {
    auto s = union_semigroup(dc);
    std::vector<UnionElement> units;
    for (std::size_t i = 1; i <= dc.length(); ++i) units.push_back(s.unit(i));
    return make_sequence(s, units);
}

/**
 * Blocks F_1 < ... < F_m of cover indices with V_n = U_{F_n} such that
 * every U_m (m in F_n) lies in the n-th cover, V_n contains x_1..x_{n-1},
 * the unions over F < H differ, the colorings are constant on the depth-m
 * unions (vertex) and on d-sets of them (edge), and {V_1..V_m} is of the
 * target kind at the horizon. Runs on mt_search over the union semigroup.
 */
inline PartitionResult menger_mt_search(const DescendingCovers& dc, const PartitionRequest& req, SearchBudget budget) {
    if (!req.vertex && !req.edge) throw std::invalid_argument("need a vertex or an edge coloring");
    if (auto bad = dc.validate(req.m + 1)) throw std::invalid_argument("descending covers: " + *bad);
    if (budget.max_value > dc.length()) throw std::invalid_argument("index bound beyond the cover enumeration");
    const auto base = union_base(dc);
    budget.max_blocks = req.m;

    MtOptions<UnionElement> opts;
    opts.require_proper = true;
    opts.admissible = [&dc](std::size_t n, std::uint64_t mask, const UnionElement& v) {
        for (auto i : Block::from_mask(mask).indices())
            if (!dc.in_cover(n, i)) return false;
        for (std::size_t i = 1; i < n; ++i)
            if (!v.value.test(*dc.escape(i))) return false;
        return true;
    };
    const Space sp = dc.space;
    const auto kind = req.target;
    const auto params = req.params;
    opts.target = [sp, kind, params](const std::vector<std::uint64_t>&, const std::vector<UnionElement>& terms, Color) {
        std::vector<PointSet> vs;
        for (const auto& t : terms) vs.push_back(t.value);
        return classify_sets(vs, kind, sp, params, true) == Verdict::holds;
    };
    if (kind == CoverKind::lambda) {
        const std::size_t m_out = req.m;
        opts.feasible = [sp, params, m_out](const std::vector<std::uint64_t>&, const std::vector<UnionElement>& terms,
                                            std::size_t) {
            const std::size_t used = std::min(terms.size(), m_out);
            const std::size_t left = m_out - used;
            for (std::size_t x = 0; x < sp.horizon; ++x) {
                std::size_t c = 0;
                for (std::size_t i = 0; i < used; ++i) c += terms[i].value.test(x) ? 1 : 0;
                if (c + left < params.t) return false;
            }
            return true;
        };
    }

    SearchResult<UnionElement> r;
    if (req.vertex && req.edge) {
        opts.vertex_coloring = req.vertex;
        r = mt_search(*req.edge, base, 2, budget, opts);
    } else if (req.edge) {
        r = mt_search(*req.edge, base, req.edge->arity(), budget, opts);
    } else {
        r = mt_search(*req.vertex, base, 1, budget, opts);
    }
    PartitionResult out;
    out.status = r.status;
    out.nodes = r.nodes;
    out.best_depth = r.best_depth;
    if (!r.witness) return out;
    PartitionWitness w;
    w.blocks = r.witness->blocks;
    for (const auto& t : r.witness->terms) w.unions.push_back(t.value);
    w.color_vertex = r.witness->color_vertex;
    w.color_edge = r.witness->color_edge;
    w.certificate = r.witness->certificate;
    w.coverage = classify_sets(w.unions, req.target, dc.space, req.params, true);
    out.witness = std::move(w);
    return out;
}

/**
 * Independent re-check: block order, cover membership and escape points,
 * V_n recomputed from the enumeration, distinct unions over F < H
 * (extensionally), one vertex color on all unions and one edge color on all
 * d-sets of unions over block chains, and the coverage kind.
 */
inline bool verify_partition_witness(const DescendingCovers& dc, const PartitionRequest& req, const PartitionWitness& w,
                                     std::string* why = nullptr) {
    auto fail = [why](std::string msg) {
        if (why) *why = std::move(msg);
        return false;
    };
    const std::size_t m = w.blocks.size();
    if (m == 0 || m != w.unions.size()) return fail("blocks and unions disagree");
    for (std::size_t n = 1; n <= m; ++n) {
        const auto& f = w.blocks[n - 1];
        if (n > 1 && !(w.blocks[n - 2].max() < f.min())) return fail("blocks out of order");
        for (auto i : f.indices()) {
            if (i > dc.length()) return fail("index beyond the enumeration");
            if (!dc.in_cover(n, i)) return fail("U_" + std::to_string(i) + " not in cover " + std::to_string(n));
        }
        if (dc.union_of(f) != w.unions[n - 1]) return fail("V_" + std::to_string(n) + " is not the union of its block");
        for (std::size_t i = 1; i < n; ++i)
            if (!w.unions[n - 1].test(*dc.escape(i))) return fail("V_" + std::to_string(n) + " misses an escape point");
    }
    // unions over all nonempty F inside {1..m}, by plain recursion
    std::vector<std::pair<std::vector<std::size_t>, PointSet>> subs;
    std::vector<std::size_t> cur;
    std::function<void(std::size_t, const PointSet&)> rec = [&](std::size_t i, const PointSet& acc) {
        if (i > m) {
            if (!cur.empty()) subs.emplace_back(cur, acc);
            return;
        }
        rec(i + 1, acc);
        cur.push_back(i);
        rec(i + 1, acc | w.unions[i - 1]);
        cur.pop_back();
    };
    rec(1, PointSet(dc.space.universe));
    for (const auto& [f, vf] : subs)
        for (const auto& [h, vh] : subs)
            if (f.back() < h.front() && vf == vh) return fail("unions over F < H coincide");

    const auto s = union_semigroup(dc);
    auto element = [&](const std::vector<std::size_t>& f) {
        std::uint64_t gens = 0;
        for (auto n : f) gens |= w.blocks[n - 1].mask();
        return s.from_gens(gens);
    };
    if (req.vertex) {
        std::optional<Color> c;
        for (const auto& [f, v] : subs) {
            const Color got = (*req.vertex)(element(f));
            if (c && *c != got) return fail("vertex coloring not constant");
            c = got;
        }
    }
    if (req.edge) {
        const std::size_t d = req.edge->arity();
        std::optional<Color> c;
        std::vector<std::vector<std::size_t>> chain;
        std::function<bool(std::size_t)> chains = [&](std::size_t from) -> bool {
            if (chain.size() == d) {
                std::vector<UnionElement> members;
                for (const auto& idx : chain) members.push_back(element(idx));
                const Color got = (*req.edge)(std::span<const UnionElement>(members));
                if (c && *c != got) return false;
                c = got;
                return true;
            }
            for (const auto& [f, v] : subs) {
                if (f.front() < from) continue;
                chain.push_back(f);
                const bool ok = chains(f.back() + 1);
                chain.pop_back();
                if (!ok) return false;
            }
            return true;
        };
        if (!chains(1)) return fail("edge coloring not constant");
    }
    if (classify_sets(w.unions, req.target, dc.space, req.params, true) != Verdict::holds)
        return fail("unions are not of the target kind at the horizon");
    return true;
}

/**
 * A discrete space of K points inside the naturals: covers by the initial
 * segments [0..j], target Omega with subset size s. Every finite subset of
 * the K points must lie in one of V_1..V_m.
 */
inline PartitionResult discrete_comb_search(std::size_t k, std::size_t length, PartitionRequest req, SearchBudget budget) {
    if (k == 0) throw std::invalid_argument("K must be positive");
    auto dc = interval_covers(k + length + 2, k, length);
    dc.name = "initial-segments";
    req.target = CoverKind::omega;
    return menger_mt_search(dc, req, budget);
}

}  // namespace hmt

#endif
