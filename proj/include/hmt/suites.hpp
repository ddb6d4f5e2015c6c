#ifndef HMT_SUITES_HPP
#define HMT_SUITES_HPP

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "hmt/cover.hpp"
#include "hmt/game.hpp"
#include "hmt/hash.hpp"
#include "hmt/transfer.hpp"

// Seeded batteries over the game referee and the strategy transfers, shared
// by the CLI and the acceptance run.

namespace hmt {

struct FilterGameRun {
    std::string filter;
    unsigned strategy = 0;
    bool legal = false;
    std::string error;
    std::vector<std::uint64_t> picks;
    /// horizons h at which judge did not return bob_wins
    std::vector<std::size_t> lost;
};

inline std::optional<GeneratedFilter> filter_by_name(const std::string& name) {
    if (name == "cofinite") return cofinite_filter();
    if (name == "dyadic") return dyadic_filter();
    if (name == "triadic-tail") return triadic_tail_filter();
    return std::nullopt;
}

inline FilterGameRun run_filter_game(const GeneratedFilter& f, unsigned k, std::size_t rounds) {
    FilterGameRun r;
    r.filter = f.name;
    r.strategy = k;
    auto t = play(scripted_filter_alice(f, k), filter_bob(f), rounds, GameMode::g1);
    r.legal = t.legal;
    r.error = t.error;
    r.picks = t.selections();
    for (std::size_t h = 1; h <= rounds; ++h)
        if (judge(t, filter_target(f, h)) != Outcome::bob_wins) r.lost.push_back(h);
    return r;
}

// ---- Gfin -> G1 ------------------------------------------------------------

constexpr std::size_t transfer_universe = 64;

/// Intervals [0 .. a*m + b], m = 1, 2, ...
inline Cover stretched_intervals(std::size_t a, std::size_t b, std::size_t universe = transfer_universe) {
    return Cover::generated("[0.." + std::to_string(a) + "m+" + std::to_string(b) + "]", universe,
                            [=](std::size_t m) { return point_range(universe, 0, a * m + b); });
}

/// Inner G1 strategy: the cover offered in round r depends on r and the seed.
inline AliceStrategy<PointSet> seeded_interval_alice(std::uint64_t seed, std::size_t prefix) {
    return {"intervals/" + std::to_string(seed), [seed, prefix](const History<PointSet>& h) {
                const std::size_t r = h.size();
                return cover_offer(stretched_intervals(2 + (seed + r) % 3, (7 * seed + r) % 3), prefix);
            }};
}

/// Gfin Bob choosing a random nonempty part of the first six members.
inline BobStrategy<PointSet> seeded_fin_bob(std::uint64_t seed) {
    return {"seeded/" + std::to_string(seed), [seed](const History<PointSet>& h, const Offer<PointSet>& o) {
                std::mt19937_64 rng(mix64(seed) + h.size());
                auto menu = o.first(6);
                std::vector<PointSet> out;
                for (const auto& s : menu)
                    if (rng() % 3 == 0) out.push_back(s);
                if (out.empty() && !menu.empty()) out.push_back(menu[rng() % menu.size()]);
                return out;
            }};
}

struct ConvertRun {
    std::uint64_t seed = 0;
    bool legal = false;
    std::string error;
    std::vector<std::size_t> fin_multiplicity;
    std::vector<std::size_t> collapsed_multiplicity;
    /// every horizon point has multiplicity >= t
    bool fin_lambda = false;
    bool collapsed_lambda = false;
    /// collapsed multiplicity >= min(t, Gfin multiplicity) at every point
    bool pointwise = false;

    bool preserved() const { return legal && pointwise && (!fin_lambda || collapsed_lambda); }
};

inline ConvertRun run_convert(std::uint64_t seed, std::size_t horizon, std::size_t t, std::size_t rounds,
                              std::size_t prefix = 40) {
    ConvertRun r;
    r.seed = seed;
    auto g = play(convert_gfin_to_g1(seeded_interval_alice(seed, prefix), prefix), seeded_fin_bob(seed), rounds,
                  GameMode::gfin);
    r.legal = g.legal;
    r.error = g.error;
    if (!g.legal) return r;
    std::vector<std::vector<PointSet>> fin, one;
    for (const auto& round : g.rounds) fin.push_back(round.picks);
    for (const auto& b : collapse_selections(g)) one.push_back({b});
    r.fin_multiplicity = round_multiplicity(fin, horizon);
    r.collapsed_multiplicity = round_multiplicity(one, horizon);
    r.fin_lambda = r.collapsed_lambda = r.pointwise = true;
    for (std::size_t x = 0; x < horizon; ++x) {
        r.fin_lambda = r.fin_lambda && r.fin_multiplicity[x] >= t;
        r.collapsed_lambda = r.collapsed_lambda && r.collapsed_multiplicity[x] >= t;
        r.pointwise = r.pointwise && r.collapsed_multiplicity[x] >= std::min(t, r.fin_multiplicity[x]);
    }
    return r;
}

// ---- diagonal covers ---------------------------------------------------------

/// Strategy tree answering each path with a seeded stretched-interval cover.
inline StrategyTree seeded_interval_tree(std::uint64_t seed) {
    return [seed](const Path& p) {
        std::uint64_t h = mix64(seed);
        for (auto x : p) h = hash_combine(h, x);
        return std::optional<Cover>(stretched_intervals(1 + h % 3, (h >> 8) % 4));
    };
}

struct DiagonalRun {
    std::uint64_t seed = 0;
    std::size_t depth = 0;
    /// Asc verdict of V_1..V_depth
    std::vector<Verdict> asc;
    std::vector<std::size_t> m;
    std::vector<std::size_t> fibers;
    std::vector<std::size_t> block_lengths;
    bool surjective = false;
    bool bounded = false;
    std::string error;

    bool ok() const {
        for (auto v : asc)
            if (v != Verdict::holds) return false;
        return error.empty() && surjective && bounded;
    }
};

/**
 * V_n = diagonal_transfer(tree, n) for n <= depth must be ascending; the
 * selections (V_j from the min(j, depth)-th diagonal cover) are pulled back
 * through extract_transfer, whose f must be onto with fibers no larger
 * than the blocks they come from.
 */
inline DiagonalRun run_diagonal(std::uint64_t seed, std::size_t depth, std::size_t horizon, std::size_t prefix = 20,
                                std::size_t selections = 6) {
    DiagonalRun r;
    r.seed = seed;
    r.depth = depth;
    const auto tree = seeded_interval_tree(seed);
    const Space sp{transfer_universe, horizon, true};
    CoverParams p;
    p.prefix = prefix;
    try {
        std::vector<Cover> diag;
        for (std::size_t n = 1; n <= depth; ++n) {
            diag.push_back(diagonal_transfer(tree, n, prefix));
            r.asc.push_back(classify_cover(diag.back(), CoverKind::asc, sp, p));
        }
        std::vector<PointSet> sel;
        for (std::size_t j = 1; j <= selections; ++j) sel.push_back(diag[std::min(j, depth) - 1].prefix(j + 1).back());
        auto x = extract_transfer(tree, sel, prefix);
        r.m = x.m;
        r.fibers = x.fiber_sizes();
        r.surjective = x.surjective();
        r.bounded = true;
        for (std::size_t i = 0; i < r.fibers.size(); ++i) {
            const std::size_t len = i == 0 ? 1 : (i == 1 ? x.m[0] - 1 : x.m[i - 1] - x.m[i - 2]);
            r.block_lengths.push_back(len);
            r.bounded = r.bounded && r.fibers[i] <= len;
        }
    } catch (const std::exception& e) {
        r.error = e.what();
    }
    return r;
}

}  // namespace hmt

#endif
