#ifndef HMT_GAME_HPP
#define HMT_GAME_HPP

#include <algorithm>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "hmt/cover.hpp"
#include "hmt/verdict.hpp"

namespace hmt {

enum class GameMode { g1, gfin };

inline std::string_view to_string(GameMode m) { return m == GameMode::g1 ? "G1" : "Gfin"; }

/// What Alice plays in one round: a family of items, given by membership
/// and an enumeration of its first members.
template <class Item>
struct Offer {
    std::string name;
    std::function<bool(const Item&)> contains;
    std::function<std::vector<Item>(std::size_t)> first;
};

template <class Item>
struct Round {
    Offer<Item> offer;
    std::vector<Item> picks;
};

template <class Item>
using History = std::vector<Round<Item>>;

template <class Item>
struct AliceStrategy {
    std::string name;
    std::function<Offer<Item>(const History<Item>&)> move;
};

template <class Item>
struct BobStrategy {
    std::string name;
    std::function<std::vector<Item>(const History<Item>&, const Offer<Item>&)> move;
};

template <class Item>
struct GameTranscript {
    GameMode mode = GameMode::g1;
    History<Item> rounds;
    bool legal = true;
    std::optional<std::size_t> illegal_round;
    /// 'A' or 'B' once a move was illegal.
    char offender = 0;
    std::string error;

    std::vector<Item> selections() const {
        std::vector<Item> out;
        for (const auto& r : rounds) out.insert(out.end(), r.picks.begin(), r.picks.end());
        return out;
    }
};

/**
 * Referee. Plays `rounds` rounds; in G1 Bob must pick exactly one member of
 * Alice's offer, in Gfin a finite (possibly empty) list of members. The
 * first illegal move ends the game and is recorded.
 */
template <class Item>
GameTranscript<Item> play(const AliceStrategy<Item>& alice, const BobStrategy<Item>& bob, std::size_t rounds,
                          GameMode mode) {
    GameTranscript<Item> t;
    t.mode = mode;
    for (std::size_t n = 1; n <= rounds; ++n) {
        Round<Item> r;
        auto foul = [&](char who, std::string why) {
            t.legal = false;
            t.illegal_round = n;
            t.offender = who;
            t.error = std::move(why);
        };
        try {
            r.offer = alice.move(t.rounds);
        } catch (const std::exception& e) {
            foul('A', e.what());
            return t;
        }
        try {
            r.picks = bob.move(t.rounds, r.offer);
        } catch (const std::exception& e) {
            foul('B', e.what());
            return t;
        }
        if (mode == GameMode::g1 && r.picks.size() != 1) foul('B', "G1 move must pick exactly one member");
        for (const auto& x : r.picks)
            if (t.legal && !r.offer.contains(x)) foul('B', "pick is not a member of '" + r.offer.name + "'");
        t.rounds.push_back(std::move(r));
        if (!t.legal) return t;
    }
    return t;
}

enum class Outcome { bob_wins, alice_wins, unknown };

inline std::string_view to_string(Outcome o) {
    switch (o) {
        case Outcome::bob_wins: return "bob-wins";
        case Outcome::alice_wins: return "alice-wins";
        case Outcome::unknown: return "unknown";
    }
    return "?";
}

/// Bob wins when his selections satisfy the target. Illegal moves lose for
/// whoever made them; an empty selection loses for Bob.
template <class Item>
Outcome judge(const GameTranscript<Item>& t, const std::function<Verdict(const std::vector<Item>&)>& target) {
    if (!t.legal) return t.offender == 'A' ? Outcome::bob_wins : Outcome::alice_wins;
    auto sel = t.selections();
    if (sel.empty()) return Outcome::alice_wins;
    switch (target(sel)) {
        case Verdict::holds: return Outcome::bob_wins;
        case Verdict::fails: return Outcome::alice_wins;
        case Verdict::unknown: return Outcome::unknown;
    }
    return Outcome::unknown;
}

// ---- sets of naturals, for games over a filter's dual --------------------

using NatSet = std::function<bool(std::uint64_t)>;

/**
 * A filter generated by a descending sequence B_1 ⊇ B_2 ⊇ ... of sets of
 * naturals, each given by next(n, x) = least element of B_n that is >= x.
 * A set is in the dual (positive) family iff it meets every B_n.
 */
struct GeneratedFilter {
    std::string name;
    std::function<std::uint64_t(std::size_t, std::uint64_t)> next;

    bool base(std::size_t n, std::uint64_t x) const { return next(n, x) == x; }
};

inline GeneratedFilter cofinite_filter() {
    return {"cofinite", [](std::size_t n, std::uint64_t x) { return std::max<std::uint64_t>(x, n); }};
}

/// B_n = multiples of 2^n.
inline GeneratedFilter dyadic_filter() {
    return {"dyadic", [](std::size_t n, std::uint64_t x) {
                const std::uint64_t step = std::uint64_t{1} << std::min<std::size_t>(n, 40);
                return (x + step - 1) / step * step;
            }};
}

/// B_n = multiples of 3 that are >= 3n.
inline GeneratedFilter triadic_tail_filter() {
    return {"triadic-tail", [](std::size_t n, std::uint64_t x) {
                x = std::max<std::uint64_t>(x, 3 * n);
                return (x + 2) / 3 * 3;
            }};
}

inline Offer<std::uint64_t> nat_offer(std::string name, NatSet a) {
    Offer<std::uint64_t> o;
    o.name = std::move(name);
    o.contains = a;
    o.first = [a](std::size_t k) {
        std::vector<std::uint64_t> out;
        for (std::uint64_t x = 1; out.size() < k && x < (std::uint64_t{1} << 40); ++x)
            if (a(x)) out.push_back(x);
        return out;
    };
    return o;
}

/**
 * Bob's winning strategy in G1(F+, F+) for a countably generated filter:
 * in round n pick the least b_n in A_n ∩ B_n. Throws if none is found
 * below `bound`.
 */
inline BobStrategy<std::uint64_t> filter_bob(const GeneratedFilter& f, std::uint64_t steps = 1000000) {
    return {"least-in-base(" + f.name + ")",
            [f, steps](const History<std::uint64_t>& h, const Offer<std::uint64_t>& o) {
                const std::size_t n = h.size() + 1;
                std::uint64_t x = f.next(n, 1);
                for (std::uint64_t i = 0; i < steps; ++i, x = f.next(n, x + 1))
                    if (o.contains(x)) return std::vector<std::uint64_t>{x};
                throw std::runtime_error("no member of A_n ∩ B_n within the scan bound");
            }};
}

/**
 * Alice strategy number k against a generated filter. Round n offers the
 * increasing sequence a_1 < a_2 < ... with a_i in B_{r*i}, started above a
 * history-dependent offset; meeting every B_j puts it in the dual family.
 */
inline AliceStrategy<std::uint64_t> scripted_filter_alice(const GeneratedFilter& f, unsigned k) {
    const std::uint64_t stride = 1 + k % 3, gap = 1 + k % 5, shift = (k / 3) % 4;
    const bool follow = k % 2 == 1;
    return {"scripted-" + std::to_string(k), [=](const History<std::uint64_t>& h) {
                const std::uint64_t n = h.size() + 1;
                const std::uint64_t last = h.empty() || !follow ? 0 : h.back().picks.front();
                const std::uint64_t start = shift * n + last + 1;
                auto contains = [=](std::uint64_t x) {
                    std::uint64_t a = start;
                    for (std::uint64_t i = 1;; ++i) {
                        a = f.next(stride * i, a + (i > 1 ? gap : 0));
                        if (a >= x) return a == x;
                    }
                };
                return nat_offer("A" + std::to_string(n) + "/" + std::to_string(k), contains);
            }};
}

/// Bob wins at horizon h if his picks meet B_1..B_h.
inline std::function<Verdict(const std::vector<std::uint64_t>&)> filter_target(const GeneratedFilter& f, std::size_t h) {
    return [f, h](const std::vector<std::uint64_t>& picks) {
        for (std::size_t n = 1; n <= h; ++n) {
            bool hit = false;
            for (auto b : picks) hit = hit || f.base(n, b);
            if (!hit) return Verdict::fails;
        }
        return Verdict::holds;
    };
}

// ---- cover games ----------------------------------------------------------

inline Offer<PointSet> cover_offer(const Cover& c, std::size_t prefix) {
    Offer<PointSet> o;
    o.name = c.name;
    auto sets = std::make_shared<const std::vector<PointSet>>(c.prefix(prefix));
    o.contains = [sets](const PointSet& x) {
        for (const auto& s : *sets)
            if (s == x) return true;
        return false;
    };
    o.first = [sets](std::size_t k) {
        return std::vector<PointSet>(sets->begin(), sets->begin() + std::min(k, sets->size()));
    };
    return o;
}

inline std::function<Verdict(const std::vector<PointSet>&)> cover_target(CoverKind kind, const Space& space,
                                                                         const CoverParams& p) {
    return [=](const std::vector<PointSet>& picks) { return classify_sets(drop_duplicates(picks), kind, space, p, true); };
}

}  // namespace hmt

#endif
