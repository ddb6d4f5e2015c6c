#include <gtest/gtest.h>

#include <random>

#include "hmt/search.hpp"
#include "oracles/brute.hpp"

using namespace hmt;

namespace {

SearchBudget budget(std::uint64_t n, std::size_t m, unsigned par = 1, std::uint64_t nodes = 10'000'000) {
    SearchBudget b;
    b.max_value = n;
    b.max_blocks = m;
    b.parallelism = par;
    b.node_limit = nodes;
    return b;
}

ElementSequence<Naturals> powers(std::size_t n) {
    std::vector<std::uint64_t> v;
    for (std::size_t i = 0; i < n; ++i) v.push_back(std::uint64_t{1} << i);
    return make_sequence(Naturals{}, v);
}

ElementSequence<FiniteSets> singletons() {
    return ElementSequence<FiniteSets>::from_generator(FiniteSets{},
                                                       [](std::size_t i) { return FinSet{static_cast<unsigned>(i)}; });
}

// Brute force: is there x < y, x + y <= n, with {x, y, x+y} one color?
bool oracle_pair(const std::vector<Color>& col, std::uint64_t n) {
    for (std::uint64_t x = 1; x <= n; ++x)
        for (std::uint64_t y = x + 1; x + y <= n; ++y)
            if (col[x] == col[y] && col[y] == col[x + y]) return true;
    return false;
}

}  // namespace

TEST(HindmanSearch, Examples) {
    Naturals n;
    auto parity = parity_coloring(n, 1);
    auto r = hindman_search(parity, budget(7, 2));
    ASSERT_TRUE(r.found());
    EXPECT_EQ(r.witness->terms, (std::vector<std::uint64_t>{2, 4}));
    EXPECT_TRUE(verify_hindman_witness(parity, 7, *r.witness));

    auto constant = constant_coloring<std::uint64_t>(1);
    auto r3 = hindman_search(constant, budget(7, 3));
    ASSERT_TRUE(r3.found());
    EXPECT_EQ(r3.witness->terms, (std::vector<std::uint64_t>{1, 2, 4}));
    EXPECT_EQ(r3.witness->certificate.size(), 7U);

    auto avoider = table_coloring({0, 1, 2, 2, 1}, 2);
    auto rx = hindman_search(avoider, budget(4, 2));
    EXPECT_EQ(rx.status, SearchStatus::exhausted);
    EXPECT_FALSE(oracle_pair({0, 1, 2, 2, 1}, 4));
}

TEST(HindmanSearch, BudgetExhaustionIsDistinct) {
    auto avoider = table_coloring({0, 1, 2, 2, 1}, 2);
    auto r = hindman_search(avoider, budget(4, 2, 1, 2));
    EXPECT_EQ(r.status, SearchStatus::budget_exhausted);
}

TEST(HindmanSearch, AgreesWithOracleOnRandomColorings) {
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 200; ++trial) {
        const std::uint64_t n = 4 + rng() % 8;
        std::vector<Color> col(n + 1, 0);
        for (std::uint64_t x = 1; x <= n; ++x) col[x] = 1 + rng() % 2;
        auto chi = table_coloring(col, 2);
        auto r = hindman_search(chi, budget(n, 2));
        EXPECT_EQ(r.found(), oracle_pair(col, n));
        if (r.found()) EXPECT_TRUE(verify_hindman_witness(chi, n, *r.witness));
    }
}

TEST(HindmanSearch, ParallelMatchesSequential) {
    Naturals n;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        auto chi = seeded_hash_coloring(n, 1, 2, seed);
        for (std::uint64_t limit : {50ULL, 500ULL, 100000ULL}) {
            auto a = hindman_search(chi, budget(40, 3, 1, limit));
            auto b = hindman_search(chi, budget(40, 3, 4, limit));
            EXPECT_EQ(a.status, b.status);
            EXPECT_EQ(a.nodes, b.nodes);
            EXPECT_EQ(a.best_depth, b.best_depth);
            if (a.found()) EXPECT_EQ(a.witness->terms, b.witness->terms);
        }
    }
}

TEST(MtSearch, FinConstantAndCardinality) {
    FiniteSets fin;
    auto base = singletons();
    auto constant = constant_coloring<FinSet>(2);
    auto r = mt_search(constant, base, 2, budget(6, 3));
    ASSERT_TRUE(r.found());
    EXPECT_EQ(r.witness->blocks, (std::vector<Block>{Block{1}, Block{2}, Block{3}}));
    EXPECT_TRUE(verify_mt_witness(constant, base, 2, *r.witness));

    auto card = cardinality_coloring(fin, 2);
    auto rc = mt_search(card, base, 2, budget(6, 3));
    ASSERT_TRUE(rc.found());
    EXPECT_EQ(rc.witness->color_edge, 2U);
    EXPECT_TRUE(verify_mt_witness(card, base, 2, *rc.witness));
}

TEST(MtSearch, ParitySumAgainstOracle) {
    // chi({s,t}) = parity of s + t over base (1,2,...,32). The oracle scans
    // every triple of block-ordered index sets inside {1..6} in the same
    // candidate order (max index, value, lexicographic) and takes the first
    // triple whose sum graph is monochromatic.
    Naturals n;
    auto base = powers(6);
    auto chi = parity_coloring(n, 2);
    auto r = mt_search(chi, base, 2, budget(6, 3));
    ASSERT_TRUE(r.found());
    EXPECT_TRUE(verify_mt_witness(chi, base, 2, *r.witness));

    auto subs = oracle::subsets(6);
    std::vector<long long> a{1, 2, 4, 8, 16, 32};
    auto key = [&](const oracle::Index& f) { return std::make_tuple(f.back(), oracle::sum_over(a, f), f); };
    std::sort(subs.begin(), subs.end(), [&](const auto& x, const auto& y) { return key(x) < key(y); });
    std::optional<std::vector<oracle::Index>> first;
    for (const auto& f1 : subs) {
        for (const auto& f2 : subs) {
            if (!oracle::before(f1, f2)) continue;
            for (const auto& f3 : subs) {
                if (!oracle::before(f2, f3)) continue;
                std::vector<long long> b{oracle::sum_over(a, f1), oracle::sum_over(a, f2), oracle::sum_over(a, f3)};
                auto g = oracle::sum_graph(b);
                std::set<long long> cols;
                for (auto [x, y] : g) cols.insert((x + y) % 2);
                if (cols.size() == 1) {
                    first = std::vector<oracle::Index>{f1, f2, f3};
                    break;
                }
            }
            if (first) break;
        }
        if (first) break;
    }
    ASSERT_TRUE(first);
    for (std::size_t k = 0; k < 3; ++k) {
        std::vector<std::size_t> idx((*first)[k].begin(), (*first)[k].end());
        EXPECT_EQ(r.witness->blocks[k], Block(idx));
    }
}

TEST(MtSearch, HypergraphThree) {
    FiniteSets fin;
    auto base = singletons();
    auto constant = constant_coloring<FinSet>(3);
    auto r = mt_search(constant, base, 3, budget(6, 3));
    ASSERT_TRUE(r.found());
    EXPECT_EQ(r.witness->certificate.size(), 1U);
    EXPECT_TRUE(verify_mt_witness(constant, base, 3, *r.witness));
    auto card = cardinality_coloring(fin, 3);
    auto rc = mt_search(card, base, 3, budget(6, 4));
    ASSERT_TRUE(rc.found());
    EXPECT_EQ(rc.witness->color_edge, 3U);
}

TEST(MtSearch, VertexRoutingGivesBothMonochromatic) {
    Naturals n;
    auto base = powers(10);
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
        auto cv = seeded_hash_coloring(n, 1, 2, seed);
        auto ce = seeded_hash_coloring(n, 2, 2, seed + 1000);
        MtOptions<std::uint64_t> opts;
        opts.vertex_coloring = cv;
        auto r = mt_search(ce, base, 2, budget(10, 2), opts);
        if (!r.found()) continue;
        std::string why;
        EXPECT_TRUE(verify_mt_witness(ce, base, 2, *r.witness, true, cv, &why)) << why;
    }
}

TEST(MtSearch, AdmissibleAndTargetAreRespected) {
    Naturals n;
    auto base = powers(8);
    MtOptions<std::uint64_t> opts;
    opts.admissible = [](std::size_t pos, std::uint64_t, const std::uint64_t& v) { return v >= (std::uint64_t{1} << pos); };
    opts.target = [](const std::vector<std::uint64_t>&, const std::vector<std::uint64_t>& t, Color) { return t.back() % 3 == 0; };
    auto r = mt_search(constant_coloring<std::uint64_t>(2), base, 2, budget(8, 2), opts);
    ASSERT_TRUE(r.found());
    EXPECT_GE(r.witness->terms[0], 2U);
    EXPECT_GE(r.witness->terms[1], 4U);
    EXPECT_EQ(r.witness->terms[1] % 3, 0U);
}

TEST(MtSearch, ExhaustedWhenTooDeep) {
    auto base = singletons();
    auto r = mt_search(constant_coloring<FinSet>(2), base, 2, budget(3, 4));
    EXPECT_EQ(r.status, SearchStatus::exhausted);
    EXPECT_EQ(r.best_depth, 3U);
}

TEST(MtSearch, ParallelMatchesSequential) {
    Naturals n;
    auto base = powers(9);
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        auto chi = seeded_hash_coloring(n, 2, 3, seed);
        for (std::uint64_t limit : {100ULL, 5000ULL, 1000000ULL}) {
            auto a = mt_search(chi, base, 2, budget(9, 3, 1, limit));
            auto b = mt_search(chi, base, 2, budget(9, 3, 3, limit));
            EXPECT_EQ(a.status, b.status);
            EXPECT_EQ(a.nodes, b.nodes);
            EXPECT_EQ(a.best_depth, b.best_depth);
            if (a.found()) EXPECT_EQ(a.witness->blocks, b.witness->blocks);
        }
    }
}
