#include <gtest/gtest.h>

#include <random>
#include <set>

#include "hmt/block.hpp"
#include "hmt/semigroup.hpp"
#include "hmt/sequence.hpp"
#include "oracles/brute.hpp"

using namespace hmt;

namespace {

ElementSequence<Naturals> nat(std::vector<std::uint64_t> v) { return make_sequence(Naturals{}, std::move(v)); }

std::set<std::uint64_t> values(const std::map<Block, std::uint64_t>& m) {
    std::set<std::uint64_t> out;
    for (const auto& [b, v] : m) out.insert(v);
    return out;
}

}  // namespace

TEST(IndexedSum, Examples) {
    EXPECT_EQ(indexed_sum(nat({1, 2, 4}), Block{1, 3}), 5U);
    EXPECT_EQ(indexed_sum(nat({7}), Block{1}), 7U);
    auto fin = make_sequence(FiniteSets{}, {FinSet{1}, FinSet{2}, FinSet{3}});
    EXPECT_EQ(indexed_sum(fin, Block{1, 2, 3}), (FinSet{1, 2, 3}));
}

TEST(IndexedSum, MissingTermThrows) { EXPECT_THROW(indexed_sum(nat({1, 2}), Block{3}), std::out_of_range); }

TEST(Block, RejectsEmptyAndZero) {
    EXPECT_THROW(Block(std::vector<std::size_t>{}), std::invalid_argument);
    EXPECT_THROW((Block{0, 1}), std::invalid_argument);
}

TEST(Block, Order) {
    EXPECT_TRUE(block_less(Block{1, 2}, Block{4, 7}));
    EXPECT_FALSE(block_less(Block{1, 5}, Block{5}));
    EXPECT_FALSE(block_less(Block{3}, Block{1, 9}));
    EXPECT_THROW((BlockSequence{Block{1, 3}, Block{2}}), std::invalid_argument);
}

TEST(FsEnumerate, Examples) {
    EXPECT_EQ(values(fs_enumerate(nat({1, 2, 4}), 3)), (std::set<std::uint64_t>{1, 2, 3, 4, 5, 6, 7}));
    auto rep = fs_enumerate(nat({1, 1}), 2);
    EXPECT_EQ(rep.size(), 3U);
    EXPECT_EQ(rep.at(Block{1}), rep.at(Block{2}));
    EXPECT_EQ(rep.at((Block{1, 2})), 2U);
    auto fin = fs_enumerate(make_sequence(FiniteSets{}, {FinSet{1}, FinSet{1, 2}}), 2);
    EXPECT_EQ(fin.at(Block{1}), FinSet{1});
    EXPECT_EQ(fin.at(Block{2}), (FinSet{1, 2}));
    EXPECT_EQ(fin.at((Block{1, 2})), (FinSet{1, 2}));
    EXPECT_TRUE(fs_enumerate(nat({1}), 0).empty());
}

TEST(FsEnumerate, PowersOfTwoFillTheInterval) {
    std::vector<std::uint64_t> p;
    for (int i = 0; i < 8; ++i) p.push_back(std::uint64_t{1} << i);
    auto v = values(fs_enumerate(nat(p), 8));
    EXPECT_EQ(v.size(), 255U);
    EXPECT_EQ(*v.begin(), 1U);
    EXPECT_EQ(*v.rbegin(), 255U);
}

TEST(Sumsequence, Examples) {
    auto s = take_sumsequence(nat({1, 2, 4, 8}), BlockSequence{Block{1, 2}, Block{3, 4}});
    EXPECT_EQ(s.prefix(2), (std::vector<std::uint64_t>{3, 12}));
    auto id = take_sumsequence(nat({5, 9, 11}), BlockSequence::identity(3));
    EXPECT_EQ(id.prefix(3), (std::vector<std::uint64_t>{5, 9, 11}));
    auto fin = take_sumsequence(make_sequence(FiniteSets{}, {FinSet{1}, FinSet{2}, FinSet{3}}),
                                BlockSequence{Block{1, 2}, Block{3}});
    EXPECT_EQ(fin.at(1), (FinSet{1, 2}));
    EXPECT_EQ(fin.at(2), FinSet{3});
}

TEST(Sumsequence, CompositionIsTransitive) {
    auto base = nat({1, 2, 4, 8, 16, 32});
    BlockSequence outer{Block{1}, Block{2, 3}, Block{4}, Block{5, 6}};
    BlockSequence inner{Block{1, 2}, Block{3, 4}};
    auto twice = take_sumsequence(take_sumsequence(base, outer), inner);
    auto once = take_sumsequence(base, compose(outer, inner));
    EXPECT_EQ(twice.prefix(2), once.prefix(2));
    EXPECT_EQ(twice.provenance(), compose(outer, inner).blocks());
}

TEST(Properness, Examples) {
    EXPECT_TRUE(proper_up_to(nat({1, 2, 4, 8, 16}), 5));
    auto e = make_sequence(FiniteSets{}, {FinSet{1}, FinSet{1}});
    auto bad = is_proper_up_to(e, 2);
    ASSERT_TRUE(bad);
    EXPECT_EQ(bad->first, Block{1});
    EXPECT_EQ(bad->second, Block{2});
    auto bad3 = is_proper_up_to(nat({1, 2, 3}), 3);
    ASSERT_TRUE(bad3);
    EXPECT_EQ(bad3->first, (Block{1, 2}));
    EXPECT_EQ(bad3->second, Block{3});
}

TEST(SumHypergraph, Examples) {
    auto g = sum_hypergraph(nat({1, 2}), 2, 2);
    ASSERT_EQ(g.size(), 1U);
    EXPECT_EQ(g[0], (std::vector<std::uint64_t>{1, 2}));
    auto fs = sum_hypergraph(nat({1, 2, 4}), 3, 1);
    EXPECT_EQ(fs.size(), 7U);
    EXPECT_THROW(sum_hypergraph(nat({1, 2, 3}), 3, 2), improper_sequence_error);
}

TEST(SumHypergraph, EdgeCountMatchesOracle) {
    // Chains F < H inside {1,2,3}: {1}<{2}, {1}<{3}, {2}<{3}, {1}<{2,3}, {1,2}<{3}.
    auto g = sum_hypergraph(nat({1, 2, 4}), 3, 2);
    EXPECT_EQ(g.size(), oracle::sum_graph({1, 2, 4}).size());
    EXPECT_EQ(g.size(), 5U);
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 40; ++trial) {
        std::vector<long long> a(4);
        for (auto& x : a) x = 1 + static_cast<long long>(rng() % 20);
        if (!oracle::proper(a)) continue;
        std::vector<std::uint64_t> u(a.begin(), a.end());
        EXPECT_EQ(sum_hypergraph(nat(u), 4, 2).size(), oracle::sum_graph(a).size());
    }
}

TEST(CoreProperties, RandomSequences) {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t n = 2 + rng() % 4;
        std::vector<std::uint64_t> a(n);
        for (auto& x : a) x = 1 + rng() % 16;
        auto seq = nat(a);
        auto fs = fs_enumerate(seq, n);
        std::vector<long long> la(a.begin(), a.end());
        EXPECT_EQ(proper_up_to(seq, n), oracle::proper(la));
        // injective finite sums force properness
        if (values(fs).size() == fs.size()) {
            EXPECT_TRUE(proper_up_to(seq, n));
        }
        for (const auto& [f, vf] : fs)
            for (const auto& [h, vh] : fs)
                if (block_less(f, h)) {
                    std::vector<std::size_t> u = f.indices();
                    u.insert(u.end(), h.indices().begin(), h.indices().end());
                    EXPECT_EQ(fs.at(Block(u)), vf + vh);
                }
        if (n >= 3) {
            auto sub = take_sumsequence(seq, BlockSequence{Block{1}, Block{2, 3}});
            auto all = values(fs);
            for (auto v : values(fs_enumerate(sub, 2))) EXPECT_TRUE(all.count(v));
        }
    }
}

TEST(Semigroups, LawsAndIdempotence) {
    EXPECT_FALSE(check_semigroup_laws(Naturals{}, 12));
    EXPECT_FALSE(check_semigroup_laws(FiniteSets{}, 12));
    for (std::uint64_t r = 0; r < 64; ++r) {
        auto e = FiniteSets{}.enumerate(r);
        EXPECT_EQ(FiniteSets{}.combine(e, e), e);
    }
    std::vector<PointSet> gens;
    for (int i = 0; i < 4; ++i) {
        PointSet p(6);
        p.set(i);
        p.set(5);
        gens.push_back(p);
    }
    EXPECT_FALSE(check_semigroup_laws(IndexedUnion(gens, false), 15));
    // overlapping generators make extensional unions coincide
    gens[1].set(0);
    gens[1].set(2);
    EXPECT_TRUE(check_semigroup_laws(IndexedUnion(gens, false), 15));
}

TEST(Sequence, GeneratorIsMemoizedAndShared) {
    int calls = 0;
    auto s = ElementSequence<Naturals>::from_generator(Naturals{}, [&calls](std::size_t i) {
        ++calls;
        return std::uint64_t{1} << (i - 1);
    });
    auto copy = s;
    EXPECT_EQ(s.at(5), 16U);
    EXPECT_EQ(copy.at(3), 4U);
    EXPECT_EQ(calls, 5);
    EXPECT_FALSE(s.length());
}
