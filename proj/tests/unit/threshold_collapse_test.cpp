#include <gtest/gtest.h>

#include <random>

#include "hmt/collapse.hpp"
#include "hmt/threshold.hpp"
#include "oracles/brute.hpp"

using namespace hmt;

TEST(Threshold, TwoColorsWithRepeats) {
    auto r = threshold_search(2, 2, true);
    ASSERT_EQ(r.status, SearchStatus::found);
    EXPECT_EQ(r.threshold, 5U);
    EXPECT_EQ(r.avoider, (std::vector<Color>{0, 1, 2, 2, 1}));
    EXPECT_TRUE(is_avoider(r.avoider, true));
}

TEST(Threshold, SingleColor) {
    EXPECT_EQ(threshold_search(1, 2, true).threshold, 2U);
    EXPECT_EQ(threshold_search(1, 2, false).threshold, 3U);
}

TEST(Threshold, AgreesWithPlainEnumerator) {
    // The plain enumerator counts through all k^N colorings with no symmetry
    // reduction; thresholds for k <= 2 are frozen from it.
    for (std::size_t k = 1; k <= 2; ++k)
        for (bool rep : {true, false}) {
            auto r = threshold_search(k, 2, rep);
            ASSERT_EQ(r.status, SearchStatus::found);
            const int n = static_cast<int>(r.threshold);
            std::vector<int> av;
            EXPECT_TRUE(oracle::every_coloring_has_triple(static_cast<int>(k), n, rep));
            EXPECT_FALSE(oracle::every_coloring_has_triple(static_cast<int>(k), n - 1, rep, &av));
            EXPECT_TRUE(is_avoider(r.avoider, rep));
        }
    EXPECT_EQ(threshold_search(2, 2, false).threshold, 9U);
}

TEST(Threshold, ThreeColors) {
    auto r = threshold_search(3, 2, true);
    ASSERT_EQ(r.status, SearchStatus::found);
    EXPECT_EQ(r.threshold, 14U);
    EXPECT_TRUE(is_avoider(r.avoider, true));
}

TEST(Threshold, BudgetReportsLowerBound) {
    auto r = threshold_search(3, 2, true, 200, 20);
    EXPECT_EQ(r.status, SearchStatus::budget_exhausted);
    EXPECT_GE(r.lower_bound, 2U);
    auto capped = threshold_search(2, 2, false, 6);
    EXPECT_EQ(capped.status, SearchStatus::budget_exhausted);
    EXPECT_EQ(capped.lower_bound, 7U);
    EXPECT_THROW(threshold_search(2, 3, true), std::invalid_argument);
}

TEST(ProperOrCollapse, Examples) {
    FiniteSets fin;
    auto constant = make_sequence(fin, {FinSet{1}, FinSet{1}, FinSet{1}});
    auto c = proper_or_collapse(constant, 3);
    ASSERT_EQ(c.kind, Dichotomy::collapse);
    EXPECT_EQ(*c.element, FinSet{1});
    EXPECT_TRUE(verify_collapse_result(constant, c));

    auto pow2 = make_sequence(Naturals{}, {1, 2, 4, 8, 16});
    auto p = proper_or_collapse(pow2, 5);
    ASSERT_EQ(p.kind, Dichotomy::proper);
    EXPECT_EQ(p.blocks, (std::vector<Block>{Block{1}, Block{2}, Block{3}, Block{4}}));
    EXPECT_TRUE(verify_collapse_result(pow2, p));

    auto stab = make_sequence(fin, {FinSet{1}, FinSet{1, 2}, FinSet{1, 2}, FinSet{1, 2}});
    auto s = proper_or_collapse(stab, 4);
    ASSERT_EQ(s.kind, Dichotomy::collapse);
    EXPECT_EQ(*s.element, (FinSet{1, 2}));
    EXPECT_TRUE(verify_collapse_result(stab, s));
}

TEST(ProperOrCollapse, RandomCertificatesVerify) {
    std::mt19937_64 rng(5);
    FiniteSets fin;
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<FinSet> terms;
        for (int i = 0; i < 5; ++i) terms.push_back(FinSet::from_bits(1 + rng() % 63));
        auto seq = make_sequence(fin, terms);
        auto r = proper_or_collapse(seq, 5);
        EXPECT_TRUE(verify_collapse_result(seq, r));
    }
}
