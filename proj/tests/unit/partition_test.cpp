#include <gtest/gtest.h>

#include <set>

#include "hmt/cofinite.hpp"
#include "hmt/constrained.hpp"
#include "hmt/partition.hpp"

using namespace hmt;

namespace {

using Idx = std::vector<int>;

// nonempty subsets of {lo..hi} ordered by (max, then as bit masks)
std::vector<Idx> ordered_subsets(int lo, int hi) {
    std::vector<std::pair<std::pair<int, std::uint64_t>, Idx>> all;
    for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << hi); ++mask) {
        Idx f;
        for (int i = 1; i <= hi; ++i)
            if ((mask >> (i - 1)) & 1U) f.push_back(i);
        if (f.front() < lo) continue;
        all.push_back({{f.back(), mask}, f});
    }
    std::sort(all.begin(), all.end());
    std::vector<Idx> out;
    for (auto& [k, f] : all) out.push_back(f);
    return out;
}

// first pair of interval blocks meeting the theorem's conditions at m = 2
std::optional<std::pair<Idx, Idx>> interval_oracle(int len, int horizon, int t, bool parity) {
    for (const auto& f1 : ordered_subsets(1, len))
        for (const auto& f2 : ordered_subsets(f1.back() + 1, len)) {
            if (f2.front() < 2) continue;
            const int v1 = f1.back(), v2 = f2.back();  // V = [0..max]
            if (v2 < 2) continue;                       // x_1 = 2
            if (v1 == v2) continue;
            if (parity && (v1 % 2 != v2 % 2)) continue;
            bool cov = true;
            for (int x = 0; x < horizon; ++x) cov = cov && (int(x <= v1) + int(x <= v2) >= t);
            if (cov) return std::make_pair(f1, f2);
        }
    return std::nullopt;
}

Idx idx(const Block& b) {
    Idx out;
    for (auto i : b.indices()) out.push_back(static_cast<int>(i));
    return out;
}

Coloring<UnionElement> parity_of_max() {
    return Coloring<UnionElement>(1, 2, [](std::span<const UnionElement> x) {
        return static_cast<Color>(point_set_max(x[0].value).value_or(0) % 2 + 1);
    }, "max-parity");
}

}  // namespace

TEST(Partition, IntervalExampleMatchesOracle) {
    auto dc = interval_covers(24, 10, 16);
    PartitionRequest req;
    req.vertex = parity_of_max();
    req.edge = constant_coloring<UnionElement>(2);
    req.m = 2;
    req.target = CoverKind::lambda;
    req.params.t = 2;
    SearchBudget b;
    b.max_value = 16;
    auto r = menger_mt_search(dc, req, b);
    ASSERT_TRUE(r.found());
    auto want = interval_oracle(16, 10, 2, true);
    ASSERT_TRUE(want);
    EXPECT_EQ(idx(r.witness->blocks[0]), want->first);
    EXPECT_EQ(idx(r.witness->blocks[1]), want->second);
    // frozen: V_1 = [0..9], V_2 = [0..11]
    EXPECT_EQ(r.witness->unions[0], point_range(24, 0, 9));
    EXPECT_EQ(r.witness->unions[1], point_range(24, 0, 11));
    std::string why;
    EXPECT_TRUE(verify_partition_witness(dc, req, *r.witness, &why)) << why;
}

TEST(Partition, ConstantColoringTakesFirstAdmissibleBlocks) {
    auto dc = interval_covers(24, 10, 16);
    PartitionRequest req;
    req.edge = constant_coloring<UnionElement>(2);
    req.target = CoverKind::op;
    SearchBudget b;
    b.max_value = 16;
    auto r = menger_mt_search(dc, req, b);
    ASSERT_TRUE(r.found());
    auto want = interval_oracle(16, 10, 1, false);
    EXPECT_EQ(idx(r.witness->blocks[0]), want->first);
    EXPECT_EQ(idx(r.witness->blocks[1]), want->second);
    EXPECT_EQ(idx(r.witness->blocks[1]), (Idx{9}));
}

TEST(Partition, TooManyBlocksIsExhausted) {
    auto dc = interval_covers(24, 10, 10);
    PartitionRequest req;
    req.edge = constant_coloring<UnionElement>(2);
    req.m = 4;
    req.params.t = 4;
    SearchBudget b;
    b.max_value = 10;
    auto r = menger_mt_search(dc, req, b);
    EXPECT_EQ(r.status, SearchStatus::exhausted);
    EXPECT_GE(r.best_depth, 1u);
    EXPECT_LT(r.best_depth, 4u);
}

TEST(Partition, ValidationCatchesBrokenInstances) {
    auto dc = interval_covers(24, 10, 12);
    dc.in_cover = [](std::size_t n, std::size_t m) { return n == 1 || m % n == 0; };
    EXPECT_TRUE(dc.validate(3).has_value());
    auto dc2 = interval_covers(24, 10, 12);
    dc2.escape = [](std::size_t n) -> std::optional<std::size_t> { return n; };
    EXPECT_TRUE(dc2.validate(3).has_value());
    PartitionRequest req;
    req.edge = constant_coloring<UnionElement>(2);
    EXPECT_THROW(menger_mt_search(dc2, req, {}), std::invalid_argument);
}

TEST(Partition, VerifierRejectsTamperedWitness) {
    auto dc = interval_covers(24, 10, 16);
    PartitionRequest req;
    req.edge = constant_coloring<UnionElement>(2);
    req.target = CoverKind::op;
    SearchBudget b;
    b.max_value = 16;
    auto r = menger_mt_search(dc, req, b);
    ASSERT_TRUE(r.found());
    auto w = *r.witness;
    w.unions[1] = point_range(24, 0, 5);
    EXPECT_FALSE(verify_partition_witness(dc, req, w));
    w = *r.witness;
    w.blocks[1] = Block{1};
    EXPECT_FALSE(verify_partition_witness(dc, req, w));
}

// ---- cofinite sets ---------------------------------------------------------------

TEST(Cofinite, UnionsDecode) {
    auto e = encode_cofinite_example(8, 4);
    EXPECT_EQ(e.o(1) | e.o(3), e.o_of(FinSet::from_bits(0b101)));
    EXPECT_EQ(e.decode(e.o(1) | e.o(3)).str(), FinSet::from_bits(0b101).str());
    PointSet junk(e.universe());
    junk.set(0);
    EXPECT_THROW(e.decode(junk), std::invalid_argument);
    // F -> O_F injective on all of Fin({1..8})
    std::set<std::string> seen;
    for (std::uint64_t bits = 1; bits < 256; ++bits) {
        std::string k;
        boost::to_string(e.o_of(FinSet::from_bits(bits)), k);
        seen.insert(k);
    }
    EXPECT_EQ(seen.size(), 255u);
}

TEST(Cofinite, CoverIsPointInfiniteWithoutFiniteSubcover) {
    auto e = encode_cofinite_example(8, 4);
    CoverParams p;
    p.t = 2;
    p.prefix = 8;
    EXPECT_EQ(classify_cover(e.cover(), CoverKind::lambda, e.covers.space, p), Verdict::holds);
    EXPECT_EQ(has_finite_subcover(e.cover(), e.covers.space, 3, 8).verdict, SubcoverVerdict::none_certified);
    EXPECT_FALSE(e.covers.validate(8).has_value());
}

namespace {

// the Lambda(2) target and its partial bound, read on Fin blocks: the
// cofinite set with complement C lies in O_F iff F is not inside C
bool lambda_oracle(const std::vector<FinSet>& fs, std::size_t used, std::size_t left, unsigned hbits, std::size_t t) {
    for (std::uint64_t c = 0; c < (std::uint64_t{1} << hbits); ++c) {
        std::size_t k = 0;
        for (std::size_t i = 0; i < used; ++i) k += (fs[i].bits() & ~c) != 0 ? 1 : 0;
        if (k + left < t) return false;
    }
    return true;
}

}  // namespace

TEST(Cofinite, MengerSearchDecodesToClassicalSearch) {
    auto e = encode_cofinite_example(8, 4);
    FiniteSets fin;
    std::vector<FinSet> units;
    for (unsigned n = 1; n <= 8; ++n) units.push_back(FinSet::from_bits(std::uint64_t{1} << (n - 1)));
    auto base = make_sequence(fin, units);
    int found = 0;
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        auto chi = seeded_hash_coloring(fin, 2, 2, seed);
        PartitionRequest req;
        req.edge = transport_from_fin(chi);
        req.m = 3;
        req.params.t = 2;
        SearchBudget b;
        b.max_value = 8;
        b.node_limit = 2'000'000;
        auto rm = menger_mt_search(e.covers, req, b);

        MtOptions<FinSet> opts;
        opts.admissible = [](std::size_t n, std::uint64_t, const FinSet& f) { return f.max() > n - 1; };
        opts.target = [](const std::vector<std::uint64_t>&, const std::vector<FinSet>& fs, Color) {
            return lambda_oracle(fs, fs.size(), 0, 4, 2);
        };
        opts.feasible = [](const std::vector<std::uint64_t>&, const std::vector<FinSet>& fs, std::size_t) {
            return lambda_oracle(fs, fs.size(), 3 - fs.size(), 4, 2);
        };
        b.max_blocks = 3;
        auto rf = mt_search(chi, base, 2, b, opts);
        ASSERT_EQ(rm.status, rf.status) << seed;
        EXPECT_EQ(rm.nodes, rf.nodes) << seed;
        if (!rm.found()) continue;
        ++found;
        auto decoded = decode_witness(e, *rm.witness);
        ASSERT_EQ(decoded.size(), rf.witness->terms.size());
        for (std::size_t i = 0; i < decoded.size(); ++i) EXPECT_EQ(decoded[i], rf.witness->terms[i]) << seed;
        std::string why;
        EXPECT_TRUE(verify_partition_witness(e.covers, req, *rm.witness, &why)) << why;
        EXPECT_TRUE(verify_mt_witness(chi, base, 2, *rf.witness, true, std::nullopt, &why)) << why;
    }
    EXPECT_GT(found, 0);
}

// ---- discrete spaces -------------------------------------------------------------

TEST(Discrete, ConstantColoringOmegaWitness) {
    PartitionRequest req;
    req.edge = constant_coloring<UnionElement>(2);
    req.params.s = 2;
    SearchBudget b;
    b.max_value = 8;
    auto r = discrete_comb_search(5, 8, req, b);
    ASSERT_TRUE(r.found());
    EXPECT_EQ(idx(r.witness->blocks[0]), (Idx{1}));
    EXPECT_EQ(idx(r.witness->blocks[1]), (Idx{4}));
    EXPECT_EQ(r.witness->coverage, Verdict::holds);
}

TEST(Discrete, SeededHashAndCardinality) {
    auto dc = interval_covers(10 + 12 + 2, 10, 12);
    auto s = union_semigroup(dc);
    PartitionRequest req;
    req.edge = seeded_hash_coloring(s, 2, 2, 7);
    req.m = 3;
    SearchBudget b;
    b.max_value = 12;
    b.node_limit = 2'000'000;
    auto r = discrete_comb_search(10, 12, req, b);
    EXPECT_NE(r.status, SearchStatus::exhausted);
    if (r.found()) {
        req.target = CoverKind::omega;
        std::string why;
        EXPECT_TRUE(verify_partition_witness(dc, req, *r.witness, &why)) << why;
    }

    PartitionRequest card;
    card.edge = cardinality_coloring(s, 2);
    card.m = 3;
    auto rc = discrete_comb_search(10, 12, card, b);
    ASSERT_TRUE(rc.found());
    EXPECT_EQ(rc.witness->color_edge, Color{2});
}

// ---- constrained chains -----------------------------------------------------------

namespace {

NatSubset naturals() { return {"N", [](unsigned) { return true; }}; }
NatSubset mod4() { return {"0,1 mod 4", [](unsigned x) { return x % 4 <= 1; }}; }
NatSubset non_triples() { return {"not 0 mod 3", [](unsigned x) { return x % 3 != 0; }}; }

ChainReport check(const NatSubset& a, const FamilySequence& f, std::size_t depth, std::size_t look, unsigned span = 4) {
    auto c = build_constrained_chain(a, f, depth + look, span);
    auto sample = constrained_sample(a, f, depth + look);
    return chain_check(c, depth, sample, Membership<FinSet>([](const FinSet&) { return true; }), look);
}

}  // namespace

TEST(Constrained, ProgressionAndDensityChainsPass) {
    auto ap = check(mod4(), progression_families(mod4()), 4, 2);
    EXPECT_EQ(ap.verdict, Verdict::holds);
    auto de = check(non_triples(), density_families(non_triples(), Rational(2, 3)), 4, 2);
    EXPECT_EQ(de.verdict, Verdict::holds);
}

TEST(Constrained, SingletonFamilies) {
    // {a_n} is not inside A minus a_n, so the hypothesis fails past lo = a_n
    EXPECT_THROW(build_constrained_chain(naturals(), singleton_families(naturals()), 3), std::invalid_argument);
    auto c = build_constrained_chain(naturals(), singleton_families(naturals()), 3, 0);
    EXPECT_TRUE(c.member(2, fin_of({2, 5})));
    EXPECT_FALSE(c.member(2, fin_of({3, 5})));
    // {2} lies in A_2 but not in A_1: these A_n do not descend
    EXPECT_TRUE(c.member(2, fin_of({2})));
    EXPECT_FALSE(c.member(1, fin_of({2})));
    auto rep = check(naturals(), singleton_families(naturals()), 3, 2, 0);
    EXPECT_EQ(rep.descending, Verdict::fails);
}

TEST(Constrained, MissingHypothesisWitness) {
    NatSubset powers{"powers of 2", [](unsigned x) { return (x & (x - 1)) == 0; }};
    EXPECT_THROW(build_constrained_chain(powers, progression_families(powers), 3), std::invalid_argument);
}

TEST(Constrained, WitnessBlocksContainFamilyMembers) {
    const auto a = non_triples();
    const auto fam = density_families(a, Rational(2, 3));
    auto chain = build_constrained_chain(a, fam, 4);
    FiniteSets fin;
    std::vector<FinSet> units;
    for (std::size_t n = 1; n <= 16; ++n) units.push_back(fin_of({*a.nth(n)}));
    auto base = make_sequence(fin, units);
    MtOptions<FinSet> opts;
    opts.admissible = [&](std::size_t n, std::uint64_t, const FinSet& v) { return chain.member(n, v); };
    SearchBudget b;
    b.max_value = 16;
    b.max_blocks = 3;
    b.node_limit = 2'000'000;
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        auto r = mt_search(seeded_hash_coloring(fin, 2, 2, seed), base, 2, b, opts);
        ASSERT_TRUE(r.found()) << seed;
        for (std::size_t n = 1; n <= 3; ++n) {
            const auto& f = r.witness->terms[n - 1];
            bool has = false;
            const auto bits = f.bits();
            for (std::uint64_t sub = bits; sub != 0 && !has; sub = (sub - 1) & bits)
                has = fam.member(n, FinSet::from_bits(sub));
            EXPECT_TRUE(has) << seed << " " << n;
        }
    }
}

TEST(Constrained, UpperDensity) {
    EXPECT_EQ(upper_density([](std::uint64_t x) { return x % 2 == 0; }, 10).stage, Rational(1, 2));
    EXPECT_EQ(upper_density([](std::uint64_t x) { return x == 1; }, 10).stage, Rational(1, 10));
    EXPECT_EQ(upper_density([](std::uint64_t) { return true; }, 7).stage, Rational(1));
    auto d = upper_density([](std::uint64_t x) { return x <= 3; }, 8);
    EXPECT_EQ(d.tail_max, Rational(3, 4));
}
