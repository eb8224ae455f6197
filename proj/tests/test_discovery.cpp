#include <gtest/gtest.h>

#include "predcause/discovery.hpp"
#include "support.hpp"

using namespace predcause;
using namespace testsupport;

namespace {

VarSet features_of(const Admg& g, VarId target) {
    VarSet out;
    for (VarId v = 0; v < static_cast<VarId>(g.size()); ++v)
        if (v != target) out.push_back(v);
    return out;
}

struct OracleRun {
    OracleCiTester main_tester;
    OracleCiTester pairwise_tester;
    explicit OracleRun(const Admg& g) : main_tester(g), pairwise_tester(g) {}
};

}  // namespace

TEST(NonsymSearch, Fig2aNeighborsOfY) {
    Admg g = fig2a();
    OracleRun run(g);
    SearchOptions opts;
    DiscoveryReport r = nonsym_search(features_of(g, g.index_of("Y")), g.index_of("Y"),
                                      run.main_tester, nullptr, opts);
    EXPECT_EQ(r.causes, ids(g, {"B", "C"}));
    EXPECT_EQ(r.ci_count, run.main_tester.count());
    EXPECT_GE(r.depth_reached, 1);
}

TEST(NonsymSearch, EdgelessRemovesEverythingAtDepthZero) {
    Admg g;
    for (int i = 0; i < 5; ++i) g.add_variable("V" + std::to_string(i));
    OracleRun run(g);
    DiscoveryReport r = nonsym_search({1, 2, 3, 4}, 0, run.main_tester, nullptr, {});
    EXPECT_TRUE(r.causes.empty());
    EXPECT_EQ(r.depth_reached, 0);
    EXPECT_EQ(r.ci_count, 4);
}

TEST(NonsymSearch, EmptyFeatureSet) {
    Admg g = fig2a();
    OracleRun run(g);
    DiscoveryReport r = nonsym_search({}, g.index_of("Y"), run.main_tester, nullptr, {});
    EXPECT_TRUE(r.causes.empty());
    EXPECT_EQ(r.depth_reached, -1);
}

TEST(NonsymSearch, Fig4bRuleSkipsTestsWithoutChangingResult) {
    Admg g = fig4b_chain(6);
    const VarId y = g.index_of("Y");
    const VarSet feats = features_of(g, y);

    OracleRun plain(g);
    SearchOptions opts_plain;
    DiscoveryReport without_rule = nonsym_search(feats, y, plain.main_tester, nullptr, opts_plain);

    OracleRun dec(g);
    SearchOptions opts_dec;
    opts_dec.use_idecomp = true;
    DiscoveryReport with_rule =
        nonsym_search(feats, y, dec.main_tester, &dec.pairwise_tester, opts_dec);

    EXPECT_EQ(without_rule.causes, ids(g, {"A1", "A2", "A3", "A4", "A5", "A6"}));
    EXPECT_EQ(with_rule.causes, without_rule.causes);
    EXPECT_LT(with_rule.ci_count, without_rule.ci_count);
    EXPECT_GT(with_rule.pairwise_ci_count, 0);
    EXPECT_EQ(without_rule.pairwise_ci_count, 0);
}

TEST(NonsymSearch, Theorem4RuleInvarianceOnRandomGraphs) {
    Rng rng(101);
    for (int iter = 0; iter < 60; ++iter) {
        int n = 5 + static_cast<int>(rng.next_below(6));
        Admg g = random_admg(rng, n, 0.25, 0.15, 2 * n);
        VarId target = static_cast<VarId>(rng.next_below(static_cast<std::uint64_t>(n)));
        const VarSet feats = features_of(g, target);

        OracleRun plain(g);
        DiscoveryReport a = nonsym_search(feats, target, plain.main_tester, nullptr, {});
        OracleRun dec(g);
        SearchOptions opts;
        opts.use_idecomp = true;
        DiscoveryReport b = nonsym_search(feats, target, dec.main_tester, &dec.pairwise_tester, opts);

        ASSERT_EQ(a.causes, b.causes) << "iter " << iter;
        EXPECT_LE(b.ci_count, a.ci_count);
    }
}

TEST(AdjSearch, SymmetryCorrectionIsNoOpOnPredictiveOracles) {
    Rng rng(2023);
    for (int iter = 0; iter < 200; ++iter) {
        PredictiveGraph pg = random_predictive_graph(rng, 7, 0.3, 0.15);
        const Admg& g = pg.graph();
        const VarSet feats = pg.features();

        OracleRun r1(g);
        SearchOptions no_sym;
        no_sym.symmetry_correction = false;
        DiscoveryReport without = adj_search(feats, pg.outcome(), r1.main_tester, nullptr, no_sym);

        OracleRun r2(g);
        SearchOptions sym;
        sym.symmetry_correction = true;
        DiscoveryReport with = adj_search(feats, pg.outcome(), r2.main_tester, nullptr, sym);

        ASSERT_EQ(without.causes, with.causes) << "iter " << iter;
        ASSERT_EQ(without.causes, true_direct_causes(pg)) << "iter " << iter;
    }
}

TEST(AdjSearch, Fig3aNeighborsOfY) {
    Admg g = fig3a();
    OracleRun run(g);
    SearchOptions opts;
    opts.symmetry_correction = true;
    DiscoveryReport r =
        adj_search(features_of(g, g.index_of("Y")), g.index_of("Y"), run.main_tester, nullptr, opts);
    EXPECT_EQ(r.causes, ids(g, {"A", "D"}));
}

TEST(Hiton, Fig2aBothVariants) {
    Admg g = fig2a();
    const VarId y = g.index_of("Y");
    OracleRun r1(g), r2(g);
    EXPECT_EQ(interleaved_hiton_pc(features_of(g, y), y, r1.main_tester, nullptr, {}).causes,
              ids(g, {"B", "C"}));
    EXPECT_EQ(semi_interleaved_hiton_pc(features_of(g, y), y, r2.main_tester, nullptr, {}).causes,
              ids(g, {"B", "C"}));
}

TEST(Hiton, AllMarginallyIndependentCostsOneTestPerFeature) {
    Admg g;
    for (int i = 0; i < 7; ++i) g.add_variable("V" + std::to_string(i));
    OracleCiTester oracle(g);
    CountingCacheTester cached(oracle);
    DiscoveryReport r = interleaved_hiton_pc({1, 2, 3, 4, 5, 6}, 0, cached, nullptr, {});
    EXPECT_TRUE(r.causes.empty());
    EXPECT_EQ(r.ci_count, 6);
}

TEST(Hiton, SingleDependentFeatureNoSubsetTests) {
    Admg g;
    g.add_variable("Y");
    g.add_variable("A");
    g.add_variable("B");
    g.add_directed("A", "Y");
    OracleCiTester oracle(g);
    CountingCacheTester cached(oracle);
    DiscoveryReport r = semi_interleaved_hiton_pc({1, 2}, 0, cached, nullptr, {});
    EXPECT_EQ(r.causes, (VarSet{1}));
    EXPECT_EQ(r.ci_count, 2);  // the two marginal ranking tests only
}

TEST(Hiton, VariantsAgreeOnRandomOracleFixtures) {
    Rng rng(321);
    for (int iter = 0; iter < 200; ++iter) {
        PredictiveGraph pg = random_predictive_graph(rng, 7, 0.3, 0.15);
        const Admg& g = pg.graph();
        OracleRun r1(g), r2(g);
        DiscoveryReport inter =
            interleaved_hiton_pc(pg.features(), pg.outcome(), r1.main_tester, nullptr, {});
        DiscoveryReport semi =
            semi_interleaved_hiton_pc(pg.features(), pg.outcome(), r2.main_tester, nullptr, {});
        ASSERT_EQ(inter.causes, semi.causes) << "iter " << iter;
        ASSERT_EQ(inter.causes, true_direct_causes(pg)) << "iter " << iter;
    }
}

TEST(HitonDec, RuleNeverChangesOracleOutputAndSavesTests) {
    Rng rng(77);
    long long saved_total = 0;
    for (int iter = 0; iter < 100; ++iter) {
        PredictiveGraph pg = random_predictive_graph(rng, 8, 0.35, 0.2);
        const Admg& g = pg.graph();
        OracleRun plain(g), dec(g);
        SearchOptions opts_dec;
        opts_dec.use_idecomp = true;
        DiscoveryReport a =
            interleaved_hiton_pc(pg.features(), pg.outcome(), plain.main_tester, nullptr, {});
        DiscoveryReport b = interleaved_hiton_pc(pg.features(), pg.outcome(), dec.main_tester,
                                                 &dec.pairwise_tester, opts_dec);
        ASSERT_EQ(a.causes, b.causes) << "iter " << iter;
        ASSERT_LE(b.ci_count, a.ci_count);
        saved_total += a.ci_count - b.ci_count;
    }
    EXPECT_GT(saved_total, 0);
}

TEST(M3b, Fig3aRecoversBlanket) {
    Admg g = fig3a();
    const VarId y = g.index_of("Y");
    OracleRun run(g);
    SearchOptions opts = default_options_for("m3b");
    DiscoveryReport r = m3b(features_of(g, y), y, run.main_tester, nullptr, opts);
    EXPECT_EQ(r.causes, ids(g, {"A", "B", "C", "D", "E", "F"}));
}

TEST(M3b, MatchesClassicalBlanketOnRandomDags) {
    Rng rng(404);
    for (int iter = 0; iter < 60; ++iter) {
        int n = 6 + static_cast<int>(rng.next_below(7));  // 6..12 nodes
        Admg g = random_admg(rng, n, 0.25, 0.0, 2 * n);
        VarId target = static_cast<VarId>(rng.next_below(static_cast<std::uint64_t>(n)));
        VarSet classical = set_union(set_union(g.parents(target), g.children(target)),
                                     g.spouses(target));
        OracleRun run(g);
        SearchOptions opts = default_options_for("m3b");
        DiscoveryReport r = m3b(features_of(g, target), target, run.main_tester, nullptr, opts);
        ASSERT_EQ(r.causes, classical) << "iter " << iter << " n=" << n;
    }
}

TEST(M3b, MatchesMsepBoundaryOnRandomAdmgs) {
    Rng rng(505);
    for (int iter = 0; iter < 60; ++iter) {
        int n = 6 + static_cast<int>(rng.next_below(5));
        Admg g = random_admg(rng, n, 0.25, 0.15, 2 * n);
        VarId target = static_cast<VarId>(rng.next_below(static_cast<std::uint64_t>(n)));
        OracleRun run(g);
        SearchOptions opts = default_options_for("m3b");
        DiscoveryReport r = m3b(features_of(g, target), target, run.main_tester, nullptr, opts);
        ASSERT_EQ(r.causes, msep_markov_boundary(g, target)) << "iter " << iter;
    }
}

TEST(M3b, DecVariantAgreesAndSavesOnOracle) {
    Rng rng(606);
    for (int iter = 0; iter < 40; ++iter) {
        int n = 7 + static_cast<int>(rng.next_below(4));
        Admg g = random_admg(rng, n, 0.25, 0.12, 2 * n);
        VarId target = static_cast<VarId>(rng.next_below(static_cast<std::uint64_t>(n)));
        OracleRun plain(g), dec(g);
        SearchOptions p = default_options_for("m3b");
        SearchOptions q = default_options_for("m3b-dec");
        DiscoveryReport a = m3b(features_of(g, target), target, plain.main_tester, nullptr, p);
        DiscoveryReport b =
            m3b(features_of(g, target), target, dec.main_tester, &dec.pairwise_tester, q);
        ASSERT_EQ(a.causes, b.causes) << "iter " << iter;
        ASSERT_LE(b.ci_count, a.ci_count);
    }
}

TEST(Anytime, DepthBoundGivesSupersets) {
    Rng rng(808);
    for (int iter = 0; iter < 50; ++iter) {
        PredictiveGraph pg = random_predictive_graph(rng, 8, 0.3, 0.2);
        const Admg& g = pg.graph();
        OracleRun full(g);
        DiscoveryReport unbounded =
            nonsym_search(pg.features(), pg.outcome(), full.main_tester, nullptr, {});
        for (int k = 0; k <= 3; ++k) {
            OracleRun capped(g);
            SearchOptions opts;
            opts.max_depth = k;
            DiscoveryReport r =
                nonsym_search(pg.features(), pg.outcome(), capped.main_tester, nullptr, opts);
            ASSERT_TRUE(set_difference(unbounded.causes, r.causes).empty())
                << "depth " << k << " lost a cause";
            ASSERT_LE(r.depth_reached, k);
        }
    }
}

TEST(Report, ScoresCoverCausesAndCountsMatch) {
    Admg g = fig2a();
    const VarId y = g.index_of("Y");
    OracleCiTester oracle(g);
    CountingCacheTester cached(oracle);
    DiscoveryReport r = nonsym_search(features_of(g, y), y, cached, nullptr, {});
    EXPECT_EQ(r.causes.size(), r.pvalue_scores.size());
    for (VarId v : r.causes) {
        ASSERT_TRUE(r.pvalue_scores.count(v));
        EXPECT_EQ(r.pvalue_scores.at(v), 0.0);  // oracle: dependent tests score 0
    }
    EXPECT_EQ(r.ci_count, cached.count());
    EXPECT_GE(r.wall_time_seconds, 0.0);
}

TEST(RunAlgorithm, TagDispatchAndDefaults) {
    Admg g = fig2a();
    const VarId y = g.index_of("Y");
    for (const auto& tag : algorithm_tags()) {
        OracleRun run(g);
        SearchOptions opts = default_options_for(tag);
        DiscoveryReport r = run_algorithm(tag, features_of(g, y), y, run.main_tester,
                                          opts.use_idecomp ? &run.pairwise_tester : nullptr, opts);
        EXPECT_EQ(r.algorithm, tag);
        EXPECT_EQ(r.causes, ids(g, {"B", "C"})) << tag;
    }
    EXPECT_TRUE(default_options_for("m3b").symmetry_correction);
    EXPECT_FALSE(default_options_for("adj").symmetry_correction);
    EXPECT_TRUE(default_options_for("alg1").use_idecomp);
    EXPECT_DOUBLE_EQ(default_options_for("m3b-dec").alpha, 0.05);
    EXPECT_DOUBLE_EQ(default_options_for("si-hiton").alpha, 0.1);

    OracleRun run(g);
    EXPECT_THROW(run_algorithm("pc", {0}, y, run.main_tester, nullptr, {}), std::invalid_argument);
    SearchOptions bad;
    bad.use_idecomp = true;
    EXPECT_THROW(nonsym_search({0}, y, run.main_tester, nullptr, bad), std::invalid_argument);
}
