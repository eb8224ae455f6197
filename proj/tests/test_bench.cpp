#include <gtest/gtest.h>

#include "predcause/bench.hpp"
#include "support.hpp"

using namespace predcause;
using namespace testsupport;

namespace {

DiscoveryReport report_with_scores(std::vector<std::pair<VarId, double>> scored) {
    DiscoveryReport r;
    for (auto [v, p] : scored) {
        set_insert(r.causes, v);
        r.pvalue_scores[v] = p;
    }
    return r;
}

BenchConfig small_case_i() {
    BenchConfig cfg;
    cfg.kase = GenConfig::Case::i;
    cfg.sweep_parameter = "c";
    cfg.sweep = {3};
    cfg.n_samples = 2000;
    cfg.runs = 3;
    cfg.algorithms = {"adj", "alg1"};
    cfg.gen.n_features = 10;
    cfg.gen.max_degree = 4;
    cfg.gen.p_directed = 0.3;
    cfg.gen.p_bidirected = 0.1;
    cfg.seed = 11;
    cfg.threads = 2;
    return cfg;
}

}  // namespace

TEST(Truncate, PassThroughWhenWithinBudget) {
    DiscoveryReport r = report_with_scores({{1, 0.1}, {3, 0.4}, {5, 0.2}});
    EXPECT_EQ(truncate_by_pvalue(r, 3), r.causes);
    EXPECT_EQ(truncate_by_pvalue(r, 5), r.causes);
}

TEST(Truncate, KeepsLowestScores) {
    DiscoveryReport r =
        report_with_scores({{0, 0.5}, {1, 0.01}, {2, 0.6}, {3, 0.02}, {4, 0.7}});
    EXPECT_EQ(truncate_by_pvalue(r, 3), (VarSet{0, 1, 3}));
    EXPECT_EQ(truncate_by_pvalue(r, 1), (VarSet{1}));
    EXPECT_TRUE(truncate_by_pvalue(r, 0).empty());
}

TEST(Truncate, TiesBrokenByVariableIndex) {
    DiscoveryReport r = report_with_scores({{4, 0.0}, {2, 0.0}, {7, 0.0}});
    EXPECT_EQ(truncate_by_pvalue(r, 2), (VarSet{2, 4}));
}

TEST(Accuracy, Formula) {
    EXPECT_DOUBLE_EQ(accuracy({1, 2, 3}, {1, 2, 3}), 100.0);
    EXPECT_DOUBLE_EQ(accuracy({4, 5}, {1, 2}), 0.0);
    EXPECT_DOUBLE_EQ(accuracy({1, 2, 3, 4, 5, 6, 7}, {0, 1, 2, 3, 4, 5, 6, 7}), 87.5);
    EXPECT_THROW(accuracy({1}, {}), std::invalid_argument);
}

TEST(RunBench, DeterministicApartFromTiming) {
    BenchConfig cfg = small_case_i();
    cfg.runs = 1;
    auto rows1 = run_bench(cfg);
    auto rows2 = run_bench(cfg);
    ASSERT_EQ(rows1.size(), rows2.size());
    for (std::size_t i = 0; i < rows1.size(); ++i) {
        EXPECT_EQ(rows1[i].algorithm, rows2[i].algorithm);
        EXPECT_EQ(rows1[i].accuracy_mean, rows2[i].accuracy_mean);
        EXPECT_EQ(rows1[i].ci_tests_mean, rows2[i].ci_tests_mean);
    }
    // csv identical except the timing column
    auto strip_time = [](std::string csv) {
        std::istringstream is(csv);
        std::string line, out;
        while (std::getline(is, line)) {
            auto cells = split_csv_line(line);
            if (cells.size() == 7) cells[5] = "-";
            for (std::size_t i = 0; i < cells.size(); ++i) out += (i ? "," : "") + cells[i];
            out += "\n";
        }
        return out;
    };
    EXPECT_EQ(strip_time(bench_csv(rows1, cfg.kase)), strip_time(bench_csv(rows2, cfg.kase)));
}

TEST(RunBench, PairedRuleDominanceAndCsvShape) {
    BenchConfig cfg = small_case_i();
    auto rows = run_bench(cfg);
    ASSERT_EQ(rows.size(), 2u);
    const BenchRow* adj_row = nullptr;
    const BenchRow* alg1_row = nullptr;
    for (const auto& r : rows) {
        if (r.algorithm == "adj") adj_row = &r;
        if (r.algorithm == "alg1") alg1_row = &r;
    }
    ASSERT_TRUE(adj_row && alg1_row);
    ASSERT_EQ(adj_row->records.size(), alg1_row->records.size());
    for (std::size_t i = 0; i < adj_row->records.size(); ++i)
        EXPECT_LE(alg1_row->records[i].ci_tests, adj_row->records[i].ci_tests)
            << "run " << adj_row->records[i].run;

    const std::string csv = bench_csv(rows, cfg.kase);
    std::istringstream is(csv);
    std::string header;
    std::getline(is, header);
    EXPECT_EQ(header, "case,sweep_value,algorithm,run,accuracy,time_seconds,ci_tests");
    int lines = 0;
    std::string line;
    while (std::getline(is, line))
        if (!line.empty()) ++lines;
    EXPECT_EQ(lines, 2 * 3);  // algorithms x runs
}

TEST(RunBench, CaseIiBoundaryTruth) {
    BenchConfig cfg;
    cfg.kase = GenConfig::Case::ii;
    cfg.sweep_parameter = "d";
    cfg.sweep = {4};
    cfg.n_samples = 2000;
    cfg.runs = 2;
    cfg.algorithms = {"m3b-dec"};
    cfg.gen.n_features = 9;
    cfg.gen.p_directed = 0.3;
    cfg.gen.p_bidirected = 0.05;
    cfg.seed = 3;
    cfg.threads = 2;
    auto rows = run_bench(cfg);
    ASSERT_EQ(rows.size(), 1u);
    EXPECT_EQ(rows[0].runs, 2);
    for (const auto& rec : rows[0].records) {
        EXPECT_GE(rec.accuracy, 0.0);
        EXPECT_LE(rec.accuracy, 100.0);
        EXPECT_GT(rec.ci_tests, 0);
    }
}

TEST(RunBench, SummaryJsonShape) {
    BenchConfig cfg = small_case_i();
    cfg.runs = 1;
    auto rows = run_bench(cfg);
    json j = bench_summary_json(rows, cfg);
    EXPECT_EQ(j["schema_version"], 1);
    EXPECT_EQ(j["case"], "i");
    ASSERT_EQ(j["rows"].size(), 2u);
    EXPECT_TRUE(j["rows"][0].contains("accuracy_mean"));
    EXPECT_TRUE(j["rows"][0].contains("ci_tests_mean"));
}

TEST(BenchConfig, JsonParsingAndValidation) {
    json j = json::parse(R"({
      "case": "i", "sweep_parameter": "c", "sweep": [5, 7], "n_samples": 1000,
      "runs": 2, "algorithms": ["adj", "alg1", "m3b"],
      "alphas": {"main": 0.1, "pairwise": 0.2, "m3b": 0.05},
      "gen": {"n_features": 12, "max_degree": 5, "p_directed": 0.4,
              "p_bidirected": 0.05, "arity_choices": [2]},
      "statistic": "g", "seed": 9, "threads": 1
    })");
    BenchConfig cfg = bench_config_from_json(j);
    EXPECT_EQ(cfg.sweep, (std::vector<long long>{5, 7}));
    EXPECT_EQ(cfg.gen.n_features, 12);
    EXPECT_EQ(cfg.algorithms.size(), 3u);
    EXPECT_EQ(cfg.statistic, TestStatistic::g);
    EXPECT_NO_THROW(cfg.validate());

    cfg.algorithms.push_back("nope");
    EXPECT_THROW(cfg.validate(), std::invalid_argument);
    cfg.algorithms.pop_back();
    cfg.sweep_parameter = "d";
    EXPECT_THROW(cfg.validate(), std::invalid_argument);

    EXPECT_THROW(bench_config_from_json(json::parse(R"({"case":"iii"})")),
                 std::invalid_argument);
}
