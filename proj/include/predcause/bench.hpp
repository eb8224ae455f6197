#pragma once

#include <atomic>
#include <cmath>
#include <iomanip>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "predcause/blanket.hpp"
#include "predcause/citest.hpp"
#include "predcause/discovery.hpp"
#include "predcause/io.hpp"
#include "predcause/model.hpp"
#include "predcause/synth.hpp"

namespace predcause {

struct BenchAlphas {
    double main = 0.1;      // adj / alg1 / hiton family
    double pairwise = 0.2;  // independence-rule pairwise tests
    double m3b = 0.05;      // m3b family
};

struct BenchConfig {
    GenConfig::Case kase = GenConfig::Case::i;
    std::string sweep_parameter = "c";  // "c" | "d" | "N"
    std::vector<long long> sweep;
    long long n_samples = 20000;  // fixed N when sweeping c or d
    int fixed_c = 8;              // fixed c when sweeping N in case i
    int fixed_d = 7;              // fixed d when sweeping N in case ii
    int runs = 10;
    std::vector<std::string> algorithms;
    BenchAlphas alphas;
    GenConfig gen;  // template; direct_causes / max_degree / seed filled per cell
    double min_prob = 0.05;
    int latent_arity = 2;
    TestStatistic statistic = TestStatistic::chi_square;
    std::uint64_t seed = 0;
    int threads = 0;  // 0: hardware concurrency

    void validate() const {
        if (runs < 1) throw std::invalid_argument("bench: runs must be >= 1");
        if (algorithms.empty()) throw std::invalid_argument("bench: no algorithms");
        if (sweep.empty()) throw std::invalid_argument("bench: empty sweep");
        if (sweep_parameter != "c" && sweep_parameter != "d" && sweep_parameter != "N")
            throw std::invalid_argument("bench: sweep_parameter must be c, d or N");
        if (kase == GenConfig::Case::i && sweep_parameter == "d")
            throw std::invalid_argument("bench: sweep over d requires case ii");
        if (kase == GenConfig::Case::ii && sweep_parameter == "c")
            throw std::invalid_argument("bench: sweep over c requires case i");
        const auto& known = algorithm_tags();
        for (const auto& tag : algorithms)
            if (std::find(known.begin(), known.end(), tag) == known.end())
                throw std::invalid_argument("bench: unknown algorithm tag '" + tag + "'");
    }
};

struct BenchRecord {
    std::string algorithm;
    long long sweep_value = 0;
    int run = 0;
    double accuracy = 0.0;
    double time_seconds = 0.0;
    long long ci_tests = 0;
    long long pairwise_ci_tests = 0;
};

struct BenchRow {
    std::string algorithm;
    long long sweep_value = 0;
    int runs = 0;
    double accuracy_mean = 0.0;
    double time_seconds_mean = 0.0;
    double ci_tests_mean = 0.0;
    double pairwise_ci_tests_mean = 0.0;
    std::vector<BenchRecord> records;
};

/// Keep the k lowest-scored causes (ties by variable index); a report that
/// does not over-return is passed through unchanged.
inline VarSet truncate_by_pvalue(const DiscoveryReport& report, std::size_t k) {
    if (report.causes.size() <= k) return report.causes;
    std::vector<std::pair<double, VarId>> scored;
    scored.reserve(report.causes.size());
    for (VarId v : report.causes) {
        auto it = report.pvalue_scores.find(v);
        scored.emplace_back(it == report.pvalue_scores.end() ? 0.0 : it->second, v);
    }
    std::sort(scored.begin(), scored.end());
    VarSet out;
    for (std::size_t i = 0; i < k; ++i) set_insert(out, scored[i].second);
    return out;
}

/// Recall against the true cause set, as a percentage. The truncation rule
/// clamps |predicted| to |truth|, which makes this the single accuracy number.
inline double accuracy(const VarSet& predicted, const VarSet& truth) {
    if (truth.empty()) throw std::invalid_argument("accuracy: empty truth set");
    return 100.0 * static_cast<double>(set_intersection(predicted, truth).size()) /
           static_cast<double>(truth.size());
}

namespace detail {

struct BenchCell {
    std::size_t sweep_index = 0;
    int run = 0;
};

struct PreparedCell {
    Admg graph;
    VarId target = -1;
    VarSet truth;
    Dataset data;
};

inline PreparedCell prepare_cell(const BenchConfig& cfg, std::size_t sweep_index, int run) {
    const long long value = cfg.sweep[sweep_index];
    GenConfig gen = cfg.gen;
    gen.kase = cfg.kase;
    gen.seed = derive_seed(cfg.seed, {1, sweep_index, static_cast<std::uint64_t>(run)});
    long long n = cfg.n_samples;
    if (cfg.sweep_parameter == "N")
        n = value;
    else if (cfg.sweep_parameter == "c")
        gen.direct_causes = static_cast<int>(value);
    else
        gen.max_degree = static_cast<int>(value);
    if (cfg.kase == GenConfig::Case::i && cfg.sweep_parameter == "N")
        gen.direct_causes = cfg.fixed_c;
    if (cfg.kase == GenConfig::Case::ii && cfg.sweep_parameter == "N")
        gen.max_degree = cfg.fixed_d;

    PreparedCell cell;
    if (cfg.kase == GenConfig::Case::i) {
        PredictiveGraph pg = generate_case_i(gen);
        cell.target = pg.outcome();
        cell.truth = true_direct_causes(pg);
        cell.graph = pg.graph();
    } else {
        CaseIiGraph cg = generate_case_ii(gen);
        cell.graph = std::move(cg.graph);
        cell.target = cg.target;
        // rotate deterministically to a target with a non-empty boundary
        const auto n_vars = static_cast<VarId>(cell.graph.size());
        for (VarId probe = 0; probe < n_vars; ++probe) {
            VarId candidate = static_cast<VarId>((cg.target + probe) % n_vars);
            cell.truth = msep_markov_boundary(cell.graph, candidate);
            if (!cell.truth.empty()) {
                cell.target = candidate;
                break;
            }
        }
        if (cell.truth.empty())
            throw std::runtime_error("bench: generated graph has no connected target");
    }

    ParameterizeOptions popts;
    popts.min_prob = cfg.min_prob;
    popts.latent_arity = cfg.latent_arity;
    CausalModel model = random_parameterize(
        cell.graph, derive_seed(cfg.seed, {2, sweep_index, static_cast<std::uint64_t>(run)}), popts);
    cell.data = forward_sample(
        model, static_cast<std::size_t>(n),
        derive_seed(cfg.seed, {3, sweep_index, static_cast<std::uint64_t>(run)}));
    return cell;
}

inline BenchRecord run_cell_algorithm(const BenchConfig& cfg, const PreparedCell& cell,
                                      long long sweep_value, int run, const std::string& tag) {
    const bool is_m3b = tag.rfind("m3b", 0) == 0;
    SearchOptions opts = default_options_for(tag);
    opts.alpha = is_m3b ? cfg.alphas.m3b : cfg.alphas.main;
    opts.pairwise_alpha = cfg.alphas.pairwise;

    DataCiTester main_inner(cell.data, opts.alpha, cfg.statistic);
    CountingCacheTester main_tester(main_inner);
    DataCiTester pairwise_inner(cell.data, opts.pairwise_alpha, cfg.statistic);
    CountingCacheTester pairwise_tester(pairwise_inner);

    VarSet features;
    for (VarId v = 0; v < static_cast<VarId>(cell.graph.size()); ++v)
        if (v != cell.target) features.push_back(v);

    DiscoveryReport report =
        run_algorithm(tag, features, cell.target, main_tester,
                      opts.use_idecomp ? &pairwise_tester : nullptr, opts);
    const VarSet predicted = truncate_by_pvalue(report, cell.truth.size());

    BenchRecord rec;
    rec.algorithm = tag;
    rec.sweep_value = sweep_value;
    rec.run = run;
    rec.accuracy = accuracy(predicted, cell.truth);
    rec.time_seconds = report.wall_time_seconds;
    rec.ci_tests = report.ci_count;
    rec.pairwise_ci_tests = report.pairwise_ci_count;
    return rec;
}

}  // namespace detail

/// Runs the full protocol: per (sweep value, run) cell, generate a model,
/// sample, run every algorithm on the same data, truncate by the p-value
/// rule and score. Cells execute in parallel with per-cell derived seeds;
/// everything except the timing column is deterministic given cfg.seed.
inline std::vector<BenchRow> run_bench(const BenchConfig& cfg) {
    cfg.validate();
    std::vector<detail::BenchCell> cells;
    for (std::size_t s = 0; s < cfg.sweep.size(); ++s)
        for (int r = 0; r < cfg.runs; ++r) cells.push_back({s, r});

    std::vector<std::vector<BenchRecord>> cell_records(cells.size());
    std::atomic<std::size_t> next{0};
    const unsigned n_threads =
        cfg.threads > 0 ? static_cast<unsigned>(cfg.threads)
                        : std::max(1u, std::thread::hardware_concurrency());

    auto worker = [&]() {
        while (true) {
            const std::size_t i = next.fetch_add(1);
            if (i >= cells.size()) return;
            const auto [sweep_index, run] = cells[i];
            detail::PreparedCell cell = detail::prepare_cell(cfg, sweep_index, run);
            for (const auto& tag : cfg.algorithms)
                cell_records[i].push_back(detail::run_cell_algorithm(
                    cfg, cell, cfg.sweep[sweep_index], run, tag));
        }
    };
    std::vector<std::thread> pool;
    for (unsigned t = 1; t < n_threads; ++t) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();

    // aggregate in canonical order: sweep value, then algorithm
    std::vector<BenchRow> rows;
    for (std::size_t s = 0; s < cfg.sweep.size(); ++s) {
        for (const auto& tag : cfg.algorithms) {
            BenchRow row;
            row.algorithm = tag;
            row.sweep_value = cfg.sweep[s];
            for (std::size_t i = 0; i < cells.size(); ++i) {
                if (cells[i].sweep_index != s) continue;
                for (const auto& rec : cell_records[i])
                    if (rec.algorithm == tag) row.records.push_back(rec);
            }
            row.runs = static_cast<int>(row.records.size());
            for (const auto& rec : row.records) {
                row.accuracy_mean += rec.accuracy;
                row.time_seconds_mean += rec.time_seconds;
                row.ci_tests_mean += static_cast<double>(rec.ci_tests);
                row.pairwise_ci_tests_mean += static_cast<double>(rec.pairwise_ci_tests);
            }
            if (row.runs > 0) {
                row.accuracy_mean /= row.runs;
                row.time_seconds_mean /= row.runs;
                row.ci_tests_mean /= row.runs;
                row.pairwise_ci_tests_mean /= row.runs;
            }
            rows.push_back(std::move(row));
        }
    }
    return rows;
}

inline std::string bench_csv(const std::vector<BenchRow>& rows, GenConfig::Case kase) {
    std::ostringstream os;
    os << "case,sweep_value,algorithm,run,accuracy,time_seconds,ci_tests\n";
    const char* case_name = kase == GenConfig::Case::i ? "i" : "ii";
    for (const auto& row : rows)
        for (const auto& rec : row.records) {
            os << case_name << ',' << rec.sweep_value << ',' << rec.algorithm << ',' << rec.run
               << ',' << std::setprecision(10) << rec.accuracy << ','
               << std::fixed << std::setprecision(6) << rec.time_seconds << ','
               << rec.ci_tests << '\n';
            os.unsetf(std::ios_base::fixed);
        }
    return os.str();
}

inline json bench_summary_json(const std::vector<BenchRow>& rows, const BenchConfig& cfg) {
    json j;
    j["schema_version"] = 1;
    j["case"] = cfg.kase == GenConfig::Case::i ? "i" : "ii";
    j["sweep_parameter"] = cfg.sweep_parameter;
    j["seed"] = cfg.seed;
    j["rows"] = json::array();
    for (const auto& row : rows) {
        j["rows"].push_back({{"algorithm", row.algorithm},
                             {"sweep_value", row.sweep_value},
                             {"runs", row.runs},
                             {"accuracy_mean", row.accuracy_mean},
                             {"time_seconds_mean", row.time_seconds_mean},
                             {"ci_tests_mean", row.ci_tests_mean},
                             {"pairwise_ci_tests_mean", row.pairwise_ci_tests_mean}});
    }
    return j;
}

// ---------------------------------------------------------------------------
// Config files (JSON, or YAML converted through the same schema)
// ---------------------------------------------------------------------------

inline BenchConfig bench_config_from_json(const json& j) {
    BenchConfig cfg;
    const std::string case_name = j.value("case", "i");
    if (case_name == "i")
        cfg.kase = GenConfig::Case::i;
    else if (case_name == "ii")
        cfg.kase = GenConfig::Case::ii;
    else
        throw std::invalid_argument("bench config: case must be 'i' or 'ii'");
    cfg.sweep_parameter = j.value("sweep_parameter", std::string("c"));
    for (const auto& v : j.value("sweep", json::array())) cfg.sweep.push_back(v.get<long long>());
    cfg.n_samples = j.value("n_samples", cfg.n_samples);
    cfg.fixed_c = j.value("fixed_c", cfg.fixed_c);
    cfg.fixed_d = j.value("fixed_d", cfg.fixed_d);
    cfg.runs = j.value("runs", cfg.runs);
    for (const auto& a : j.value("algorithms", json::array()))
        cfg.algorithms.push_back(a.get<std::string>());
    if (j.contains("alphas")) {
        cfg.alphas.main = j["alphas"].value("main", cfg.alphas.main);
        cfg.alphas.pairwise = j["alphas"].value("pairwise", cfg.alphas.pairwise);
        cfg.alphas.m3b = j["alphas"].value("m3b", cfg.alphas.m3b);
    }
    if (j.contains("gen")) {
        const json& g = j["gen"];
        cfg.gen.n_features = g.value("n_features", cfg.gen.n_features);
        cfg.gen.max_degree = g.value("max_degree", cfg.gen.max_degree);
        cfg.gen.p_directed = g.value("p_directed", cfg.gen.p_directed);
        cfg.gen.p_bidirected = g.value("p_bidirected", cfg.gen.p_bidirected);
        if (g.contains("arity_choices")) {
            cfg.gen.arity_choices.clear();
            for (const auto& a : g["arity_choices"]) cfg.gen.arity_choices.push_back(a.get<int>());
        }
    }
    cfg.min_prob = j.value("min_prob", cfg.min_prob);
    cfg.latent_arity = j.value("latent_arity", cfg.latent_arity);
    const std::string stat = j.value("statistic", std::string("chi2"));
    if (stat == "chi2")
        cfg.statistic = TestStatistic::chi_square;
    else if (stat == "g")
        cfg.statistic = TestStatistic::g;
    else
        throw std::invalid_argument("bench config: statistic must be 'chi2' or 'g'");
    cfg.seed = j.value("seed", std::uint64_t{0});
    cfg.threads = j.value("threads", 0);
    return cfg;
}

}  // namespace predcause
