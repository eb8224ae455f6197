#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "predcause/graph.hpp"
#include "predcause/joint.hpp"
#include "predcause/random.hpp"

namespace predcause {

/// Erdos-Renyi style generation of the experimental graph families.
struct GenConfig {
    enum class Case { i, ii };
    Case kase = Case::i;
    int n_features = 99;      // case i: feature count; case ii: variables minus one
    int direct_causes = 7;    // case i only
    int max_degree = 6;       // degree = number of parents plus children
    double p_directed = 0.5;
    double p_bidirected = 0.1;  // 0.01 is the case-ii convention
    std::vector<int> arity_choices = {2, 3};
    std::uint64_t seed = 0;

    void validate() const {
        if (n_features < 1) throw std::invalid_argument("gen: n_features must be >= 1");
        if (kase == Case::i && (direct_causes < 1 || direct_causes > n_features))
            throw std::invalid_argument("gen: direct_causes must be in [1, n_features]");
        if (max_degree < 1) throw std::invalid_argument("gen: max_degree must be >= 1");
        if (p_directed < 0 || p_directed > 1 || p_bidirected < 0 || p_bidirected > 1)
            throw std::invalid_argument("gen: edge probabilities must be in [0, 1]");
        if (arity_choices.empty()) throw std::invalid_argument("gen: arity_choices empty");
        for (int a : arity_choices)
            if (a < 2 || a > 255) throw std::invalid_argument("gen: arity out of range");
    }
};

namespace detail {

// Random mixed graph over n named variables. Directed edges are oriented by
// a random topological order and sampled pairwise; the sampled candidates are
// then added in random order, rejecting any edge that would push an endpoint
// past the degree bound (degree counts parents and children only, so
// bidirected edges are exempt).
inline Admg random_feature_graph(Rng& rng, int n, const GenConfig& cfg,
                                 const std::string& prefix) {
    Admg g;
    for (int i = 0; i < n; ++i) {
        const int arity =
            cfg.arity_choices[static_cast<std::size_t>(rng.next_below(cfg.arity_choices.size()))];
        g.add_variable(prefix + std::to_string(i + 1), arity);
    }
    std::vector<VarId> order(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) order[static_cast<std::size_t>(i)] = i;
    rng.shuffle(order);

    std::vector<std::pair<VarId, VarId>> candidates;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (rng.next_bool(cfg.p_directed))
                candidates.emplace_back(order[static_cast<std::size_t>(i)],
                                        order[static_cast<std::size_t>(j)]);
    rng.shuffle(candidates);

    std::vector<int> degree(static_cast<std::size_t>(n), 0);
    for (auto [u, v] : candidates) {
        if (degree[static_cast<std::size_t>(u)] >= cfg.max_degree ||
            degree[static_cast<std::size_t>(v)] >= cfg.max_degree)
            continue;
        g.add_directed(u, v);
        ++degree[static_cast<std::size_t>(u)];
        ++degree[static_cast<std::size_t>(v)];
    }

    for (VarId a = 0; a < n; ++a)
        for (VarId b = a + 1; b < n; ++b)
            if (rng.next_bool(cfg.p_bidirected)) g.add_bidirected(a, b);
    return g;
}

}  // namespace detail

/// Case (i): random feature ADMG, then c features picked uniformly as the
/// parents of a fresh outcome Y. Deterministic given cfg.seed.
inline PredictiveGraph generate_case_i(const GenConfig& cfg) {
    cfg.validate();
    if (cfg.kase != GenConfig::Case::i) throw std::invalid_argument("generate_case_i: wrong case");
    Rng rng(derive_seed(cfg.seed, {0xca5e1}));
    Admg g = detail::random_feature_graph(rng, cfg.n_features, cfg, "X");
    VarId y = g.add_variable("Y", cfg.arity_choices[static_cast<std::size_t>(
                                      rng.next_below(cfg.arity_choices.size()))]);
    VarSet pool;
    for (VarId v = 0; v < y; ++v) pool.push_back(v);
    rng.shuffle(pool);
    VarSet parents(pool.begin(), pool.begin() + cfg.direct_causes);
    std::sort(parents.begin(), parents.end());
    for (VarId p : parents) g.add_directed(p, y);
    return PredictiveGraph(std::move(g), y);
}

struct CaseIiGraph {
    Admg graph;
    VarId target;
};

/// Case (ii): random ADMG over n_features + 1 variables, target chosen
/// uniformly. Deterministic given cfg.seed.
inline CaseIiGraph generate_case_ii(const GenConfig& cfg) {
    cfg.validate();
    if (cfg.kase != GenConfig::Case::ii) throw std::invalid_argument("generate_case_ii: wrong case");
    Rng rng(derive_seed(cfg.seed, {0xca5e2}));
    const int n = cfg.n_features + 1;
    Admg g = detail::random_feature_graph(rng, n, cfg, "X");
    VarId target = static_cast<VarId>(rng.next_below(static_cast<std::uint64_t>(n)));
    return {std::move(g), target};
}

/// The hard family for plain adjacency search: a bidirected chain
/// A1 <-> B1 <-> A2 <-> ... <-> An with every Ai a parent of Y.
inline PredictiveGraph fig4b_family(int n) {
    if (n < 2) throw std::invalid_argument("fig4b_family: n must be >= 2");
    Admg g;
    std::vector<VarId> a(static_cast<std::size_t>(n));
    std::vector<VarId> b(static_cast<std::size_t>(n - 1));
    for (int i = 0; i < n; ++i)
        a[static_cast<std::size_t>(i)] = g.add_variable("A" + std::to_string(i + 1));
    for (int i = 0; i + 1 < n; ++i)
        b[static_cast<std::size_t>(i)] = g.add_variable("B" + std::to_string(i + 1));
    VarId y = g.add_variable("Y");
    for (int i = 0; i + 1 < n; ++i) {
        g.add_bidirected(a[static_cast<std::size_t>(i)], b[static_cast<std::size_t>(i)]);
        g.add_bidirected(b[static_cast<std::size_t>(i)], a[static_cast<std::size_t>(i + 1)]);
    }
    for (int i = 0; i < n; ++i) g.add_directed(a[static_cast<std::size_t>(i)], y);
    return PredictiveGraph(std::move(g), y);
}

/// Empirical weak-faithfulness check on an exact joint: every parent of the
/// outcome must stay dependent on it under every conditioning set. ER
/// generation does not guarantee this, so callers flag rather than assume.
/// Exponential in the feature count; small models only.
inline bool weakly_faithful(const PredictiveGraph& pg, const JointTable& joint,
                            double tol = 1e-9) {
    const VarSet feats = pg.features();
    const VarId y = pg.outcome();
    for (VarId x : pg.graph().parents(y)) {
        VarSet others = feats;
        set_erase(others, x);
        const std::size_t total = std::size_t{1} << others.size();
        for (std::size_t mask = 0; mask < total; ++mask) {
            VarSet z;
            for (std::size_t i = 0; i < others.size(); ++i)
                if ((mask >> i) & 1) z.push_back(others[i]);
            if (exact_independent(joint, {x}, z, {y}, tol)) return false;
        }
    }
    return true;
}

}  // namespace predcause
