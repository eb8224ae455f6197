#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "predcause/dataset.hpp"
#include "predcause/graph.hpp"
#include "predcause/random.hpp"
#include "predcause/variables.hpp"

namespace predcause {

/// Conditional probability table. Rows are parent instantiations in mixed
/// radix with the LAST parent varying fastest; each row holds one probability
/// per child state and sums to 1.
struct Cpt {
    VarId child = -1;
    std::vector<VarId> parents;  // ordered; ids live in the augmented space
    std::vector<double> table;   // row-major, rows x child_arity
};

/// Latent-augmented realization of an ADMG: each bidirected edge becomes one
/// fresh latent with exactly two children (the edge endpoints). Augmented
/// variable ids are the observed ids 0..n-1 followed by latents n..n+m-1.
struct CausalModel {
    Admg observed;
    std::vector<Variable> latents;
    std::vector<std::pair<VarId, VarId>> latent_edges;  // bidirected pair per latent
    std::vector<Cpt> cpts;                              // indexed by augmented id

    std::size_t observed_count() const { return observed.size(); }
    std::size_t total_count() const { return observed.size() + latents.size(); }

    int arity_of(VarId augmented) const {
        const auto n = static_cast<VarId>(observed.size());
        if (augmented < n) return observed.variable(augmented).arity;
        return latents.at(static_cast<std::size_t>(augmented - n)).arity;
    }

    const std::string& name_of(VarId augmented) const {
        const auto n = static_cast<VarId>(observed.size());
        if (augmented < n) return observed.variable(augmented).name;
        return latents.at(static_cast<std::size_t>(augmented - n)).name;
    }

    // parents in the augmented DAG: directed parents plus incident latents
    std::vector<VarId> augmented_parents(VarId augmented) const {
        const auto n = static_cast<VarId>(observed.size());
        if (augmented >= n) return {};
        std::vector<VarId> out(observed.parents(augmented).begin(),
                               observed.parents(augmented).end());
        for (std::size_t u = 0; u < latent_edges.size(); ++u)
            if (latent_edges[u].first == augmented || latent_edges[u].second == augmented)
                out.push_back(n + static_cast<VarId>(u));
        return out;
    }

    // latents first, then any topological order of the observed directed part
    std::vector<VarId> sampling_order() const {
        std::vector<VarId> order;
        const auto n = static_cast<VarId>(observed.size());
        for (std::size_t u = 0; u < latents.size(); ++u) order.push_back(n + static_cast<VarId>(u));
        for (VarId v : observed.topological_order()) order.push_back(v);
        return order;
    }

    void validate() const;
};

struct LatentAugmentation {
    std::vector<Variable> latents;
    std::vector<std::pair<VarId, VarId>> latent_edges;
};

/// One fresh latent per bidirected edge, named U0, U1, ... (suffixed with '_'
/// on a name clash), in the canonical order of bidirected_edges().
inline LatentAugmentation latent_augment(const Admg& g, int latent_arity = 2) {
    if (latent_arity < 2) throw std::invalid_argument("latent arity must be >= 2");
    LatentAugmentation out;
    int counter = 0;
    for (auto edge : g.bidirected_edges()) {
        std::string name = "U" + std::to_string(counter++);
        while (g.has_variable(name)) name += "_";
        out.latents.push_back({name, latent_arity});
        out.latent_edges.push_back(edge);
    }
    return out;
}

struct ParameterizeOptions {
    double min_prob = 0.05;
    int latent_arity = 2;
};

namespace detail {

// uniform draw from the probability simplex, conditioned on every entry
// being at least min_prob (rejection); min_prob * k == 1 has a single
// feasible point, returned directly.
inline void sample_cpt_row(Rng& rng, int k, double min_prob, double* out) {
    if (min_prob * k > 1.0 + 1e-12)
        throw std::invalid_argument("min_prob " + std::to_string(min_prob) +
                                    " infeasible for arity " + std::to_string(k));
    if (min_prob * k >= 1.0 - 1e-12) {
        for (int i = 0; i < k; ++i) out[i] = 1.0 / k;
        return;
    }
    while (true) {
        double total = 0.0;
        for (int i = 0; i < k; ++i) {
            double u;
            do {
                u = rng.next_unit();
            } while (u <= 0.0);
            out[i] = -std::log(u);
            total += out[i];
        }
        bool ok = true;
        for (int i = 0; i < k; ++i) {
            out[i] /= total;
            if (out[i] < min_prob) ok = false;
        }
        if (ok) return;
    }
}

}  // namespace detail

/// Random parameterization of g: every CPT row is drawn uniformly from the
/// simplex and resampled until all entries reach min_prob. Deterministic
/// given the seed.
inline CausalModel random_parameterize(const Admg& g, std::uint64_t seed,
                                       const ParameterizeOptions& opts = {}) {
    CausalModel m;
    m.observed = g;
    auto aug = latent_augment(g, opts.latent_arity);
    m.latents = std::move(aug.latents);
    m.latent_edges = std::move(aug.latent_edges);

    Rng rng(derive_seed(seed, {0x70617261u}));
    const auto total = static_cast<VarId>(m.total_count());
    m.cpts.resize(static_cast<std::size_t>(total));
    for (VarId v = 0; v < total; ++v) {
        Cpt& cpt = m.cpts[static_cast<std::size_t>(v)];
        cpt.child = v;
        cpt.parents = m.augmented_parents(v);
        std::size_t rows = 1;
        for (VarId p : cpt.parents) rows *= static_cast<std::size_t>(m.arity_of(p));
        const int k = m.arity_of(v);
        cpt.table.resize(rows * static_cast<std::size_t>(k));
        for (std::size_t r = 0; r < rows; ++r)
            detail::sample_cpt_row(rng, k, opts.min_prob, cpt.table.data() + r * k);
    }
    return m;
}

inline void CausalModel::validate() const {
    if (cpts.size() != total_count()) throw std::invalid_argument("model: missing CPTs");
    if (latent_edges.size() != latents.size())
        throw std::invalid_argument("model: latent list does not match bidirected edges");
    auto edges = observed.bidirected_edges();
    if (edges.size() != latents.size())
        throw std::invalid_argument("model: one latent per bidirected edge required");
    for (std::size_t i = 0; i < cpts.size(); ++i) {
        const Cpt& c = cpts[i];
        if (c.child != static_cast<VarId>(i)) throw std::invalid_argument("model: CPT order");
        const int k = arity_of(c.child);
        std::size_t rows = 1;
        for (VarId p : c.parents) rows *= static_cast<std::size_t>(arity_of(p));
        if (c.table.size() != rows * static_cast<std::size_t>(k))
            throw std::invalid_argument("model: CPT size mismatch for " + name_of(c.child));
        for (std::size_t r = 0; r < rows; ++r) {
            double sum = 0.0;
            for (int s = 0; s < k; ++s) {
                double p = c.table[r * k + s];
                if (p < 0.0) throw std::invalid_argument("model: negative probability");
                sum += p;
            }
            if (std::abs(sum - 1.0) > 1e-12)
                throw std::invalid_argument("model: CPT row of " + name_of(c.child) +
                                            " sums to " + std::to_string(sum));
        }
    }
}

/// Ancestral sampling over the augmented DAG; latent columns are discarded.
inline Dataset forward_sample(const CausalModel& m, std::size_t n, std::uint64_t seed) {
    if (n < 1) throw std::invalid_argument("forward_sample: n must be >= 1");
    Rng rng(derive_seed(seed, {0x73616d70u}));
    const auto order = m.sampling_order();
    const auto total = m.total_count();
    std::vector<std::uint8_t> state(total, 0);

    Dataset d;
    d.variables = m.observed.variables();
    d.columns.assign(m.observed_count(), {});
    for (auto& col : d.columns) col.reserve(n);

    for (std::size_t row = 0; row < n; ++row) {
        for (VarId v : order) {
            const Cpt& cpt = m.cpts[static_cast<std::size_t>(v)];
            std::size_t idx = 0;
            for (VarId p : cpt.parents)
                idx = idx * static_cast<std::size_t>(m.arity_of(p)) + state[static_cast<std::size_t>(p)];
            const int k = m.arity_of(v);
            const double* row_p = cpt.table.data() + idx * static_cast<std::size_t>(k);
            const double u = rng.next_unit();
            double acc = 0.0;
            int value = k - 1;
            for (int s = 0; s < k; ++s) {
                acc += row_p[s];
                if (u < acc) {
                    value = s;
                    break;
                }
            }
            state[static_cast<std::size_t>(v)] = static_cast<std::uint8_t>(value);
        }
        for (std::size_t v = 0; v < m.observed_count(); ++v) d.columns[v].push_back(state[v]);
    }
    return d;
}

}  // namespace predcause
