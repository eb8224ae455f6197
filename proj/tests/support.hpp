#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "predcause/blanket.hpp"
#include "predcause/graph.hpp"
#include "predcause/msep.hpp"
#include "predcause/random.hpp"

namespace testsupport {

using predcause::Admg;
using predcause::PredictiveGraph;
using predcause::VarId;
using predcause::VarSet;

// ---------------------------------------------------------------------------
// Paper fixtures
// ---------------------------------------------------------------------------

// A -> B, B <-> C, A <-> C, B -> Y, C -> Y
inline Admg fig2a() {
    Admg g;
    g.add_variable("A");
    g.add_variable("B");
    g.add_variable("C");
    g.add_variable("Y");
    g.add_directed("A", "B");
    g.add_bidirected("B", "C");
    g.add_bidirected("A", "C");
    g.add_directed("B", "Y");
    g.add_directed("C", "Y");
    return g;
}

// A -> Y, Y -> D, C -> D, D -> H, D <-> E, E -> G, E <-> F, B -> F
inline Admg fig3a() {
    Admg g;
    for (const char* n : {"A", "B", "C", "D", "E", "F", "G", "H", "Y"}) g.add_variable(n);
    g.add_directed("A", "Y");
    g.add_directed("Y", "D");
    g.add_directed("C", "D");
    g.add_directed("D", "H");
    g.add_bidirected("D", "E");
    g.add_directed("E", "G");
    g.add_bidirected("E", "F");
    g.add_directed("B", "F");
    return g;
}

// A -> Y, Y -> C, B -> C
inline Admg fig3b() {
    Admg g;
    for (const char* n : {"A", "B", "C", "Y"}) g.add_variable(n);
    g.add_directed("A", "Y");
    g.add_directed("Y", "C");
    g.add_directed("B", "C");
    return g;
}

// features A,B,C,D with A -> Y, B -> Y, C -> Y, D -> Y, B -> C, A -> C
inline Admg fig4a() {
    Admg g;
    for (const char* n : {"A", "B", "C", "D", "Y"}) g.add_variable(n);
    g.add_directed("A", "Y");
    g.add_directed("B", "Y");
    g.add_directed("C", "Y");
    g.add_directed("D", "Y");
    g.add_directed("B", "C");
    g.add_directed("A", "C");
    return g;
}

// A -> D, S -> D, M -> D, A -> S, M -> S (outcome D)
inline Admg fig1c() {
    Admg g;
    for (const char* n : {"A", "S", "M", "D"}) g.add_variable(n);
    g.add_directed("A", "D");
    g.add_directed("S", "D");
    g.add_directed("M", "D");
    g.add_directed("A", "S");
    g.add_directed("M", "S");
    return g;
}

// Bidirected chain A1 <-> B1 <-> A2 <-> ... <-> An with Ai -> Y.
// Hand-built counterpart of synth::fig4b_family for cross-checking.
inline Admg fig4b_chain(int n) {
    Admg g;
    std::vector<VarId> a(n), b(n > 0 ? n - 1 : 0);
    for (int i = 0; i < n; ++i) a[i] = g.add_variable("A" + std::to_string(i + 1));
    for (int i = 0; i + 1 < n; ++i) b[i] = g.add_variable("B" + std::to_string(i + 1));
    VarId y = g.add_variable("Y");
    for (int i = 0; i + 1 < n; ++i) {
        g.add_bidirected(a[i], b[i]);
        g.add_bidirected(b[i], a[i + 1]);
    }
    for (int i = 0; i < n; ++i) g.add_directed(a[i], y);
    return g;
}

// ---------------------------------------------------------------------------
// Naive m-separation oracle: enumerate every simple path between the sets and
// apply the blocking definition directly. Exponential; small graphs only.
// ---------------------------------------------------------------------------

namespace naive_detail {

struct Step {
    VarId node;
    bool head_in;   // mark at node of the edge we arrived by
    bool head_out;  // mark at node of the edge we leave by (filled on extension)
};

inline bool path_active(const std::vector<Step>& path, const std::vector<char>& in_z,
                        const std::vector<char>& open_collider) {
    // interior nodes are path[1..k-2]; endpoints never block
    for (std::size_t i = 1; i + 1 < path.size(); ++i) {
        const bool collider = path[i].head_in && path[i].head_out;
        if (collider) {
            if (!open_collider[path[i].node]) return false;
        } else {
            if (in_z[path[i].node]) return false;
        }
    }
    return true;
}

}  // namespace naive_detail

inline bool naive_m_separated(const Admg& g, const VarSet& xs, const VarSet& zs, const VarSet& ys) {
    const int n = static_cast<int>(g.size());
    std::vector<char> in_z(n, 0), open_collider(n, 0), in_y(n, 0), on_path(n, 0);
    for (VarId z : zs) in_z[z] = 1;
    for (VarId a : g.ancestral_closure(zs)) open_collider[a] = 1;
    for (VarId y : ys) in_y[y] = 1;

    bool connected = false;
    std::vector<naive_detail::Step> path;

    // edges out of v: (neighbor, mark at v, mark at neighbor)
    auto edges_of = [&](VarId v) {
        std::vector<std::tuple<VarId, bool, bool>> out;
        for (VarId c : g.children(v)) out.emplace_back(c, false, true);
        for (VarId p : g.parents(v)) out.emplace_back(p, true, false);
        for (VarId s : g.siblings(v)) out.emplace_back(s, true, true);
        return out;
    };

    std::function<void(VarId)> extend = [&](VarId v) {
        if (connected) return;
        for (auto [w, mark_v, mark_w] : edges_of(v)) {
            if (on_path[w]) continue;
            if (!path.empty()) path.back().head_out = mark_v;
            path.push_back({w, mark_w, false});
            on_path[w] = 1;
            if (in_y[w]) {
                // close the path with a sentinel front for evaluation
                if (naive_detail::path_active(path, in_z, open_collider)) connected = true;
            }
            if (!connected) extend(w);
            on_path[w] = 0;
            path.pop_back();
        }
    };

    for (VarId x : xs) {
        if (connected) break;
        path.clear();
        std::fill(on_path.begin(), on_path.end(), 0);
        path.push_back({x, false, false});
        on_path[x] = 1;
        extend(x);
    }
    return !connected;
}

// ---------------------------------------------------------------------------
// Random graphs for property tests
// ---------------------------------------------------------------------------

inline Admg random_admg(predcause::Rng& rng, int n, double p_directed, double p_bidirected,
                        int max_edges = -1, double p_arity3 = 0.0) {
    Admg g;
    for (int i = 0; i < n; ++i)
        g.add_variable("V" + std::to_string(i), p_arity3 > 0.0 && rng.next_bool(p_arity3) ? 3 : 2);
    std::vector<int> order(n);
    for (int i = 0; i < n; ++i) order[i] = i;
    rng.shuffle(order);
    int edges = 0;
    auto budget = [&]() { return max_edges < 0 || edges < max_edges; };
    for (int i = 0; i < n && budget(); ++i)
        for (int j = i + 1; j < n && budget(); ++j)
            if (rng.next_bool(p_directed)) {
                g.add_directed(order[i], order[j]);
                ++edges;
            }
    for (int i = 0; i < n && budget(); ++i)
        for (int j = i + 1; j < n && budget(); ++j)
            if (rng.next_bool(p_bidirected)) {
                g.add_bidirected(i, j);
                ++edges;
            }
    return g;
}

// Random predictive graph: random ADMG over features plus an outcome fed by a
// random non-empty parent set.
inline PredictiveGraph random_predictive_graph(predcause::Rng& rng, int n_features,
                                               double p_directed, double p_bidirected) {
    Admg g = random_admg(rng, n_features, p_directed, p_bidirected);
    VarId y = g.add_variable("Y");
    int c = 1 + static_cast<int>(rng.next_below(static_cast<std::uint64_t>(n_features)));
    VarSet feats;
    for (VarId v = 0; v < n_features; ++v) feats.push_back(v);
    rng.shuffle(feats);
    feats.resize(static_cast<std::size_t>(c));
    for (VarId v : feats) g.add_directed(v, y);
    return PredictiveGraph(std::move(g), y);
}

// All minimal subsets S of V\{y} with msep(y, S, V\{y}\S); rest empty counts
// as separated. Exponential; small graphs only.
inline std::vector<VarSet> minimal_separating_sets(const Admg& g, VarId y) {
    VarSet others;
    for (VarId v = 0; v < static_cast<VarId>(g.size()); ++v)
        if (v != y) others.push_back(v);
    const std::size_t total = std::size_t{1} << others.size();
    std::vector<VarSet> satisfying;
    for (std::size_t mask = 0; mask < total; ++mask) {
        VarSet s, rest;
        for (std::size_t i = 0; i < others.size(); ++i)
            ((mask >> i) & 1 ? s : rest).push_back(others[i]);
        if (rest.empty() || predcause::m_separated(g, predcause::SeparationQuery{{y}, s, rest}))
            satisfying.push_back(s);
    }
    std::vector<VarSet> minimal;
    for (const auto& s : satisfying) {
        bool has_proper_subset = false;
        for (const auto& t : satisfying) {
            if (t.size() < s.size() && predcause::set_difference(t, s).empty()) {
                has_proper_subset = true;
                break;
            }
        }
        if (!has_proper_subset) minimal.push_back(s);
    }
    return minimal;
}

inline VarSet ids(const Admg& g, const std::vector<std::string>& names) {
    VarSet out;
    for (const auto& n : names) predcause::set_insert(out, g.index_of(n));
    return out;
}

}  // namespace testsupport
