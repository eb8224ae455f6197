#pragma once

#include <optional>
#include <stdexcept>
#include <utility>

#include "predcause/graph.hpp"
#include "predcause/msep.hpp"

namespace predcause {

/// First pair of variables violating the ancestral property, if any: a pair
/// carrying both a directed and a bidirected edge, or a bidirected pair where
/// one endpoint is an ancestor of the other.
inline std::optional<std::pair<VarId, VarId>> ancestral_violation(const Admg& g) {
    for (auto [a, b] : g.bidirected_edges()) {
        if (g.has_directed(a, b) || g.has_directed(b, a)) return std::make_pair(a, b);
        VarSet anc_b = g.ancestors(b);
        if (set_contains(anc_b, a)) return std::make_pair(a, b);
        VarSet anc_a = g.ancestors(a);
        if (set_contains(anc_a, b)) return std::make_pair(a, b);
    }
    return std::nullopt;
}

inline bool is_ancestral(const Admg& g) { return !ancestral_violation(g).has_value(); }

/// Maximality: every non-adjacent pair admits some separating set. Exponential
/// in the graph size; intended for validating small test fixtures only.
inline bool is_maximal(const Admg& g) {
    const VarId n = static_cast<VarId>(g.size());
    for (VarId a = 0; a < n; ++a) {
        for (VarId b = a + 1; b < n; ++b) {
            if (g.adjacent(a, b)) continue;
            VarSet rest;
            for (VarId v = 0; v < n; ++v)
                if (v != a && v != b) rest.push_back(v);
            bool separated = false;
            const std::size_t subsets = std::size_t{1} << rest.size();
            for (std::size_t mask = 0; mask < subsets && !separated; ++mask) {
                VarSet z;
                for (std::size_t i = 0; i < rest.size(); ++i)
                    if (mask & (std::size_t{1} << i)) z.push_back(rest[i]);
                separated = m_separated(g, a, z, b);
            }
            if (!separated) return false;
        }
    }
    return true;
}

/// Markov blanket of y in a maximal ancestral graph:
///   pa(y) u ch(y) u sp(y) u dis(y) u pa(dis(y)) u dis(ch(y)) u pa(dis(ch(y)))
/// minus y itself. Throws if the graph fails the ancestral check, naming the
/// offending pair. (Maximality is not checked here; see is_maximal.)
inline VarSet mag_markov_blanket(const Admg& g, VarId y) {
    if (auto bad = ancestral_violation(g)) {
        throw std::runtime_error("graph is not ancestral: offending pair (" +
                                 g.variable(bad->first).name + ", " + g.variable(bad->second).name +
                                 ")");
    }
    VarSet blanket = g.parents(y);
    blanket = set_union(blanket, g.children(y));
    blanket = set_union(blanket, g.spouses(y));

    VarSet dis_y = g.district(y);
    blanket = set_union(blanket, dis_y);
    for (VarId d : dis_y) blanket = set_union(blanket, g.parents(d));

    for (VarId c : g.children(y)) {
        VarSet dis_c = g.district(c);
        blanket = set_union(blanket, dis_c);
        for (VarId d : dis_c) blanket = set_union(blanket, g.parents(d));
    }
    set_erase(blanket, y);
    return blanket;
}

/// Markov boundary implied by the graph's m-separations: the variables w with
/// no separating set, i.e. y and w stay connected given all other variables.
/// Well-defined for every ADMG; used as ground truth for synthetic runs.
inline VarSet msep_markov_boundary(const Admg& g, VarId y) {
    VarSet out;
    const VarId n = static_cast<VarId>(g.size());
    for (VarId w = 0; w < n; ++w) {
        if (w == y) continue;
        VarSet z;
        for (VarId v = 0; v < n; ++v)
            if (v != y && v != w) z.push_back(v);
        if (!m_separated(g, y, z, w)) out.push_back(w);
    }
    return out;
}

}  // namespace predcause
