#pragma once

#include <stdexcept>
#include <unordered_map>
#include <utility>
#include <vector>

#include "predcause/variables.hpp"

namespace predcause {

/// Acyclic directed mixed graph: directed edges (parent -> child) plus
/// bidirected edges (sibling <-> sibling). Directed edges may not form a
/// cycle; a pair may carry both a directed and a bidirected edge (such
/// graphs are valid ADMGs but fail the ancestral check in blanket.hpp).
///
/// Graphs are built by add_variable/add_directed/add_bidirected and are
/// meant to be treated as immutable afterwards; all queries are pure and
/// safe for concurrent readers.
class Admg {
public:
    Admg() = default;

    explicit Admg(std::vector<Variable> variables) {
        for (auto& v : variables) add_variable(v.name, v.arity);
    }

    VarId add_variable(const std::string& name, int arity = 2) {
        if (arity < 2 || arity > 255)
            throw std::invalid_argument("variable '" + name + "': arity must be in [2, 255]");
        if (index_.count(name))
            throw std::invalid_argument("duplicate variable name '" + name + "'");
        VarId id = static_cast<VarId>(vars_.size());
        vars_.push_back({name, arity});
        index_.emplace(name, id);
        parents_.emplace_back();
        children_.emplace_back();
        siblings_.emplace_back();
        return id;
    }

    std::size_t size() const { return vars_.size(); }
    const std::vector<Variable>& variables() const { return vars_; }
    const Variable& variable(VarId v) const { return vars_.at(static_cast<std::size_t>(check(v))); }

    VarId index_of(const std::string& name) const {
        auto it = index_.find(name);
        if (it == index_.end()) throw std::out_of_range("unknown variable '" + name + "'");
        return it->second;
    }
    bool has_variable(const std::string& name) const { return index_.count(name) != 0; }

    void add_directed(VarId parent, VarId child) {
        check(parent);
        check(child);
        if (parent == child) throw std::invalid_argument("self-loop on '" + vars_[parent].name + "'");
        if (has_directed(parent, child))
            throw std::invalid_argument("duplicate directed edge " + edge_name(parent, child));
        if (reaches_directed(child, parent))
            throw std::invalid_argument("directed edge " + edge_name(parent, child) + " would create a cycle");
        set_insert(children_[parent], child);
        set_insert(parents_[child], parent);
    }

    void add_bidirected(VarId a, VarId b) {
        check(a);
        check(b);
        if (a == b) throw std::invalid_argument("self-loop on '" + vars_[a].name + "'");
        if (has_bidirected(a, b))
            throw std::invalid_argument("duplicate bidirected edge " + edge_name(a, b));
        set_insert(siblings_[a], b);
        set_insert(siblings_[b], a);
    }

    void add_directed(const std::string& parent, const std::string& child) {
        add_directed(index_of(parent), index_of(child));
    }
    void add_bidirected(const std::string& a, const std::string& b) {
        add_bidirected(index_of(a), index_of(b));
    }

    bool has_directed(VarId parent, VarId child) const {
        return set_contains(children_[check(parent)], check(child));
    }
    bool has_bidirected(VarId a, VarId b) const { return set_contains(siblings_[check(a)], check(b)); }
    bool adjacent(VarId a, VarId b) const {
        return has_directed(a, b) || has_directed(b, a) || has_bidirected(a, b);
    }

    const VarSet& parents(VarId v) const { return parents_[check(v)]; }
    const VarSet& children(VarId v) const { return children_[check(v)]; }
    const VarSet& siblings(VarId v) const { return siblings_[check(v)]; }

    // variables sharing a child with v (excluding v)
    VarSet spouses(VarId v) const {
        VarSet out;
        for (VarId c : children_[check(v)])
            for (VarId p : parents_[c])
                if (p != v) set_insert(out, p);
        return out;
    }

    VarSet neighbors(VarId v) const {
        return set_union(set_union(parents(v), children(v)), siblings(v));
    }

    // strict: excludes v itself
    VarSet ancestors(VarId v) const { return reach(v, parents_); }
    VarSet descendants(VarId v) const { return reach(v, children_); }

    // all variables connected to v by a path of bidirected edges, excluding v
    VarSet district(VarId v) const { return reach(v, siblings_); }

    // zs together with every strict ancestor of a member of zs
    VarSet ancestral_closure(const VarSet& zs) const {
        std::vector<char> seen(vars_.size(), 0);
        std::vector<VarId> stack;
        for (VarId z : zs) {
            check(z);
            if (!seen[z]) {
                seen[z] = 1;
                stack.push_back(z);
            }
        }
        while (!stack.empty()) {
            VarId v = stack.back();
            stack.pop_back();
            for (VarId p : parents_[v])
                if (!seen[p]) {
                    seen[p] = 1;
                    stack.push_back(p);
                }
        }
        VarSet out;
        for (VarId v = 0; v < static_cast<VarId>(vars_.size()); ++v)
            if (seen[v]) out.push_back(v);
        return out;
    }

    std::vector<VarId> topological_order() const {
        std::vector<int> indegree(vars_.size(), 0);
        for (std::size_t v = 0; v < vars_.size(); ++v) indegree[v] = static_cast<int>(parents_[v].size());
        std::vector<VarId> order, ready;
        for (VarId v = 0; v < static_cast<VarId>(vars_.size()); ++v)
            if (indegree[v] == 0) ready.push_back(v);
        while (!ready.empty()) {
            VarId v = ready.back();
            ready.pop_back();
            order.push_back(v);
            for (VarId c : children_[v])
                if (--indegree[c] == 0) ready.push_back(c);
        }
        if (order.size() != vars_.size()) throw std::logic_error("cycle in directed edges");
        return order;
    }

    std::vector<std::pair<VarId, VarId>> directed_edges() const {
        std::vector<std::pair<VarId, VarId>> out;
        for (VarId p = 0; p < static_cast<VarId>(vars_.size()); ++p)
            for (VarId c : children_[p]) out.emplace_back(p, c);
        return out;
    }

    std::vector<std::pair<VarId, VarId>> bidirected_edges() const {
        std::vector<std::pair<VarId, VarId>> out;
        for (VarId a = 0; a < static_cast<VarId>(vars_.size()); ++a)
            for (VarId b : siblings_[a])
                if (a < b) out.emplace_back(a, b);
        return out;
    }

    VarSet all_variables() const {
        VarSet out(vars_.size());
        for (std::size_t i = 0; i < vars_.size(); ++i) out[i] = static_cast<VarId>(i);
        return out;
    }

private:
    VarId check(VarId v) const {
        if (v < 0 || static_cast<std::size_t>(v) >= vars_.size())
            throw std::out_of_range("variable id " + std::to_string(v) + " out of range");
        return v;
    }

    std::string edge_name(VarId a, VarId b) const {
        return "(" + vars_[a].name + ", " + vars_[b].name + ")";
    }

    bool reaches_directed(VarId from, VarId to) const {
        if (from == to) return true;
        std::vector<char> seen(vars_.size(), 0);
        std::vector<VarId> stack{from};
        seen[from] = 1;
        while (!stack.empty()) {
            VarId v = stack.back();
            stack.pop_back();
            for (VarId c : children_[v]) {
                if (c == to) return true;
                if (!seen[c]) {
                    seen[c] = 1;
                    stack.push_back(c);
                }
            }
        }
        return false;
    }

    VarSet reach(VarId v, const std::vector<VarSet>& links) const {
        check(v);
        std::vector<char> seen(vars_.size(), 0);
        std::vector<VarId> stack{v};
        seen[v] = 1;
        while (!stack.empty()) {
            VarId u = stack.back();
            stack.pop_back();
            for (VarId w : links[u])
                if (!seen[w]) {
                    seen[w] = 1;
                    stack.push_back(w);
                }
        }
        VarSet out;
        for (VarId u = 0; u < static_cast<VarId>(vars_.size()); ++u)
            if (seen[u] && u != v) out.push_back(u);
        return out;
    }

    std::vector<Variable> vars_;
    std::unordered_map<std::string, VarId> index_;
    std::vector<VarSet> parents_, children_, siblings_;
};

/// ADMG over features X and an outcome Y where the only edges incident to Y
/// are X -> Y: Y has no children and no bidirected edges.
class PredictiveGraph {
public:
    PredictiveGraph(Admg graph, VarId outcome) : graph_(std::move(graph)), outcome_(outcome) {
        if (outcome_ < 0 || static_cast<std::size_t>(outcome_) >= graph_.size())
            throw std::out_of_range("outcome id out of range");
        if (!graph_.children(outcome_).empty())
            throw std::invalid_argument("outcome '" + graph_.variable(outcome_).name + "' has children");
        if (!graph_.siblings(outcome_).empty())
            throw std::invalid_argument("outcome '" + graph_.variable(outcome_).name + "' has bidirected edges");
    }

    const Admg& graph() const { return graph_; }
    VarId outcome() const { return outcome_; }

    VarSet features() const {
        VarSet out;
        for (VarId v = 0; v < static_cast<VarId>(graph_.size()); ++v)
            if (v != outcome_) out.push_back(v);
        return out;
    }

private:
    Admg graph_;
    VarId outcome_;
};

// In a predictive graph the direct causes of the outcome are its parents.
inline VarSet true_direct_causes(const PredictiveGraph& pg) {
    return pg.graph().parents(pg.outcome());
}

}  // namespace predcause
