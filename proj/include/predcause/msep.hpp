#pragma once

#include <stdexcept>
#include <vector>

#include "predcause/graph.hpp"
#include "predcause/variables.hpp"

namespace predcause {

struct SeparationQuery {
    VarSet x;
    VarSet z;
    VarSet y;
};

namespace detail {

// Traversal state: a variable together with the mark (arrowhead or tail) at
// its end of the edge we arrived by. A variable is a collider on a path iff
// both incident path edges carry an arrowhead at it, so reachability over
// (variable, mark) states is equivalent to checking every path while staying
// polynomial.
struct MsepScratch {
    std::vector<char> in_z, open_collider, visited_head, visited_tail, is_target;
    std::vector<int> queue;  // encoded v*2 + arrived_by_head
};

inline bool msep_connected(const Admg& g, const VarSet& xs, const VarSet& zs, const VarSet& ys,
                           MsepScratch& s) {
    const int n = static_cast<int>(g.size());
    s.in_z.assign(n, 0);
    s.open_collider.assign(n, 0);
    s.visited_head.assign(n, 0);
    s.visited_tail.assign(n, 0);
    s.is_target.assign(n, 0);
    s.queue.clear();

    for (VarId z : zs) s.in_z[z] = 1;
    // a collider is open iff it is in Z or is an ancestor of a member of Z
    for (VarId a : g.ancestral_closure(zs)) s.open_collider[a] = 1;
    for (VarId y : ys) s.is_target[y] = 1;

    auto push = [&](VarId v, bool arrived_by_head) {
        auto& seen = arrived_by_head ? s.visited_head : s.visited_tail;
        if (seen[v]) return;
        seen[v] = 1;
        s.queue.push_back(v * 2 + (arrived_by_head ? 1 : 0));
    };

    // endpoints leave along any incident edge
    for (VarId x : xs) {
        for (VarId c : g.children(x)) push(c, true);    // x -> c, head at c
        for (VarId p : g.parents(x)) push(p, false);    // p -> x traversed backwards, tail at p
        for (VarId b : g.siblings(x)) push(b, true);    // x <-> b, head at b
    }

    std::size_t head = 0;
    while (head < s.queue.size()) {
        const int code = s.queue[head++];
        const VarId v = code / 2;
        const bool arrived_by_head = (code & 1) != 0;
        if (s.is_target[v]) return true;

        // leaving along edge e: v is a collider iff we arrived by a head and
        // e carries a head at v; colliders pass iff open, non-colliders pass
        // iff v is not conditioned on.
        const bool pass_as_noncollider = !s.in_z[v];
        const bool pass_as_collider = s.open_collider[v] != 0;

        // v -> c : tail at v (never a collider step)
        if (pass_as_noncollider)
            for (VarId c : g.children(v)) push(c, true);
        // p -> v traversed v to p : head at v
        if ((arrived_by_head && pass_as_collider) || (!arrived_by_head && pass_as_noncollider))
            for (VarId p : g.parents(v)) push(p, false);
        // v <-> b : head at v
        if ((arrived_by_head && pass_as_collider) || (!arrived_by_head && pass_as_noncollider))
            for (VarId b : g.siblings(v)) push(b, true);
    }
    return false;
}

}  // namespace detail

/// m-separation: X and Y are separated by Z iff every path between them is
/// blocked (some non-collider on the path is in Z, or some collider on the
/// path is neither in Z nor an ancestor of Z).
inline bool m_separated(const Admg& g, const SeparationQuery& q) {
    if (q.x.empty() || q.y.empty()) throw std::invalid_argument("m_separated: x and y must be non-empty");
    if (!sets_disjoint(q.x, q.y) || !sets_disjoint(q.x, q.z) || !sets_disjoint(q.y, q.z))
        throw std::invalid_argument("m_separated: x, z, y must be pairwise disjoint");
    const int n = static_cast<int>(g.size());
    for (VarId v : q.x)
        if (v < 0 || v >= n) throw std::out_of_range("m_separated: bad variable id");
    for (VarId v : q.y)
        if (v < 0 || v >= n) throw std::out_of_range("m_separated: bad variable id");
    for (VarId v : q.z)
        if (v < 0 || v >= n) throw std::out_of_range("m_separated: bad variable id");

    detail::MsepScratch scratch;
    return !detail::msep_connected(g, q.x, q.z, q.y, scratch);
}

inline bool m_separated(const Admg& g, VarId x, const VarSet& z, VarId y) {
    return m_separated(g, SeparationQuery{{x}, z, {y}});
}

}  // namespace predcause
