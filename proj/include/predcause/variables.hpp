#pragma once

#include <algorithm>
#include <string>
#include <vector>

namespace predcause {

using VarId = int;

// A discrete variable: dense index within its graph/dataset, unique name,
// arity >= 2 states coded 0..arity-1.
struct Variable {
    std::string name;
    int arity = 2;
};

// Sorted, duplicate-free list of variable ids.
using VarSet = std::vector<VarId>;

inline bool set_contains(const VarSet& s, VarId v) {
    return std::binary_search(s.begin(), s.end(), v);
}

inline void set_insert(VarSet& s, VarId v) {
    auto it = std::lower_bound(s.begin(), s.end(), v);
    if (it == s.end() || *it != v) s.insert(it, v);
}

inline void set_erase(VarSet& s, VarId v) {
    auto it = std::lower_bound(s.begin(), s.end(), v);
    if (it != s.end() && *it == v) s.erase(it);
}

inline VarSet set_union(const VarSet& a, const VarSet& b) {
    VarSet out;
    out.reserve(a.size() + b.size());
    std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

inline VarSet set_difference(const VarSet& a, const VarSet& b) {
    VarSet out;
    out.reserve(a.size());
    std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

inline VarSet set_intersection(const VarSet& a, const VarSet& b) {
    VarSet out;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

inline bool sets_disjoint(const VarSet& a, const VarSet& b) {
    auto i = a.begin();
    auto j = b.begin();
    while (i != a.end() && j != b.end()) {
        if (*i < *j)
            ++i;
        else if (*j < *i)
            ++j;
        else
            return false;
    }
    return true;
}

}  // namespace predcause
