#pragma once

#include <cstdint>
#include <mutex>
#include <unordered_map>
#include <vector>

#include "predcause/citest.hpp"
#include "predcause/variables.hpp"

namespace predcause {

/// Lazily evaluated cache of pairwise marginal dependence. Under
/// canonicalness, marginal independence between variable sets reduces to
/// pairwise independence, which is what makes the I-decomposability check
/// affordable. Answers are only meaningful for canonical distributions.
class PairwiseCache {
public:
    PairwiseCache(CiTester& tester, double pairwise_alpha = 0.2)
        : tester_(tester), alpha_(pairwise_alpha) {}

    // marginally dependent at the pairwise threshold?
    bool dependent(VarId a, VarId b) {
        if (a == b) throw std::invalid_argument("pairwise_dependent: a == b");
        const std::uint64_t key = pack(a, b);
        {
            std::lock_guard<std::mutex> lock(mutex_);
            auto it = cache_.find(key);
            if (it != cache_.end()) return it->second;
        }
        CiResult r = tester_.test({a, b, {}});
        const bool dep = !r.insufficient_data && r.p_value < alpha_;
        std::lock_guard<std::mutex> lock(mutex_);
        return cache_.emplace(key, dep).first->second;
    }

    double pairwise_alpha() const { return alpha_; }
    CiTester& tester() { return tester_; }

private:
    static std::uint64_t pack(VarId a, VarId b) {
        const auto lo = static_cast<std::uint64_t>(std::min(a, b));
        const auto hi = static_cast<std::uint64_t>(std::max(a, b));
        return (hi << 32) | lo;
    }

    CiTester& tester_;
    double alpha_;
    mutable std::mutex mutex_;
    std::unordered_map<std::uint64_t, bool> cache_;
};

/// A set is I-decomposable iff it splits into two non-empty marginally
/// independent parts; under canonicalness that is exactly disconnectedness of
/// the pairwise-dependence graph, computed here by union-find over the
/// cached pairwise answers.
inline bool is_i_decomposable(PairwiseCache& cache, const VarSet& v_set) {
    const std::size_t n = v_set.size();
    if (n < 2) return false;
    std::vector<std::size_t> root(n);
    for (std::size_t i = 0; i < n; ++i) root[i] = i;
    auto find = [&](std::size_t i) {
        while (root[i] != i) {
            root[i] = root[root[i]];
            i = root[i];
        }
        return i;
    };
    std::size_t components = n;
    for (std::size_t i = 0; i < n && components > 1; ++i)
        for (std::size_t j = i + 1; j < n && components > 1; ++j)
            if (cache.dependent(v_set[i], v_set[j])) {
                const std::size_t ri = find(i), rj = find(j);
                if (ri != rj) {
                    root[ri] = rj;
                    --components;
                }
            }
    return components > 1;
}

}  // namespace predcause
