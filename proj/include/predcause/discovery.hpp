#pragma once

#include <chrono>
#include <map>
#include <optional>
#include <queue>
#include <stdexcept>
#include <string>
#include <vector>

#include "predcause/citest.hpp"
#include "predcause/idecomp.hpp"
#include "predcause/variables.hpp"

namespace predcause {

struct SearchOptions {
    bool use_idecomp = false;          // the independence-rule precondition (line 7)
    bool symmetry_correction = false;  // re-run the search from each kept neighbor
    std::optional<int> max_depth;      // anytime bound on the conditioning depth
    double alpha = 0.1;
    double pairwise_alpha = 0.2;
};

struct DiscoveryReport {
    VarSet causes;
    long long ci_count = 0;           // main-tester tests executed
    long long pairwise_ci_count = 0;  // pairwise tests spent on the independence rule
    double wall_time_seconds = 0.0;
    int depth_reached = -1;
    std::map<VarId, double> pvalue_scores;  // per retained cause, max p over its tests
    std::string algorithm;
};

namespace detail {

// lexicographic k-combinations of the (sorted) pool; fn returns false to stop
template <typename Fn>
inline void for_each_combination(const VarSet& pool, int k, Fn&& fn) {
    const int n = static_cast<int>(pool.size());
    if (k > n) return;
    if (k == 0) {
        fn(VarSet{});
        return;
    }
    std::vector<int> idx(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i) idx[static_cast<std::size_t>(i)] = i;
    VarSet z(static_cast<std::size_t>(k));
    while (true) {
        for (int i = 0; i < k; ++i) z[static_cast<std::size_t>(i)] = pool[static_cast<std::size_t>(idx[static_cast<std::size_t>(i)])];
        if (!fn(z)) return;
        int i = k - 1;
        while (i >= 0 && idx[static_cast<std::size_t>(i)] == n - k + i) --i;
        if (i < 0) return;
        ++idx[static_cast<std::size_t>(i)];
        for (int j = i + 1; j < k; ++j) idx[static_cast<std::size_t>(j)] = idx[static_cast<std::size_t>(j - 1)] + 1;
    }
}

struct SearchState {
    CiTester& tester;
    PairwiseCache* pairwise = nullptr;  // set iff the independence rule is on
    const SearchOptions& opts;
    int depth_reached = -1;
    std::map<VarId, double> scores;

    CiResult run_test(VarId target, const VarSet& z, VarId w) {
        CiResult r = tester.test({target, w, z});
        auto [it, inserted] = scores.emplace(w, r.p_value);
        if (!inserted && r.p_value > it->second) it->second = r.p_value;
        return r;
    }

    bool skip_by_rule(const VarSet& z, VarId w) {
        if (!pairwise) return false;
        VarSet zw = z;
        set_insert(zw, w);
        return is_i_decomposable(*pairwise, zw);
    }

    void note_depth(int d) {
        if (d > depth_reached) depth_reached = d;
    }

    bool depth_allowed(int d) const { return !opts.max_depth || d <= *opts.max_depth; }
};

// Adjacency search core (Algorithm 1, nonsym-search): start from all
// candidates and remove W as soon as some Z with |Z| = d separates it from
// the target. W iterates over a depth-start snapshot; Z ranges over the live
// candidate set in lexicographic order.
inline VarSet nonsym_core(SearchState& st, const VarSet& features, VarId target) {
    VarSet c = features;
    int d = 0;
    while (d < static_cast<int>(c.size()) && st.depth_allowed(d)) {
        st.note_depth(d);
        const VarSet snapshot = c;
        for (VarId w : snapshot) {
            if (!set_contains(c, w)) continue;
            VarSet pool = c;
            set_erase(pool, w);
            if (static_cast<int>(pool.size()) < d) continue;
            bool removed = false;
            for_each_combination(pool, d, [&](const VarSet& z) {
                if (st.skip_by_rule(z, w)) return true;  // line 7
                if (st.run_test(target, z, w).independent) {
                    removed = true;
                    return false;
                }
                return true;
            });
            if (removed) set_erase(c, w);
        }
        ++d;
    }
    return c;
}

// nonsym-search plus symmetry correction: drop Z when the target does not
// show up in the search around Z itself.
inline VarSet adj_core(SearchState& st, const VarSet& features, VarId target) {
    VarSet neighbors = nonsym_core(st, features, target);
    if (st.opts.symmetry_correction) {
        VarSet all = features;
        set_insert(all, target);
        for (VarId z : VarSet(neighbors)) {
            VarSet pool = all;
            set_erase(pool, z);
            VarSet nz = nonsym_core(st, pool, z);
            if (!set_contains(nz, target)) set_erase(neighbors, z);
        }
    }
    return neighbors;
}

// one full elimination scan of member v against subsets of tpc \ {v};
// returns true when v was removed
inline bool hiton_eliminate(SearchState& st, VarSet& tpc, VarId target, VarId v) {
    VarSet pool = tpc;
    set_erase(pool, v);
    for (int d = 0; d <= static_cast<int>(pool.size()); ++d) {
        if (!st.depth_allowed(d)) break;
        st.note_depth(d);
        bool removed = false;
        for_each_combination(pool, d, [&](const VarSet& z) {
            if (st.skip_by_rule(z, v)) return true;
            if (st.run_test(target, z, v).independent) {
                removed = true;
                return false;
            }
            return true;
        });
        if (removed) {
            set_erase(tpc, v);
            return true;
        }
    }
    return false;
}

// open list ranked by ascending marginal p-value (dependent features only),
// ties broken by variable index
inline std::vector<VarId> hiton_ranking(SearchState& st, const VarSet& features, VarId target) {
    std::vector<std::pair<double, VarId>> ranked;
    for (VarId x : features) {
        CiResult r = st.run_test(target, {}, x);
        if (!r.independent) ranked.emplace_back(r.p_value, x);
    }
    std::sort(ranked.begin(), ranked.end());
    std::vector<VarId> out;
    out.reserve(ranked.size());
    for (auto& [p, v] : ranked) out.push_back(v);
    return out;
}

inline VarSet hiton_core(SearchState& st, const VarSet& features, VarId target, bool interleaved) {
    VarSet tpc;
    for (VarId next : hiton_ranking(st, features, target)) {
        set_insert(tpc, next);
        if (interleaved) {
            // re-examine every member against subsets of the current TPC
            const VarSet members = tpc;
            for (VarId v : members) {
                if (!set_contains(tpc, v)) continue;
                hiton_eliminate(st, tpc, target, v);
            }
        } else {
            // semi-interleaved: only the newcomer is examined now
            hiton_eliminate(st, tpc, target, next);
        }
    }
    if (!interleaved) {
        // final elimination pass over all members
        const VarSet members = tpc;
        for (VarId v : members) {
            if (!set_contains(tpc, v)) continue;
            hiton_eliminate(st, tpc, target, v);
        }
    }
    return tpc;
}

// Markov-blanket discovery in the style of the two-phase recursive search:
// phase 1 finds the target's neighbors by adjacency search; phase 2 walks
// outward over neighbors of blanket members, admitting a candidate when it
// stays dependent on the target given the bidirected-path context that led to
// it (which keeps the colliders on that path open); a final shrink keeps only
// members that remain dependent given the rest of the blanket.
inline VarSet m3b_core(SearchState& st, const VarSet& features, VarId target) {
    VarSet blanket = adj_core(st, features, target);
    std::map<VarId, VarSet> context;  // admission conditioning set per member
    VarSet all = features;
    set_insert(all, target);

    VarSet expanded, rejected;
    bool progress = true;
    while (progress) {
        progress = false;
        // walk outward: search the neighborhood of every fresh member and
        // admit candidates that stay dependent given the path context
        for (VarId v : set_difference(blanket, expanded)) {
            set_insert(expanded, v);
            VarSet pool = all;
            set_erase(pool, v);
            VarSet nearby = nonsym_core(st, pool, v);
            VarSet ctx = context[v];
            set_insert(ctx, v);
            for (VarId w : nearby) {
                if (w == target || set_contains(blanket, w)) continue;
                if (!st.run_test(target, ctx, w).independent) {
                    set_insert(blanket, w);
                    context[w] = ctx;
                    progress = true;
                } else {
                    set_insert(rejected, w);
                }
            }
        }
        // a member can serve several roles (e.g. a parent that also sits on
        // a bidirected chain), so earlier rejections are retried against the
        // grown blanket, whose colliders are now all conditioned open
        for (VarId w : set_difference(rejected, blanket)) {
            if (!st.run_test(target, blanket, w).independent) {
                set_insert(blanket, w);
                context[w] = blanket;
                set_erase(context[w], w);
                progress = true;
            }
        }
    }

    // drop members separable given the rest of the blanket; an undecidable
    // test (insufficient data for the full conditioning set) keeps the member
    for (VarId w : VarSet(blanket)) {
        VarSet z = blanket;
        set_erase(z, w);
        CiResult r = st.run_test(target, z, w);
        if (r.independent && !r.insufficient_data) set_erase(blanket, w);
    }
    return blanket;
}

template <typename Body>
inline DiscoveryReport run_with_report(const std::string& name, CiTester& tester,
                                       CiTester* pairwise_tester, const SearchOptions& opts,
                                       Body&& body) {
    if (opts.use_idecomp && !pairwise_tester)
        throw std::invalid_argument("use_idecomp requires a pairwise tester");
    std::optional<PairwiseCache> cache;
    if (opts.use_idecomp) cache.emplace(*pairwise_tester, opts.pairwise_alpha);

    SearchState st{tester, cache ? &*cache : nullptr, opts};
    const long long c0 = tester.count();
    const long long p0 = pairwise_tester ? pairwise_tester->count() : 0;
    const auto t0 = std::chrono::steady_clock::now();

    DiscoveryReport report;
    report.causes = body(st);

    const auto t1 = std::chrono::steady_clock::now();
    report.algorithm = name;
    report.ci_count = tester.count() - c0;
    report.pairwise_ci_count = pairwise_tester ? pairwise_tester->count() - p0 : 0;
    report.wall_time_seconds = std::chrono::duration<double>(t1 - t0).count();
    report.depth_reached = st.depth_reached;
    for (VarId v : report.causes) {
        auto it = st.scores.find(v);
        report.pvalue_scores[v] = it == st.scores.end() ? 0.0 : it->second;
    }
    return report;
}

}  // namespace detail

inline DiscoveryReport nonsym_search(const VarSet& features, VarId target, CiTester& tester,
                                     CiTester* pairwise_tester, const SearchOptions& opts) {
    return detail::run_with_report("nonsym", tester, pairwise_tester, opts, [&](auto& st) {
        return detail::nonsym_core(st, features, target);
    });
}

inline DiscoveryReport adj_search(const VarSet& features, VarId target, CiTester& tester,
                                  CiTester* pairwise_tester, const SearchOptions& opts) {
    return detail::run_with_report("adj", tester, pairwise_tester, opts, [&](auto& st) {
        return detail::adj_core(st, features, target);
    });
}

inline DiscoveryReport interleaved_hiton_pc(const VarSet& features, VarId target, CiTester& tester,
                                            CiTester* pairwise_tester, const SearchOptions& opts) {
    return detail::run_with_report("i-hiton", tester, pairwise_tester, opts, [&](auto& st) {
        return detail::hiton_core(st, features, target, true);
    });
}

inline DiscoveryReport semi_interleaved_hiton_pc(const VarSet& features, VarId target,
                                                 CiTester& tester, CiTester* pairwise_tester,
                                                 const SearchOptions& opts) {
    return detail::run_with_report("si-hiton", tester, pairwise_tester, opts, [&](auto& st) {
        return detail::hiton_core(st, features, target, false);
    });
}

inline DiscoveryReport m3b(const VarSet& features, VarId target, CiTester& tester,
                           CiTester* pairwise_tester, const SearchOptions& opts) {
    return detail::run_with_report("m3b", tester, pairwise_tester, opts, [&](auto& st) {
        return detail::m3b_core(st, features, target);
    });
}

// ---------------------------------------------------------------------------
// Method tags (wire/CLI values)
// ---------------------------------------------------------------------------

inline const std::vector<std::string>& algorithm_tags() {
    static const std::vector<std::string> tags = {"adj",      "alg1",        "i-hiton",
                                                  "i-hiton-dec", "si-hiton", "si-hiton-dec",
                                                  "m3b",      "m3b-dec"};
    return tags;
}

inline bool tag_uses_idecomp(const std::string& tag) {
    return tag == "alg1" || (tag.size() > 4 && tag.substr(tag.size() - 4) == "-dec");
}

inline bool tag_default_symmetry(const std::string& tag) { return tag.rfind("m3b", 0) == 0; }

/// Search options pre-filled with the conventions of the experimental
/// protocol: the m3b family runs with symmetry correction at threshold 0.05,
/// everything else without correction at 0.1; pairwise tests use 0.2.
inline SearchOptions default_options_for(const std::string& tag) {
    SearchOptions opts;
    opts.use_idecomp = tag_uses_idecomp(tag);
    opts.symmetry_correction = tag_default_symmetry(tag);
    opts.alpha = tag.rfind("m3b", 0) == 0 ? 0.05 : 0.1;
    opts.pairwise_alpha = 0.2;
    return opts;
}

inline DiscoveryReport run_algorithm(const std::string& tag, const VarSet& features, VarId target,
                                     CiTester& tester, CiTester* pairwise_tester,
                                     const SearchOptions& opts) {
    DiscoveryReport report;
    if (tag == "adj" || tag == "alg1")
        report = adj_search(features, target, tester, pairwise_tester, opts);
    else if (tag == "i-hiton" || tag == "i-hiton-dec")
        report = interleaved_hiton_pc(features, target, tester, pairwise_tester, opts);
    else if (tag == "si-hiton" || tag == "si-hiton-dec")
        report = semi_interleaved_hiton_pc(features, target, tester, pairwise_tester, opts);
    else if (tag == "m3b" || tag == "m3b-dec")
        report = m3b(features, target, tester, pairwise_tester, opts);
    else
        throw std::invalid_argument("unknown algorithm tag '" + tag + "'");
    report.algorithm = tag;
    return report;
}

}  // namespace predcause
