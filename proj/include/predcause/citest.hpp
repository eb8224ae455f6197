#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <unordered_map>
#include <vector>

#include "predcause/dataset.hpp"
#include "predcause/graph.hpp"
#include "predcause/joint.hpp"
#include "predcause/msep.hpp"
#include "predcause/special_functions.hpp"
#include "predcause/variables.hpp"

namespace predcause {

struct CiQuery {
    VarId x = -1;
    VarId y = -1;
    VarSet z;
};

struct CiResult {
    bool independent = false;
    double p_value = 0.0;
    double statistic = 0.0;
    int dof = 0;
    bool insufficient_data = false;
};

/// Uniform interface answering "is X independent of Y given Z?" with a
/// p-value. Implementations must be deterministic; count() is the number of
/// tests actually executed.
class CiTester {
public:
    virtual ~CiTester() = default;
    virtual CiResult test(const CiQuery& q) = 0;
    virtual long long count() const = 0;
    virtual double alpha() const = 0;
};

struct DataTestOptions {
    // declare the test undecidable (and report independence) when
    // rows < rows_per_dof * dof; the standard constraint-based convention
    double rows_per_dof = 10.0;
};

namespace detail {

inline void check_query(const Dataset& d, const CiQuery& q) {
    const auto n = static_cast<VarId>(d.variables.size());
    if (q.x < 0 || q.x >= n || q.y < 0 || q.y >= n)
        throw std::out_of_range("ci test: variable id out of range");
    if (q.x == q.y) throw std::invalid_argument("ci test: x == y");
    for (VarId z : q.z) {
        if (z < 0 || z >= n) throw std::out_of_range("ci test: conditioning id out of range");
        if (z == q.x || z == q.y)
            throw std::invalid_argument("ci test: conditioning set overlaps x or y");
    }
}

// Stratified contingency statistic. For every instantiation of Z builds the
// x-by-y table, drops all-zero rows/columns, and accumulates
//   pearson: sum (obs - exp)^2 / exp        g: 2 * sum obs * ln(obs / exp)
// with per-stratum dof (r'-1)(c'-1). Strata with zero total are skipped.
template <bool kGStatistic>
inline CiResult contingency_test(const Dataset& d, const CiQuery& raw, double alpha,
                                 const DataTestOptions& opts) {
    check_query(d, raw);
    // normalize so that test(x, z, y) and test(y, z, x) are bit-identical
    CiQuery q = raw;
    if (q.x > q.y) std::swap(q.x, q.y);
    std::sort(q.z.begin(), q.z.end());
    const std::size_t rows = d.rows();
    const auto rx = static_cast<std::size_t>(d.variables[static_cast<std::size_t>(q.x)].arity);
    const auto ry = static_cast<std::size_t>(d.variables[static_cast<std::size_t>(q.y)].arity);

    // saturating stratum count; oversized conditioning sets fall back to
    // keying strata by the raw code tuple, so any |Z| is handled exactly
    std::uint64_t strata = 1;
    bool strata_small = true;
    for (VarId z : q.z) {
        strata *= static_cast<std::uint64_t>(d.variables[static_cast<std::size_t>(z)].arity);
        if (strata > (std::uint64_t{1} << 24)) {
            strata_small = false;
            break;
        }
    }

    const std::size_t cell_count = rx * ry;
    const std::uint8_t* xcol = d.columns[static_cast<std::size_t>(q.x)].data();
    const std::uint8_t* ycol = d.columns[static_cast<std::size_t>(q.y)].data();

    std::vector<std::uint32_t> dense;
    std::unordered_map<std::uint64_t, std::vector<std::uint32_t>> sparse;
    std::unordered_map<std::string, std::vector<std::uint32_t>> sparse_tuple;
    const bool use_dense = strata_small && strata * cell_count <= (std::uint64_t{1} << 22);
    if (use_dense) dense.assign(static_cast<std::size_t>(strata * cell_count), 0);

    std::vector<const std::uint8_t*> zcols;
    std::vector<std::uint64_t> zarity;
    for (VarId z : q.z) {
        zcols.push_back(d.columns[static_cast<std::size_t>(z)].data());
        zarity.push_back(static_cast<std::uint64_t>(d.variables[static_cast<std::size_t>(z)].arity));
    }

    std::string tuple_key(zcols.size(), '\0');
    for (std::size_t r = 0; r < rows; ++r) {
        const std::size_t cell = static_cast<std::size_t>(xcol[r]) * ry + ycol[r];
        if (use_dense) {
            std::uint64_t s = 0;
            for (std::size_t i = 0; i < zcols.size(); ++i) s = s * zarity[i] + zcols[i][r];
            ++dense[static_cast<std::size_t>(s) * cell_count + cell];
        } else if (strata_small) {
            std::uint64_t s = 0;
            for (std::size_t i = 0; i < zcols.size(); ++i) s = s * zarity[i] + zcols[i][r];
            auto& tab = sparse[s];
            if (tab.empty()) tab.assign(cell_count, 0);
            ++tab[cell];
        } else {
            for (std::size_t i = 0; i < zcols.size(); ++i)
                tuple_key[i] = static_cast<char>(zcols[i][r]);
            auto& tab = sparse_tuple[tuple_key];
            if (tab.empty()) tab.assign(cell_count, 0);
            ++tab[cell];
        }
    }

    double statistic = 0.0;
    long long dof = 0;
    std::vector<double> row_margin(rx), col_margin(ry);

    auto accumulate_stratum = [&](const std::uint32_t* counts) {
        double total = 0.0;
        std::fill(row_margin.begin(), row_margin.end(), 0.0);
        std::fill(col_margin.begin(), col_margin.end(), 0.0);
        for (std::size_t i = 0; i < rx; ++i)
            for (std::size_t j = 0; j < ry; ++j) {
                const double o = counts[i * ry + j];
                total += o;
                row_margin[i] += o;
                col_margin[j] += o;
            }
        if (total <= 0.0) return;
        int nonzero_rows = 0, nonzero_cols = 0;
        for (std::size_t i = 0; i < rx; ++i)
            if (row_margin[i] > 0.0) ++nonzero_rows;
        for (std::size_t j = 0; j < ry; ++j)
            if (col_margin[j] > 0.0) ++nonzero_cols;
        if (nonzero_rows < 2 || nonzero_cols < 2) return;
        dof += static_cast<long long>(nonzero_rows - 1) * (nonzero_cols - 1);
        for (std::size_t i = 0; i < rx; ++i) {
            if (row_margin[i] <= 0.0) continue;
            for (std::size_t j = 0; j < ry; ++j) {
                if (col_margin[j] <= 0.0) continue;
                const double expected = row_margin[i] * col_margin[j] / total;
                const double o = counts[i * ry + j];
                if constexpr (kGStatistic) {
                    if (o > 0.0) statistic += 2.0 * o * std::log(o / expected);
                } else {
                    const double diff = o - expected;
                    statistic += diff * diff / expected;
                }
            }
        }
    };

    if (use_dense) {
        for (std::uint64_t s = 0; s < strata; ++s)
            accumulate_stratum(dense.data() + static_cast<std::size_t>(s) * cell_count);
    } else {
        for (const auto& [s, tab] : sparse) accumulate_stratum(tab.data());
    }

    CiResult res;
    res.statistic = statistic;
    res.dof = static_cast<int>(dof);
    if (dof == 0) {
        res.p_value = 1.0;
        res.independent = true;
        res.insufficient_data = true;
        return res;
    }
    res.p_value = chi2_survival(statistic, static_cast<double>(dof));
    if (static_cast<double>(rows) < opts.rows_per_dof * static_cast<double>(dof)) {
        res.independent = true;  // cannot reject the null reliably
        res.insufficient_data = true;
        return res;
    }
    res.independent = res.p_value >= alpha;
    return res;
}

}  // namespace detail

inline CiResult chi_square_test(const Dataset& d, const CiQuery& q, double alpha,
                                const DataTestOptions& opts = {}) {
    return detail::contingency_test<false>(d, q, alpha, opts);
}

inline CiResult g_test(const Dataset& d, const CiQuery& q, double alpha,
                       const DataTestOptions& opts = {}) {
    return detail::contingency_test<true>(d, q, alpha, opts);
}

enum class TestStatistic { chi_square, g };

class DataCiTester : public CiTester {
public:
    DataCiTester(const Dataset& d, double alpha, TestStatistic stat = TestStatistic::chi_square,
                 DataTestOptions opts = {})
        : data_(d), alpha_(alpha), stat_(stat), opts_(opts) {}

    CiResult test(const CiQuery& q) override {
        ++count_;
        return stat_ == TestStatistic::chi_square ? chi_square_test(data_, q, alpha_, opts_)
                                                  : g_test(data_, q, alpha_, opts_);
    }
    long long count() const override { return count_; }
    double alpha() const override { return alpha_; }

private:
    const Dataset& data_;
    double alpha_;
    TestStatistic stat_;
    DataTestOptions opts_;
    long long count_ = 0;
};

/// m-separation oracle: the canonical tester of a P-MAP distribution of g.
/// Reports degenerate p-values (1 when separated, 0 otherwise).
class OracleCiTester : public CiTester {
public:
    explicit OracleCiTester(const Admg& g, double alpha = 0.05) : graph_(g), alpha_(alpha) {}

    CiResult test(const CiQuery& q) override {
        ++count_;
        CiResult res;
        res.independent = m_separated(graph_, q.x, q.z, q.y);
        res.p_value = res.independent ? 1.0 : 0.0;
        return res;
    }
    long long count() const override { return count_; }
    double alpha() const override { return alpha_; }

private:
    const Admg& graph_;
    double alpha_;
    long long count_ = 0;
};

/// Exact tester over a dense joint: independence straight from the
/// definition, up to an absolute tolerance on conditional probabilities.
class ExactJointCiTester : public CiTester {
public:
    explicit ExactJointCiTester(const JointTable& j, double tol = 1e-9, double alpha = 0.05)
        : joint_(j), tol_(tol), alpha_(alpha) {}

    CiResult test(const CiQuery& q) override {
        ++count_;
        CiResult res;
        res.independent = exact_independent(joint_, {q.x}, q.z, {q.y}, tol_);
        res.p_value = res.independent ? 1.0 : 0.0;
        return res;
    }
    long long count() const override { return count_; }
    double alpha() const override { return alpha_; }

private:
    const JointTable& joint_;
    double tol_;
    double alpha_;
    long long count_ = 0;
};

/// Memoizing wrapper. Results are keyed by the normalized query (x/y
/// unordered, z sorted); count() reports unique tests executed by the inner
/// tester. Also records, per variable, the highest p-value seen in any test
/// that variable was an endpoint of (for the lowest-p-value truncation rule).
/// Map updates are serialized, so concurrent queries are safe.
class CountingCacheTester : public CiTester {
public:
    explicit CountingCacheTester(CiTester& inner) : inner_(inner) {}

    CiResult test(const CiQuery& q) override {
        std::vector<VarId> key;
        key.reserve(q.z.size() + 2);
        key.push_back(std::min(q.x, q.y));
        key.push_back(std::max(q.x, q.y));
        VarSet z = q.z;
        std::sort(z.begin(), z.end());
        key.insert(key.end(), z.begin(), z.end());

        {
            std::lock_guard<std::mutex> lock(mutex_);
            auto it = cache_.find(key);
            if (it != cache_.end()) return it->second;
        }
        CiQuery normalized{key[0], key[1], z};
        CiResult res = inner_.test(normalized);
        {
            std::lock_guard<std::mutex> lock(mutex_);
            auto [it, inserted] = cache_.emplace(std::move(key), res);
            if (inserted) {
                record_pvalue(q.x, res.p_value);
                record_pvalue(q.y, res.p_value);
            }
            return it->second;
        }
    }

    long long count() const override {
        std::lock_guard<std::mutex> lock(mutex_);
        return static_cast<long long>(cache_.size());
    }
    double alpha() const override { return inner_.alpha(); }

    double max_pvalue(VarId v) const {
        std::lock_guard<std::mutex> lock(mutex_);
        auto it = max_pvalue_.find(v);
        return it == max_pvalue_.end() ? 0.0 : it->second;
    }

private:
    void record_pvalue(VarId v, double p) {
        auto [it, inserted] = max_pvalue_.emplace(v, p);
        if (!inserted && p > it->second) it->second = p;
    }

    CiTester& inner_;
    mutable std::mutex mutex_;
    std::map<std::vector<VarId>, CiResult> cache_;
    std::unordered_map<VarId, double> max_pvalue_;
};

}  // namespace predcause
