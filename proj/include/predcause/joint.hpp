#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "predcause/model.hpp"
#include "predcause/variables.hpp"

namespace predcause {

/// Dense joint distribution over the observed variables, row-major with the
/// LAST variable varying fastest.
struct JointTable {
    std::vector<Variable> variables;
    std::vector<double> probabilities;

    std::size_t cell_count() const { return probabilities.size(); }

    std::size_t stride_of(std::size_t var) const {
        std::size_t s = 1;
        for (std::size_t i = variables.size(); i-- > var + 1;)
            s *= static_cast<std::size_t>(variables[i].arity);
        return s;
    }

    double total() const {
        double t = 0.0;
        for (double p : probabilities) t += p;
        return t;
    }
};

/// Sums the fully factorized augmented joint over the latent states, yielding
/// the joint over the observed variables. Throws when the observed state
/// space exceeds cell_cap.
inline JointTable exact_joint(const CausalModel& m, std::size_t cell_cap = (std::size_t{1} << 20)) {
    const std::size_t n_obs = m.observed_count();
    const std::size_t n_lat = m.latents.size();

    std::size_t cells = 1;
    for (std::size_t v = 0; v < n_obs; ++v) {
        const std::size_t a = static_cast<std::size_t>(m.observed.variable(static_cast<VarId>(v)).arity);
        if (cells > cell_cap / a)
            throw std::runtime_error("exact_joint: observed state space exceeds cap");
        cells *= a;
    }

    std::size_t lat_cells = 1;
    for (const auto& u : m.latents) {
        lat_cells *= static_cast<std::size_t>(u.arity);
        if (lat_cells > (std::size_t{1} << 26))
            throw std::runtime_error("exact_joint: latent state space too large");
    }

    JointTable j;
    j.variables = m.observed.variables();
    j.probabilities.assign(cells, 0.0);

    const std::size_t total = n_obs + n_lat;
    std::vector<std::uint8_t> state(total, 0);

    for (std::size_t cell = 0; cell < cells; ++cell) {
        // decode observed assignment (last variable fastest)
        std::size_t rem = cell;
        for (std::size_t v = n_obs; v-- > 0;) {
            const auto a = static_cast<std::size_t>(m.observed.variable(static_cast<VarId>(v)).arity);
            state[v] = static_cast<std::uint8_t>(rem % a);
            rem /= a;
        }
        double cell_p = 0.0;
        for (std::size_t lat = 0; lat < lat_cells; ++lat) {
            std::size_t lrem = lat;
            for (std::size_t u = n_lat; u-- > 0;) {
                const auto a = static_cast<std::size_t>(m.latents[u].arity);
                state[n_obs + u] = static_cast<std::uint8_t>(lrem % a);
                lrem /= a;
            }
            double p = 1.0;
            for (std::size_t v = 0; v < total && p > 0.0; ++v) {
                const Cpt& cpt = m.cpts[v];
                std::size_t idx = 0;
                for (VarId par : cpt.parents)
                    idx = idx * static_cast<std::size_t>(m.arity_of(par)) +
                          state[static_cast<std::size_t>(par)];
                p *= cpt.table[idx * static_cast<std::size_t>(m.arity_of(static_cast<VarId>(v))) +
                               state[v]];
            }
            cell_p += p;
        }
        j.probabilities[cell] = cell_p;
    }
    return j;
}

/// Marginal over a subset of variables (ids relative to j.variables), keeping
/// their relative order.
inline JointTable marginal(const JointTable& j, const VarSet& keep) {
    JointTable out;
    std::vector<std::size_t> strides;
    for (VarId v : keep) {
        out.variables.push_back(j.variables.at(static_cast<std::size_t>(v)));
        strides.push_back(j.stride_of(static_cast<std::size_t>(v)));
    }
    std::size_t cells = 1;
    for (const auto& v : out.variables) cells *= static_cast<std::size_t>(v.arity);
    out.probabilities.assign(cells, 0.0);

    const std::size_t n = j.variables.size();
    std::vector<std::uint8_t> state(n, 0);
    for (std::size_t cell = 0; cell < j.cell_count(); ++cell) {
        std::size_t rem = cell;
        for (std::size_t v = n; v-- > 0;) {
            const auto a = static_cast<std::size_t>(j.variables[v].arity);
            state[v] = static_cast<std::uint8_t>(rem % a);
            rem /= a;
        }
        std::size_t idx = 0;
        for (std::size_t i = 0; i < keep.size(); ++i)
            idx = idx * static_cast<std::size_t>(out.variables[i].arity) +
                  state[static_cast<std::size_t>(keep[i])];
        out.probabilities[idx] += j.probabilities[cell];
    }
    return out;
}

/// Conditional-independence check straight from the definition: X and Y are
/// independent given Z iff Pr(x | y, z) = Pr(x | z) (within tol) whenever the
/// conditionals are defined. Accepts set-valued X and Y.
inline bool exact_independent(const JointTable& j, const VarSet& xs, const VarSet& zs,
                              const VarSet& ys, double tol = 1e-9) {
    if (xs.empty() || ys.empty())
        throw std::invalid_argument("exact_independent: x and y must be non-empty");
    if (!sets_disjoint(xs, ys) || !sets_disjoint(xs, zs) || !sets_disjoint(ys, zs))
        throw std::invalid_argument("exact_independent: sets must be pairwise disjoint");

    // marginal over (x..., y..., z...) in that order
    VarSet keep;
    keep.insert(keep.end(), xs.begin(), xs.end());
    keep.insert(keep.end(), ys.begin(), ys.end());
    keep.insert(keep.end(), zs.begin(), zs.end());
    JointTable mxyz = marginal(j, keep);

    std::size_t nx = 1, ny = 1, nz = 1;
    for (std::size_t i = 0; i < xs.size(); ++i)
        nx *= static_cast<std::size_t>(mxyz.variables[i].arity);
    for (std::size_t i = 0; i < ys.size(); ++i)
        ny *= static_cast<std::size_t>(mxyz.variables[xs.size() + i].arity);
    for (std::size_t i = 0; i < zs.size(); ++i)
        nz *= static_cast<std::size_t>(mxyz.variables[xs.size() + ys.size() + i].arity);

    auto p_at = [&](std::size_t x, std::size_t y, std::size_t z) {
        return mxyz.probabilities[(x * ny + y) * nz + z];
    };

    for (std::size_t z = 0; z < nz; ++z) {
        double pz = 0.0;
        std::vector<double> px_z(nx, 0.0), py_z(ny, 0.0);
        for (std::size_t x = 0; x < nx; ++x)
            for (std::size_t y = 0; y < ny; ++y) {
                const double p = p_at(x, y, z);
                pz += p;
                px_z[x] += p;
                py_z[y] += p;
            }
        if (pz <= 0.0) continue;
        for (std::size_t y = 0; y < ny; ++y) {
            if (py_z[y] <= 0.0) continue;  // Pr(x | y, z) undefined
            for (std::size_t x = 0; x < nx; ++x) {
                const double cond_xyz = p_at(x, y, z) / py_z[y];
                const double cond_xz = px_z[x] / pz;
                if (std::abs(cond_xyz - cond_xz) > tol) return false;
            }
        }
    }
    return true;
}

}  // namespace predcause
