#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>

namespace predcause {

namespace detail {

// series expansion of the lower regularized incomplete gamma P(a, x),
// converges fast for x < a + 1
inline double gamma_p_series(double a, double x) {
    double ap = a;
    double sum = 1.0 / a;
    double term = sum;
    for (int i = 0; i < 10000; ++i) {
        ap += 1.0;
        term *= x / ap;
        sum += term;
        if (std::abs(term) < std::abs(sum) * 1e-16)
            return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
    }
    throw std::runtime_error("gamma_p_series: no convergence");
}

// modified Lentz continued fraction for the upper regularized incomplete
// gamma Q(a, x), converges fast for x >= a + 1
inline double gamma_q_cf(double a, double x) {
    const double tiny = std::numeric_limits<double>::min() / 1e-30;
    double b = x + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i < 10000; ++i) {
        const double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double delta = d * c;
        h *= delta;
        if (std::abs(delta - 1.0) < 1e-16)
            return h * std::exp(-x + a * std::log(x) - std::lgamma(a));
    }
    throw std::runtime_error("gamma_q_cf: no convergence");
}

}  // namespace detail

/// Upper regularized incomplete gamma Q(a, x) = Gamma(a, x) / Gamma(a).
inline double regularized_gamma_q(double a, double x) {
    if (a <= 0.0) throw std::invalid_argument("regularized_gamma_q: a must be positive");
    if (x < 0.0) throw std::invalid_argument("regularized_gamma_q: x must be non-negative");
    if (x == 0.0) return 1.0;
    if (x < a + 1.0) return 1.0 - detail::gamma_p_series(a, x);
    return detail::gamma_q_cf(a, x);
}

/// Survival function of the chi-square distribution with dof degrees of
/// freedom, i.e. the upper-tail p-value at the given statistic.
inline double chi2_survival(double statistic, double dof) {
    if (dof <= 0.0) throw std::invalid_argument("chi2_survival: dof must be positive");
    if (statistic <= 0.0) return 1.0;
    return regularized_gamma_q(dof / 2.0, statistic / 2.0);
}

}  // namespace predcause
