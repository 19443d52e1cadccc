#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include "jacobi_spectra/detail/numeric.hpp"
#include "jacobi_spectra/ensemble.hpp"
#include "jacobi_spectra/jacobi_coeff.hpp"

namespace jacobi_spectra {

inline constexpr double rate_infinity = std::numeric_limits<double>::infinity();

// Constraint-set membership tolerance for the finite-dimensional rate
// functions: coordinates within 1e-9 of the constraint surface project onto
// it, anything farther is charged +infinity.
inline constexpr double rate_membership_tol = 1e-9;

// g(x) = x - log x - 1 on (0, infinity), +infinity otherwise; the unique
// zero is x = 1.
inline double g_rate(double x) {
    if (!(x > 0.0) || !std::isfinite(x)) return rate_infinity;
    return x - std::log(x) - 1.0;
}

// Rate of the moment-coordinate 4-vector (x1, x2, x3, x4); finite only on
//   D = { x3 = sigma(sqrt(gamma) x1 + x2)/(1+sigma), x4 = sqrt(gamma) x1 + x2 }:
//   bulk:       (1/gamma) g((x2+sqrt(gamma)x1)/(1+sigma))
//               + (1/(gamma sigma)) g((x2-sqrt(gamma)sigma x1)/(1+sigma))
//   sigma_zero: (1/gamma) g(1+sqrt(gamma)x1), with x2 = 1+sigma forced
//   gamma_zero: x1^2/(2(1+sigma)),            with x2 = 1+sigma forced
inline double rate_IM(const std::array<double, 4>& x, const LimitParams& lp) {
    const double s = lp.sigma;
    const double rg = std::sqrt(lp.gamma);
    const double mix = rg * x[0] + x[1];
    if (std::abs(x[2] - s * mix / (1.0 + s)) > rate_membership_tol) return rate_infinity;
    if (std::abs(x[3] - mix) > rate_membership_tol) return rate_infinity;
    switch (lp.regime) {
        case Regime::bulk:
            return g_rate((x[1] + rg * x[0]) / (1.0 + s)) / lp.gamma +
                   g_rate((x[1] - rg * s * x[0]) / (1.0 + s)) / (lp.gamma * s);
        case Regime::sigma_zero:
            if (std::abs(x[1] - (1.0 + s)) > rate_membership_tol) return rate_infinity;
            return g_rate(1.0 + rg * x[0]) / lp.gamma;
        case Regime::gamma_zero:
            if (std::abs(x[1] - (1.0 + s)) > rate_membership_tol) return rate_infinity;
            return x[0] * x[0] / (2.0 * (1.0 + s));
    }
    return rate_infinity;
}

// Rate of the product-coordinate 4-vector, c = gamma sigma/(1+sigma) < 1;
// finite only on D = { x3 = c x1, x4 = sqrt(gamma) x1 }:
//   bulk (c > 0):  g(x1) + ((1-c)/c) g((x2 - c x1)/(1-c))
//   degenerate:    g(x1), with x2 = 1 forced
inline double rate_IP(const std::array<double, 4>& x, const LimitParams& lp) {
    const double c = lp.gamma * lp.sigma / (1.0 + lp.sigma);
    const double rg = std::sqrt(lp.gamma);
    if (std::abs(x[2] - c * x[0]) > rate_membership_tol) return rate_infinity;
    if (std::abs(x[3] - rg * x[0]) > rate_membership_tol) return rate_infinity;
    if (c > 0.0)
        return g_rate(x[0]) + (1.0 - c) / c * g_rate((x[1] - c * x[0]) / (1.0 - c));
    if (std::abs(x[1] - 1.0) > rate_membership_tol) return rate_infinity;
    return g_rate(x[0]);
}

struct RateValue {
    double value = 0.0;
    std::vector<double> terms;
    std::size_t truncation_K = 0;
    double tail_estimate = 0.0;        // 2 * (last term) display heuristic
    std::string failure_stage;         // nonempty when a decomposition stage rejected
    std::size_t failure_index = 0;     // 1-based, meaningful with failure_stage
};

// K-term truncation of the rate of a measure given through its (u,v)
// sequences; the unique zero is u == 0, v == 1. Per-k contributions:
//   bulk:       (1/gamma) g(1+sqrt(gamma)u_k) + (1/(gamma sigma)) g(1-sqrt(gamma)sigma u_k)
//               + g(v_k) + ((1-c)/c) g((1-c v_k)/(1-c))
//   sigma_zero: (1/gamma) g(1+sqrt(gamma)u_k) + g(v_k)
//   gamma_zero: ((1+sigma)/2) u_k^2 + g(v_k)
inline RateValue rate_measure(const std::vector<double>& u, const std::vector<double>& v,
                              const LimitParams& lp, std::size_t K) {
    if (u.size() < K || v.size() < K)
        throw std::invalid_argument("rate_measure: need at least K terms of u and v");
    const double s = lp.sigma;
    const double gm = lp.gamma;
    const double rg = std::sqrt(gm);
    const double c = gm * s / (1.0 + s);

    RateValue out;
    out.truncation_K = K;
    out.terms.reserve(K);
    detail::compensated_sum acc;
    bool infinite = false;
    for (std::size_t k = 0; k < K; ++k) {
        double term = 0.0;
        switch (lp.regime) {
            case Regime::bulk:
                term = g_rate(1.0 + rg * u[k]) / gm + g_rate(1.0 - rg * s * u[k]) / (gm * s) +
                       g_rate(v[k]) + (1.0 - c) / c * g_rate((1.0 - c * v[k]) / (1.0 - c));
                break;
            case Regime::sigma_zero:
                term = g_rate(1.0 + rg * u[k]) / gm + g_rate(v[k]);
                break;
            case Regime::gamma_zero:
                term = (1.0 + s) / 2.0 * u[k] * u[k] + g_rate(v[k]);
                break;
        }
        out.terms.push_back(term);
        if (std::isinf(term))
            infinite = true;
        else
            acc.add(term);
    }
    out.value = infinite ? rate_infinity : acc.value();
    if (!out.terms.empty() && std::isfinite(out.terms.back()))
        out.tail_estimate = 2.0 * out.terms.back();
    return out;
}

// Rate of the measure with Jacobi coefficients (a,b): decompose to (u,v),
// then sum. Decomposition rejections (measure outside the admissible
// interval) map to +infinity with the failing stage and index recorded.
inline RateValue rate_of_spectral_measure(const std::vector<double>& a,
                                          const std::vector<double>& b, const LimitParams& lp,
                                          std::size_t K) {
    if (a.size() < K || b.size() < K)
        throw std::invalid_argument("rate_of_spectral_measure: need K coefficients of a and b");
    const std::vector<double> a_head(a.begin(), a.begin() + static_cast<std::ptrdiff_t>(K));
    const std::vector<double> b_head(b.begin(), b.begin() + static_cast<std::ptrdiff_t>(K));
    try {
        const UvSequences uv = uv_from_jacobi(a_head, b_head, lp);
        return rate_measure(uv.u, uv.v, lp, K);
    } catch (const DecompositionError& err) {
        RateValue out;
        out.value = rate_infinity;
        out.truncation_K = K;
        out.failure_stage = decomposition_stage_name(err.stage);
        out.failure_index = err.index;
        return out;
    }
}

} // namespace jacobi_spectra
