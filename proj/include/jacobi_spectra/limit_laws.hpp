#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "jacobi_spectra/ensemble.hpp"

namespace jacobi_spectra {

inline constexpr double pi = 3.14159265358979323846;

struct SupportInterval {
    double lower;
    double upper;
    double width() const { return upper - lower; }
};

// Density on [u1, u2] within [0,1]:
//   (1+sigma)/(2 pi sigma gamma) * sqrt((x-u1)(u2-x)) / (x(1-x)),
//   u_{1,2} = sigma/(1+sigma) * (sqrt(1 - sigma gamma/(1+sigma)) -+ sqrt(gamma/(1+sigma)))^2.
// Requires 0 < sigma*gamma <= 1. Returns 0 off the open support.
inline SupportInterval wachter_support(double gamma, double sigma) {
    const double s = sigma / (1.0 + sigma);
    const double r1 = std::sqrt(1.0 - sigma * gamma / (1.0 + sigma));
    const double r2 = std::sqrt(gamma / (1.0 + sigma));
    // Clamp into [0,1]: when sigma*gamma = 1 the upper edge is exactly 1 but
    // rounds a few ulps past it, which would put the hard-edge pole of the
    // density inside the support.
    return SupportInterval{std::max(0.0, s * (r1 - r2) * (r1 - r2)),
                           std::min(1.0, s * (r1 + r2) * (r1 + r2))};
}

inline double wachter_density(double x, double gamma, double sigma) {
    if (!(gamma > 0.0) || !(sigma > 0.0) || sigma * gamma > 1.0)
        throw std::domain_error("wachter_density: requires gamma > 0, sigma > 0, sigma*gamma <= 1");
    const SupportInterval sup = wachter_support(gamma, sigma);
    if (x <= sup.lower || x >= sup.upper) return 0.0;
    const double num = std::sqrt((x - sup.lower) * (sup.upper - x));
    return (1.0 + sigma) / (2.0 * pi * sigma * gamma) * num / (x * (1.0 - x));
}

// Density on [(1-sqrt(gamma))^2, (1+sqrt(gamma))^2]:
//   sqrt((x-g1)(g2-x)) / (2 pi gamma x). Requires 0 < gamma <= 1.
inline SupportInterval marchenko_pastur_support(double gamma) {
    const double r = std::sqrt(gamma);
    return SupportInterval{(1.0 - r) * (1.0 - r), (1.0 + r) * (1.0 + r)};
}

inline double marchenko_pastur_density(double x, double gamma) {
    if (!(gamma > 0.0) || gamma > 1.0)
        throw std::domain_error("marchenko_pastur_density: requires gamma in (0,1]");
    const SupportInterval sup = marchenko_pastur_support(gamma);
    if (x <= sup.lower || x >= sup.upper) return 0.0;
    return std::sqrt((x - sup.lower) * (sup.upper - x)) / (2.0 * pi * gamma * x);
}

// Support of the rescaled limit law: ((1-sigma) sqrt(gamma) -+ 2 sqrt(1+sigma-sigma*gamma))/(1+sigma).
inline SupportInterval support_of_limit(const LimitParams& lp) {
    const double s = lp.sigma, gm = lp.gamma;
    const double center = (1.0 - s) * std::sqrt(gm) / (1.0 + s);
    const double half = 2.0 * std::sqrt(1.0 + s - s * gm) / (1.0 + s);
    return SupportInterval{center - half, center + half};
}

// Limit density of the rescaled spectra, by regime:
//   bulk:       sigma sqrt(gamma)/(1+sigma) * wachter(sigma(sqrt(gamma)x+1)/(1+sigma))
//   sigma_zero: sqrt(gamma) * marchenko_pastur(1 + sqrt(gamma) x)
//   gamma_zero: (1+sigma)/(2 pi) * sqrt(4/(1+sigma) - x^2)
inline double modified_wachter_density(double x, const LimitParams& lp) {
    switch (lp.regime) {
        case Regime::bulk: {
            const double lam = lp.sigma * (std::sqrt(lp.gamma) * x + 1.0) / (1.0 + lp.sigma);
            return lp.sigma * std::sqrt(lp.gamma) / (1.0 + lp.sigma) *
                   wachter_density(lam, lp.gamma, lp.sigma);
        }
        case Regime::sigma_zero: {
            const double r = std::sqrt(lp.gamma);
            return r * marchenko_pastur_density(1.0 + r * x, lp.gamma);
        }
        case Regime::gamma_zero: {
            const double arg = 4.0 / (1.0 + lp.sigma) - x * x;
            if (arg <= 0.0) return 0.0;
            return (1.0 + lp.sigma) / (2.0 * pi) * std::sqrt(arg);
        }
    }
    throw std::logic_error("modified_wachter_density: unreachable");
}

// Jacobi coefficients of the limit spectral measure: diagonal (alpha0, alpha1,
// alpha1, ...), off-diagonal (beta0, beta1, beta1, ...).
struct LimitJacobiParams {
    double alpha0;
    double beta0;
    double alpha1;
    double beta1;
};

inline LimitJacobiParams limiting_jacobi(const LimitParams& lp) {
    const double s = lp.sigma, gm = lp.gamma;
    return LimitJacobiParams{
        0.0,
        1.0 / std::sqrt(1.0 + s),
        std::sqrt(gm) * (1.0 - s) / (1.0 + s),
        std::sqrt(1.0 + s - s * gm) / (1.0 + s),
    };
}

// Size-m truncation of the two-parameter Jacobi matrix.
inline TridiagonalMatrix limit_jacobi_matrix(const LimitJacobiParams& jp, std::size_t m) {
    if (m < 1) throw std::invalid_argument("limit_jacobi_matrix: size must be >= 1");
    std::vector<double> diag(m, jp.alpha1);
    diag[0] = jp.alpha0;
    std::vector<double> off(m >= 2 ? m - 1 : 0, jp.beta1);
    if (!off.empty()) off[0] = jp.beta0;
    return make_tridiagonal(std::move(diag), std::move(off));
}

// Semi-infinite truncation as coefficient arrays a (length K) and b (length K).
inline std::pair<std::vector<double>, std::vector<double>>
limit_coefficient_arrays(const LimitJacobiParams& jp, std::size_t K) {
    std::vector<double> a(K, jp.alpha1), b(K, jp.beta1);
    if (K > 0) {
        a[0] = jp.alpha0;
        b[0] = jp.beta0;
    }
    return {std::move(a), std::move(b)};
}

// Stieltjes transform m(z) = integral of 1/(x - z) against the limit measure,
// for Im z > 0. Continued-fraction form: m = -1/(z - alpha0 + beta0^2 m1) with
// m1 the root of beta1^2 m1^2 + (z - alpha1) m1 + 1 = 0 with Im m1 > 0
// (exactly one root qualifies: the product of the roots is real positive).
// The square root takes the principal branch, sign-flipped when the resulting
// root has Im <= 0.
inline std::complex<double> m_function(std::complex<double> z, const LimitJacobiParams& jp) {
    if (!(z.imag() > 0.0)) throw std::domain_error("m_function: requires Im z > 0");
    const std::complex<double> B = z - jp.alpha1;
    const double b1sq = jp.beta1 * jp.beta1;
    std::complex<double> S = std::sqrt(B * B - 4.0 * b1sq);
    // Root of the quadratic via the cancellation-free form q = -(B + sgn S)/2,
    // roots q/b1sq and 1/q; pick the Herglotz one.
    if ((std::conj(B) * S).real() < 0.0) S = -S;
    const std::complex<double> q = -0.5 * (B + S);
    std::complex<double> m1 = q / b1sq;
    if (!(m1.imag() > 0.0)) m1 = 1.0 / q;
    const std::complex<double> m = -1.0 / (z - jp.alpha0 + jp.beta0 * jp.beta0 * m1);
    return m;
}

// Closed-form density of the limit measure at x:
//   (1/2pi) beta0^2 sqrt(4 beta1^2 - (x-alpha1)^2)
//     / (beta0^4 + beta1^2 (x-alpha0)^2 + beta0^2 (x-alpha0)(alpha1-x)).
inline double spectral_density_closed_form(double x, const LimitJacobiParams& jp) {
    const double num = 4.0 * jp.beta1 * jp.beta1 - (x - jp.alpha1) * (x - jp.alpha1);
    if (num <= 0.0) return 0.0;
    const double A = x - jp.alpha0;
    const double b0sq = jp.beta0 * jp.beta0;
    const double denom = b0sq * b0sq + jp.beta1 * jp.beta1 * A * A + b0sq * A * (jp.alpha1 - x);
    return b0sq * std::sqrt(num) / (2.0 * pi * denom);
}

struct DensityFromM {
    double value;
    bool converged;
};

// Boundary density (1/pi) lim Im m(x + i eps) by Richardson extrapolation
// along eps in {1e-3, 5e-4, 2.5e-4}; Im m(x+i eps) is analytic in eps inside
// the open support, so two eliminations leave an O(eps^3) residual. The
// converged flag goes false when the extrapolation stages disagree, which
// happens near the square-root edges.
inline DensityFromM density_from_m(double x, const LimitJacobiParams& jp) {
    const double eps0 = 1e-3;
    const double f1 = m_function({x, eps0}, jp).imag() / pi;
    const double f2 = m_function({x, 0.5 * eps0}, jp).imag() / pi;
    const double f3 = m_function({x, 0.25 * eps0}, jp).imag() / pi;
    const double g1 = 2.0 * f2 - f1;
    const double g2 = 2.0 * f3 - f2;
    const double value = (4.0 * g2 - g1) / 3.0;
    const bool converged = std::abs(value - g2) <= 2e-7 + 3e-5 * std::abs(value);
    return DensityFromM{value, converged};
}

} // namespace jacobi_spectra
