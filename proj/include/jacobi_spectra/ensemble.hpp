#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "jacobi_spectra/detail/numeric.hpp"

namespace jacobi_spectra {

// Finite-ensemble parameters: beta > 0, integer n >= 1, real p1, p2 >= n.
struct EnsembleParams {
    double beta;
    std::size_t n;
    double p1;
    double p2;

    double beta_prime() const { return 0.5 * beta; }
};

inline EnsembleParams make_ensemble_params(double beta, std::size_t n, double p1, double p2) {
    if (!(beta > 0.0) || !std::isfinite(beta))
        throw std::domain_error("EnsembleParams: beta must be positive and finite");
    if (n < 1)
        throw std::domain_error("EnsembleParams: n must be at least 1");
    if (!std::isfinite(p1) || !std::isfinite(p2))
        throw std::domain_error("EnsembleParams: p1, p2 must be finite");
    if (p1 < static_cast<double>(n) || p2 < static_cast<double>(n))
        throw std::domain_error("EnsembleParams: p1 and p2 must be >= n");
    return EnsembleParams{beta, n, p1, p2};
}

// Limit regimes for (gamma, sigma) = (lim n/p1, lim p1/p2).
enum class Regime { bulk, sigma_zero, gamma_zero };

inline const char* regime_name(Regime r) {
    switch (r) {
        case Regime::bulk: return "bulk";
        case Regime::sigma_zero: return "sigma_zero";
        case Regime::gamma_zero: return "gamma_zero";
    }
    return "unknown";
}

// gamma = 0 takes precedence over sigma = 0; sigma*gamma = 1 is admissible.
inline Regime classify_regime(double gamma, double sigma) {
    if (!(gamma >= 0.0) || !(gamma <= 1.0))
        throw std::domain_error("classify_regime: gamma must lie in [0,1]");
    if (!(sigma >= 0.0) || !std::isfinite(sigma))
        throw std::domain_error("classify_regime: sigma must be finite and nonnegative");
    if (sigma * gamma > 1.0)
        throw std::domain_error("classify_regime: sigma*gamma must not exceed 1");
    if (gamma == 0.0) return Regime::gamma_zero;
    if (sigma == 0.0) return Regime::sigma_zero;
    return Regime::bulk;
}

struct LimitParams {
    double gamma;
    double sigma;
    Regime regime;
};

inline LimitParams make_limit_params(double gamma, double sigma) {
    return LimitParams{gamma, sigma, classify_regime(gamma, sigma)};
}

// Exact finite-n ratios (n/p1, p1/p2); always admissible since p1, p2 >= n.
inline LimitParams limit_params_of(const EnsembleParams& ep) {
    return make_limit_params(static_cast<double>(ep.n) / ep.p1, ep.p1 / ep.p2);
}

// Symmetric tridiagonal matrix stored as diagonal + off-diagonal arrays.
struct TridiagonalMatrix {
    std::vector<double> diag;
    std::vector<double> offdiag;

    std::size_t size() const { return diag.size(); }
};

inline TridiagonalMatrix make_tridiagonal(std::vector<double> diag, std::vector<double> offdiag) {
    if (diag.empty())
        throw std::invalid_argument("TridiagonalMatrix: dimension must be at least 1");
    if (offdiag.size() + 1 != diag.size())
        throw std::invalid_argument("TridiagonalMatrix: offdiag length must be size-1");
    return TridiagonalMatrix{std::move(diag), std::move(offdiag)};
}

// Finitely supported probability measure: strictly increasing atoms, weights
// nonnegative with total mass 1 within 1e-12.
struct SpectralMeasure {
    std::vector<double> atoms;
    std::vector<double> weights;

    std::size_t size() const { return atoms.size(); }
};

inline SpectralMeasure make_spectral_measure(std::vector<double> atoms, std::vector<double> weights) {
    if (atoms.empty() || atoms.size() != weights.size())
        throw std::invalid_argument("SpectralMeasure: atoms and weights must match and be nonempty");
    for (std::size_t i = 0; i + 1 < atoms.size(); ++i)
        if (!(atoms[i] < atoms[i + 1]))
            throw std::invalid_argument("SpectralMeasure: atoms must be strictly increasing");
    for (double w : weights)
        if (!(w >= 0.0))
            throw std::invalid_argument("SpectralMeasure: weights must be nonnegative");
    double mass = detail::compensated_total(weights);
    if (std::abs(mass - 1.0) > 1e-12)
        throw std::invalid_argument("SpectralMeasure: weights must sum to 1 within 1e-12");
    return SpectralMeasure{std::move(atoms), std::move(weights)};
}

// Empirical eigenvalue measure: uniform weight 1/n on each atom.
inline SpectralMeasure uniform_measure(std::vector<double> atoms) {
    std::vector<double> w(atoms.size(), 1.0 / static_cast<double>(atoms.size()));
    return make_spectral_measure(std::move(atoms), std::move(w));
}

// Unnormalized joint log density of the eigenvalue law on (0,1)^n:
//   beta * sum_{i<j} log|x_i - x_j|
//   + sum_i [ (beta'(p1-n+1)-1) log x_i + (beta'(p2-n+1)-1) log(1-x_i) ].
// Inputs are canonicalized by sorting, so the value is exchangeable
// bit-for-bit. Returns -inf when two points coincide; throws if any
// point leaves (0,1).
inline double joint_log_density(const std::vector<double>& points, const EnsembleParams& ep) {
    if (points.size() != ep.n)
        throw std::invalid_argument("joint_log_density: point count must equal n");
    for (double x : points)
        if (!(x > 0.0) || !(x < 1.0))
            throw std::domain_error("joint_log_density: points must lie in the open interval (0,1)");

    std::vector<double> x(points);
    std::sort(x.begin(), x.end());
    for (std::size_t i = 0; i + 1 < x.size(); ++i)
        if (x[i] == x[i + 1]) return -std::numeric_limits<double>::infinity();

    const double e1 = ep.beta_prime() * (ep.p1 - static_cast<double>(ep.n) + 1.0) - 1.0;
    const double e2 = ep.beta_prime() * (ep.p2 - static_cast<double>(ep.n) + 1.0) - 1.0;

    double interaction = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i)
        for (std::size_t j = i + 1; j < x.size(); ++j)
            interaction += std::log(x[j] - x[i]);

    double external = 0.0;
    for (double xi : x)
        external += e1 * std::log(xi) + e2 * std::log1p(-xi);

    return ep.beta * interaction + external;
}

} // namespace jacobi_spectra
