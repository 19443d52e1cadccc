#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "jacobi_spectra/detail/numeric.hpp"
#include "jacobi_spectra/ensemble.hpp"

namespace jacobi_spectra {

struct EigenConvergenceError : std::runtime_error {
    explicit EigenConvergenceError(std::size_t idx)
        : std::runtime_error("eigen_decompose: eigenvalue " + std::to_string(idx) +
                             " failed to converge within 50 sweeps"),
          index(idx) {}
    std::size_t index;
};

// Eigenvalues and spectral weights (squared first components of the
// orthonormal eigenvectors) of a symmetric tridiagonal matrix.
//
// Implicit-shift QL with Wilkinson shift, tql2/EISPACK lineage, but only the
// first row of the eigenvector matrix is accumulated: O(n^2) total work.
// Deflation splits when |b_k| <= eps_mach (|a_k| + |a_{k+1}|). Exactly-equal
// eigenvalues (possible only after an off-diagonal underflows) merge into a
// single atom so the measure's atoms stay strictly increasing.
inline SpectralMeasure eigen_decompose(const TridiagonalMatrix& mat) {
    const std::size_t n = mat.size();
    std::vector<double> d = mat.diag;
    std::vector<double> e = mat.offdiag;
    e.push_back(0.0);
    std::vector<double> w(n, 0.0);
    w[0] = 1.0;

    const double eps = std::numeric_limits<double>::epsilon();
    const auto sign_like = [](double a, double b) { return b >= 0.0 ? std::abs(a) : -std::abs(a); };

    for (std::size_t l = 0; l < n; ++l) {
        std::size_t iter = 0;
        std::size_t m;
        do {
            for (m = l; m + 1 < n; ++m) {
                double dd = std::abs(d[m]) + std::abs(d[m + 1]);
                if (std::abs(e[m]) <= eps * dd) break;
            }
            if (m != l) {
                if (iter++ == 50) throw EigenConvergenceError(l);
                double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
                double r = std::hypot(g, 1.0);
                g = d[m] - d[l] + e[l] / (g + sign_like(r, g));
                double s = 1.0, c = 1.0, p = 0.0;
                bool underflow = false;
                for (std::size_t ii = m; ii-- > l;) {
                    double f = s * e[ii];
                    double b = c * e[ii];
                    r = std::hypot(f, g);
                    e[ii + 1] = r;
                    if (r == 0.0) {
                        d[ii + 1] -= p;
                        e[m] = 0.0;
                        underflow = true;
                        break;
                    }
                    s = f / r;
                    c = g / r;
                    g = d[ii + 1] - p;
                    r = (d[ii] - g) * s + 2.0 * c * b;
                    p = s * r;
                    d[ii + 1] = g + p;
                    g = c * r - b;

                    f = w[ii + 1];
                    w[ii + 1] = s * w[ii] + c * f;
                    w[ii] = c * w[ii] - s * f;
                }
                if (underflow) continue;
                d[l] -= p;
                e[l] = g;
                e[m] = 0.0;
            }
        } while (m != l);
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) { return d[i] < d[j]; });

    std::vector<double> atoms;
    std::vector<double> weights;
    atoms.reserve(n);
    weights.reserve(n);
    for (std::size_t idx : order) {
        double lambda = d[idx];
        double weight = w[idx] * w[idx];
        if (!atoms.empty() && atoms.back() == lambda)
            weights.back() += weight;
        else {
            atoms.push_back(lambda);
            weights.push_back(weight);
        }
    }

    double mass = detail::compensated_total(weights);
    for (double& wt : weights) wt /= mass;
    return make_spectral_measure(std::move(atoms), std::move(weights));
}

// Spectral-measure moments <mu, x^k> = (J^k)_{11} for k = 0..K, via the
// three-term recurrence v <- J v starting from e_1. The vector J^k e_1 is
// supported on the first k+1 coordinates, so each step touches only that
// prefix.
inline std::vector<double> moments_by_recurrence(const TridiagonalMatrix& mat, std::size_t K) {
    const std::size_t n = mat.size();
    std::vector<double> moments(K + 1);
    moments[0] = 1.0;
    std::vector<double> cur(n, 0.0), nxt(n, 0.0);
    cur[0] = 1.0;
    for (std::size_t k = 1; k <= K; ++k) {
        const std::size_t active = std::min(n, k + 1);
        for (std::size_t i = 0; i < active; ++i) {
            double acc = mat.diag[i] * cur[i];
            if (i > 0) acc += mat.offdiag[i - 1] * cur[i - 1];
            if (i + 1 < n) acc += mat.offdiag[i] * cur[i + 1];
            nxt[i] = acc;
        }
        moments[k] = nxt[0];
        std::swap(cur, nxt);
    }
    return moments;
}

// Kolmogorov distance between the spectral measure (weights w_i) and the
// empirical measure (uniform 1/n) supported on the same atoms. Both CDFs
// are constant between atoms, so the supremum is attained right after an
// atom.
inline double kolmogorov_distance_spectral_vs_empirical(const SpectralMeasure& mu) {
    const std::size_t n = mu.size();
    detail::compensated_sum cum;
    double best = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        cum.add(mu.weights[i]);
        double diff = std::abs(cum.value() - static_cast<double>(i + 1) / static_cast<double>(n));
        best = std::max(best, diff);
    }
    return best;
}

inline double eval_polynomial(const std::vector<double>& coeffs_ascending, double x) {
    double acc = 0.0;
    for (std::size_t i = coeffs_ascending.size(); i-- > 0;) acc = acc * x + coeffs_ascending[i];
    return acc;
}

// <mu, p> via the moment recurrence (no eigendecomposition).
inline double polynomial_mean_by_recurrence(const TridiagonalMatrix& mat,
                                            const std::vector<double>& coeffs_ascending) {
    if (coeffs_ascending.empty()) return 0.0;
    std::vector<double> m = moments_by_recurrence(mat, coeffs_ascending.size() - 1);
    detail::compensated_sum acc;
    for (std::size_t k = 0; k < coeffs_ascending.size(); ++k) acc.add(coeffs_ascending[k] * m[k]);
    return acc.value();
}

// <mu, p> as a weighted sum over the atoms.
inline double polynomial_mean_by_spectrum(const SpectralMeasure& mu,
                                          const std::vector<double>& coeffs_ascending) {
    detail::compensated_sum acc;
    for (std::size_t i = 0; i < mu.size(); ++i)
        acc.add(mu.weights[i] * eval_polynomial(coeffs_ascending, mu.atoms[i]));
    return acc.value();
}

} // namespace jacobi_spectra
