#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "jacobi_spectra/ensemble.hpp"
#include "jacobi_spectra/rng.hpp"

namespace jacobi_spectra {

// Independent Beta variates feeding the tridiagonal model:
//   c_k ~ Beta(beta'(p1-k+1), beta'(p2-k+1)),        k = 1..n
//   s_k ~ Beta(beta'(n-k),   beta'(p1+p2-n-k+1)),     k = 1..n-1
struct CoefficientDraw {
    std::vector<double> c;
    std::vector<double> s;
};

struct BetaShape {
    double a;
    double b;
};

struct CoefficientShapes {
    std::vector<BetaShape> c;
    std::vector<BetaShape> s;
};

inline CoefficientShapes coefficient_shapes(const EnsembleParams& ep) {
    const double bp = ep.beta_prime();
    const double n = static_cast<double>(ep.n);
    CoefficientShapes shapes;
    shapes.c.reserve(ep.n);
    shapes.s.reserve(ep.n - 1);
    for (std::size_t k = 1; k <= ep.n; ++k)
        shapes.c.push_back({bp * (ep.p1 - static_cast<double>(k) + 1.0),
                            bp * (ep.p2 - static_cast<double>(k) + 1.0)});
    for (std::size_t k = 1; k + 1 <= ep.n; ++k)
        shapes.s.push_back({bp * (n - static_cast<double>(k)),
                            bp * (ep.p1 + ep.p2 - n - static_cast<double>(k) + 1.0)});
    return shapes;
}

// One substream per (role, k) so each variate has its own deterministic
// source; replicate-level streams stay independent of drawing order.
inline CoefficientDraw draw_coefficients(const EnsembleParams& ep, const SeededStream& stream) {
    CoefficientShapes shapes = coefficient_shapes(ep);
    CoefficientDraw draw;
    draw.c.reserve(shapes.c.size());
    draw.s.reserve(shapes.s.size());
    for (std::size_t k = 0; k < shapes.c.size(); ++k) {
        SeededStream sub = stream.substream(2 * (k + 1));
        draw.c.push_back(sample_beta(shapes.c[k].a, shapes.c[k].b, sub));
    }
    for (std::size_t k = 0; k < shapes.s.size(); ++k) {
        SeededStream sub = stream.substream(2 * (k + 1) + 1);
        draw.s.push_back(sample_beta(shapes.s[k].a, shapes.s[k].b, sub));
    }
    return draw;
}

// Tridiagonal assembly with the convention c_0 = s_0 = 0:
//   a_k = s_{k-1}(1 - c_{k-1}) + c_k(1 - s_{k-1})
//   b_k = sqrt(c_k (1 - c_k) s_k (1 - s_{k-1}))
inline TridiagonalMatrix build_tridiagonal(const CoefficientDraw& draw) {
    const std::size_t n = draw.c.size();
    if (n == 0 || draw.s.size() + 1 != n)
        throw std::invalid_argument("build_tridiagonal: need n c-values and n-1 s-values");

    std::vector<double> a(n), b(n > 1 ? n - 1 : 0);
    double c_prev = 0.0;
    double s_prev = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        const double ck = draw.c[k];
        a[k] = s_prev * (1.0 - c_prev) + ck * (1.0 - s_prev);
        if (k + 1 < n) {
            const double sk = draw.s[k];
            b[k] = std::sqrt(ck * (1.0 - ck) * sk * (1.0 - s_prev));
            s_prev = sk;
        }
        c_prev = ck;
    }
    return make_tridiagonal(std::move(a), std::move(b));
}

// Entrywise affine rescaling ((p1+p2) J - p1 I)/sqrt(n p1); off-diagonals
// only scale. Eigenvalues map by the same affine transformation.
inline TridiagonalMatrix rescale(const TridiagonalMatrix& mat, const EnsembleParams& ep) {
    const double scale = (ep.p1 + ep.p2) / std::sqrt(static_cast<double>(ep.n) * ep.p1);
    const double shift = ep.p1 / std::sqrt(static_cast<double>(ep.n) * ep.p1);
    TridiagonalMatrix out = mat;
    for (double& d : out.diag) d = scale * d - shift;
    for (double& b : out.offdiag) b *= scale;
    return out;
}

inline TridiagonalMatrix sample_tridiagonal(const EnsembleParams& ep, const SeededStream& stream) {
    return build_tridiagonal(draw_coefficients(ep, stream));
}

inline TridiagonalMatrix sample_rescaled_tridiagonal(const EnsembleParams& ep,
                                                     const SeededStream& stream) {
    return rescale(sample_tridiagonal(ep, stream), ep);
}

} // namespace jacobi_spectra
