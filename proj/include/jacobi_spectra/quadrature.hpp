#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "jacobi_spectra/detail/numeric.hpp"

namespace jacobi_spectra {

namespace detail {

template <typename F>
double adaptive_simpson_impl(const F& f, double a, double b, double fa, double fm, double fb,
                             double whole, double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = f(lm);
    const double frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol)
        return left + right + delta / 15.0;
    return adaptive_simpson_impl(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           adaptive_simpson_impl(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

} // namespace detail

// Adaptive Simpson with Richardson-style acceptance (error estimate delta/15).
template <typename F>
double adaptive_simpson(const F& f, double a, double b, double tol = 1e-10, int max_depth = 48) {
    if (!(a < b)) return 0.0;
    const double fa = f(a);
    const double fb = f(b);
    const double fm = f(0.5 * (a + b));
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return detail::adaptive_simpson_impl(f, a, b, fa, fm, fb, whole, tol, max_depth);
}

// Integral of f over [lo, hi] under x = lo + (hi-lo) sin^2(theta); square-root
// endpoint behavior of f becomes a smooth integrand in theta. A non-finite
// product at a node (an endpoint pole times the vanishing Jacobian) counts
// as 0: the theta-integrand extends continuously there.
//
// The strips within theta_min of the endpoints are closed by rectangles
// instead of sampled: within ~sqrt(ulp) of an edge the node x rounds onto
// the edge and a hard-edge 1/sqrt(dist) integrand loses its tail mass
// (~1e-8 of the total). At theta_min ~ ulp^{1/4} the evaluation is still
// ~1e-8-accurate relative and the O(theta^2) strip model error is ~1e-12,
// assuming edge coordinates of order 1.
template <typename F>
double integrate_with_sqrt_endpoints(const F& f, double lo, double hi, double tol = 1e-11) {
    if (!(lo < hi)) return 0.0;
    const double width = hi - lo;
    const auto g = [&](double theta) {
        const double s = std::sin(theta);
        const double x = lo + width * s * s;
        const double val = f(x) * width * std::sin(2.0 * theta);
        return std::isfinite(val) ? val : 0.0;
    };
    constexpr double half_pi = 1.5707963267948966;
    constexpr double theta_min = 1.2e-4;
    const double core = adaptive_simpson(g, theta_min, half_pi - theta_min, tol);
    return core + theta_min * (g(theta_min) + g(half_pi - theta_min));
}

// k-th raw moment of a density on [lo, hi].
template <typename F>
double moment_with_sqrt_endpoints(const F& density, double lo, double hi, unsigned k,
                                  double tol = 1e-11) {
    return integrate_with_sqrt_endpoints(
        [&](double x) {
            double xk = 1.0;
            for (unsigned i = 0; i < k; ++i) xk *= x;
            return xk * density(x);
        },
        lo, hi, tol);
}

// Cached CDF of a density on [lo, hi]: per-cell Simpson on a sin^2-spaced
// grid (nodes cluster at the endpoints where the laws have square-root
// edges), monotone cubic (Fritsch-Carlson) interpolation in between.
class CdfTable {
public:
    template <typename F>
    CdfTable(const F& density, double lo, double hi, std::size_t cells = 4096)
        : lo_(lo), hi_(hi) {
        if (!(lo < hi)) throw std::invalid_argument("CdfTable: empty support");
        if (cells < 8) throw std::invalid_argument("CdfTable: too few cells");
        const double width = hi - lo;
        constexpr double half_pi = 1.5707963267948966;
        const double h = half_pi / static_cast<double>(cells);
        const auto g = [&](double theta) {
            const double s = std::sin(theta);
            const double x = lo + width * s * s;
            const double val = density(x) * width * std::sin(2.0 * theta);
            return std::isfinite(val) ? val : 0.0;
        };

        x_.resize(cells + 1);
        cdf_.resize(cells + 1);
        for (std::size_t j = 0; j <= cells; ++j) {
            const double s = std::sin(h * static_cast<double>(j));
            x_[j] = lo + width * s * s;
        }
        x_.front() = lo;
        x_.back() = hi;

        detail::compensated_sum acc;
        cdf_[0] = 0.0;
        double g_left = g(0.0);
        for (std::size_t j = 0; j < cells; ++j) {
            const double tl = h * static_cast<double>(j);
            const double tm = tl + 0.5 * h;
            const double tr = tl + h;
            const double g_mid = g(tm);
            const double g_right = g(tr);
            acc.add(h / 6.0 * (g_left + 4.0 * g_mid + g_right));
            cdf_[j + 1] = acc.value();
            g_left = g_right;
        }
        mass_ = cdf_.back();
        if (!(mass_ > 0.0)) throw std::invalid_argument("CdfTable: density integrates to zero");
        for (double& v : cdf_) v /= mass_;
        cdf_.back() = 1.0;
        build_slopes();
    }

    double lower() const { return lo_; }
    double upper() const { return hi_; }

    // Raw integral of the density before normalization.
    double mass() const { return mass_; }

    double operator()(double x) const { return cdf(x); }

    double cdf(double x) const {
        if (x <= lo_) return 0.0;
        if (x >= hi_) return 1.0;
        const std::size_t j = locate(x);
        return hermite(j, x);
    }

    // Inverse CDF by bisection on the monotone cubic; t outside [0,1] clamps.
    double quantile(double t) const {
        if (t <= 0.0) return lo_;
        if (t >= 1.0) return hi_;
        std::size_t lo_idx = 0, hi_idx = cdf_.size() - 1;
        while (hi_idx - lo_idx > 1) {
            const std::size_t mid = (lo_idx + hi_idx) / 2;
            if (cdf_[mid] <= t)
                lo_idx = mid;
            else
                hi_idx = mid;
        }
        double a = x_[lo_idx], b = x_[hi_idx];
        for (int it = 0; it < 64 && b - a > 1e-15 * (1.0 + std::abs(a)); ++it) {
            const double mid = 0.5 * (a + b);
            if (hermite(lo_idx, mid) <= t)
                a = mid;
            else
                b = mid;
        }
        return 0.5 * (a + b);
    }

private:
    std::size_t locate(double x) const {
        const auto it = std::upper_bound(x_.begin(), x_.end(), x);
        const std::size_t j = static_cast<std::size_t>(it - x_.begin());
        return std::min(std::max<std::size_t>(j, 1) - 1, x_.size() - 2);
    }

    double hermite(std::size_t j, double x) const {
        const double hj = x_[j + 1] - x_[j];
        if (hj <= 0.0) return cdf_[j];
        const double t = (x - x_[j]) / hj;
        const double t2 = t * t;
        const double t3 = t2 * t;
        const double h00 = 2.0 * t3 - 3.0 * t2 + 1.0;
        const double h10 = t3 - 2.0 * t2 + t;
        const double h01 = -2.0 * t3 + 3.0 * t2;
        const double h11 = t3 - t2;
        return h00 * cdf_[j] + h10 * hj * slope_[j] + h01 * cdf_[j + 1] + h11 * hj * slope_[j + 1];
    }

    // Fritsch-Carlson slopes: weighted harmonic means of neighbor secants,
    // zero at local extrema, endpoint slopes clamped to preserve monotonicity.
    void build_slopes() {
        const std::size_t n = x_.size();
        slope_.assign(n, 0.0);
        std::vector<double> dx(n - 1), sec(n - 1);
        for (std::size_t j = 0; j + 1 < n; ++j) {
            dx[j] = x_[j + 1] - x_[j];
            sec[j] = dx[j] > 0.0 ? (cdf_[j + 1] - cdf_[j]) / dx[j] : 0.0;
        }
        for (std::size_t j = 1; j + 1 < n; ++j) {
            if (sec[j - 1] * sec[j] <= 0.0) {
                slope_[j] = 0.0;
            } else {
                const double w1 = 2.0 * dx[j] + dx[j - 1];
                const double w2 = dx[j] + 2.0 * dx[j - 1];
                slope_[j] = (w1 + w2) / (w1 / sec[j - 1] + w2 / sec[j]);
            }
        }
        slope_[0] = endpoint_slope(dx[0], dx[1], sec[0], sec[1]);
        slope_[n - 1] = endpoint_slope(dx[n - 2], dx[n - 3], sec[n - 2], sec[n - 3]);
    }

    static double endpoint_slope(double h0, double h1, double s0, double s1) {
        double m = ((2.0 * h0 + h1) * s0 - h0 * s1) / (h0 + h1);
        if (m * s0 <= 0.0) return 0.0;
        if (std::abs(m) > 3.0 * std::abs(s0)) return 3.0 * s0;
        return m;
    }

    double lo_;
    double hi_;
    double mass_ = 0.0;
    std::vector<double> x_;
    std::vector<double> cdf_;
    std::vector<double> slope_;
};

} // namespace jacobi_spectra
