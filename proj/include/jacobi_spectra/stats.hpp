#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <mutex>
#include <stdexcept>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "jacobi_spectra/detail/numeric.hpp"
#include "jacobi_spectra/ensemble.hpp"
#include "jacobi_spectra/limit_laws.hpp"
#include "jacobi_spectra/quadrature.hpp"
#include "jacobi_spectra/rng.hpp"
#include "jacobi_spectra/sampler.hpp"
#include "jacobi_spectra/spectra.hpp"

namespace jacobi_spectra {

inline double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

// Kolmogorov distance between a finitely supported measure and a continuous
// CDF: both one-sided gaps at every atom.
template <typename Cdf>
double ks_distance(const SpectralMeasure& mu, const Cdf& cdf) {
    detail::compensated_sum cum;
    double prev = 0.0;
    double best = 0.0;
    for (std::size_t i = 0; i < mu.size(); ++i) {
        const double F = cdf(mu.atoms[i]);
        cum.add(mu.weights[i]);
        best = std::max(best, std::max(std::abs(F - cum.value()), std::abs(F - prev)));
        prev = cum.value();
    }
    return best;
}

// One-sample Kolmogorov distance of an iid sample against a continuous CDF.
template <typename Cdf>
double ks_of_sample(std::vector<double> sample, const Cdf& cdf) {
    if (sample.empty()) throw std::invalid_argument("ks_of_sample: empty sample");
    std::sort(sample.begin(), sample.end());
    const double n = static_cast<double>(sample.size());
    double best = 0.0;
    for (std::size_t i = 0; i < sample.size(); ++i) {
        const double F = cdf(sample[i]);
        best = std::max(best, std::max(std::abs(F - static_cast<double>(i) / n),
                                       std::abs(F - static_cast<double>(i + 1) / n)));
    }
    return best;
}

// L2 distance of quantile functions on a midpoint grid over (0,1).
template <typename Q1, typename Q2>
double wasserstein2_between_quantiles(const Q1& q1, const Q2& q2, std::size_t grid = 10000) {
    detail::compensated_sum acc;
    for (std::size_t j = 0; j < grid; ++j) {
        const double t = (static_cast<double>(j) + 0.5) / static_cast<double>(grid);
        acc.add(detail::square(q1(t) - q2(t)));
    }
    return std::sqrt(acc.value() / static_cast<double>(grid));
}

// Wasserstein-2 between a finitely supported measure (step quantile) and a
// reference quantile function.
template <typename Q>
double wasserstein2(const SpectralMeasure& mu, const Q& ref_quantile, std::size_t grid = 10000) {
    detail::compensated_sum acc;
    detail::compensated_sum cum;
    std::size_t idx = 0;
    double reach = mu.weights.empty() ? 1.0 : (cum.add(mu.weights[0]), cum.value());
    for (std::size_t j = 0; j < grid; ++j) {
        const double t = (static_cast<double>(j) + 0.5) / static_cast<double>(grid);
        while (t > reach && idx + 1 < mu.size()) {
            ++idx;
            cum.add(mu.weights[idx]);
            reach = cum.value();
        }
        acc.add(detail::square(mu.atoms[idx] - ref_quantile(t)));
    }
    return std::sqrt(acc.value() / static_cast<double>(grid));
}

// Deterministic parallel map over replicate indices: workers pull indices
// from a shared counter and write into caller-owned slots, so results do not
// depend on the worker count. The first exception is rethrown after join.
template <typename Fn>
void parallel_for_indexed(std::size_t count, unsigned threads, Fn&& fn) {
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, count));
    if (threads <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr first_error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (unsigned t = 0; t < threads; ++t) {
        pool.emplace_back([&] {
            for (;;) {
                const std::size_t i = next.fetch_add(1);
                if (i >= count) break;
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(error_mutex);
                    if (!first_error) first_error = std::current_exception();
                }
            }
        });
    }
    for (auto& th : pool) th.join();
    if (first_error) std::rethrow_exception(first_error);
}

// Finite proxy ensemble for a limit point: p1 = n/gamma (n^2 when gamma = 0),
// p2 = p1/sigma (p1^2 when sigma = 0). The 1/n-rate proxies keep beta*n and
// the ratios inside condition (H).
inline EnsembleParams ensemble_for(const LimitParams& lp, std::size_t n, double beta) {
    const double nd = static_cast<double>(n);
    const double p1 = lp.gamma > 0.0 ? nd / lp.gamma : nd * nd;
    const double p2 = lp.sigma > 0.0 ? p1 / lp.sigma : p1 * p1;
    return make_ensemble_params(beta, n, p1, p2);
}

// Cached CDF of the limit density on its support.
inline CdfTable reference_cdf(const LimitParams& lp, std::size_t cells = 4096) {
    const SupportInterval sup = support_of_limit(lp);
    return CdfTable([&](double x) { return modified_wachter_density(x, lp); }, sup.lower,
                    sup.upper, cells);
}

struct MetricCell {
    EnsembleParams ensemble;
    int reps = 0;
    int failures = 0;
    std::uint64_t master_seed = 0;
    std::uint64_t stream_base = 0;
    std::vector<std::pair<std::string, double>> metrics;

    double metric(const std::string& name) const {
        for (const auto& [key, value] : metrics)
            if (key == name) return value;
        throw std::out_of_range("MetricCell: no metric named " + name);
    }
};

struct ExperimentReport {
    std::string experiment;
    LimitParams limit;
    double beta = 0.0;
    int reps = 0;
    std::uint64_t master_seed = 0;
    std::vector<MetricCell> cells;
};

namespace detail {

inline std::uint64_t replicate_stream_id(std::size_t cell, std::size_t rep) {
    return (static_cast<std::uint64_t>(cell) << 32) | static_cast<std::uint64_t>(rep);
}

inline double median_of_valid(const std::vector<double>& values, const std::vector<char>& valid) {
    std::vector<double> good;
    good.reserve(values.size());
    for (std::size_t i = 0; i < values.size(); ++i)
        if (valid[i]) good.push_back(values[i]);
    return median(std::move(good));
}

} // namespace detail

// Distributional convergence harness: per n, median Kolmogorov distances of
// the empirical and spectral measures of the rescaled matrix against the
// limit CDF, plus the median spectral-vs-empirical gap. Eigensolver failures
// are counted per cell and excluded from the medians.
inline ExperimentReport convergence_experiment(const LimitParams& lp, double beta,
                                               const std::vector<std::size_t>& ns, int reps,
                                               std::uint64_t seed, unsigned threads = 0) {
    if (reps < 1) throw std::invalid_argument("convergence_experiment: reps must be >= 1");
    const CdfTable cdf = reference_cdf(lp);
    ExperimentReport report{"converge", lp, beta, reps, seed, {}};
    for (std::size_t ci = 0; ci < ns.size(); ++ci) {
        const EnsembleParams ep = ensemble_for(lp, ns[ci], beta);
        const std::size_t R = static_cast<std::size_t>(reps);
        std::vector<double> ks_emp(R, 0.0), ks_spec(R, 0.0), gap(R, 0.0);
        std::vector<char> valid(R, 0);
        parallel_for_indexed(R, threads, [&](std::size_t r) {
            SeededStream stream(seed, detail::replicate_stream_id(ci, r));
            const TridiagonalMatrix J = sample_rescaled_tridiagonal(ep, stream);
            try {
                const SpectralMeasure mu = eigen_decompose(J);
                ks_emp[r] = ks_distance(uniform_measure(mu.atoms), cdf);
                ks_spec[r] = ks_distance(mu, cdf);
                gap[r] = kolmogorov_distance_spectral_vs_empirical(mu);
                valid[r] = 1;
            } catch (const EigenConvergenceError&) {
                valid[r] = 0;
            }
        });
        MetricCell cell{ep, reps, 0, seed, detail::replicate_stream_id(ci, 0), {}};
        for (char v : valid)
            if (!v) ++cell.failures;
        cell.metrics.emplace_back("median_ks_empirical", detail::median_of_valid(ks_emp, valid));
        cell.metrics.emplace_back("median_ks_spectral", detail::median_of_valid(ks_spec, valid));
        cell.metrics.emplace_back("median_spectral_vs_empirical_gap",
                                  detail::median_of_valid(gap, valid));
        report.cells.push_back(std::move(cell));
    }
    return report;
}

// Extremal-eigenvalue harness: medians of the smallest and largest rescaled
// eigenvalues against the limit support endpoints; edge_scale = n^{-2/3} is
// the expected fluctuation scale.
inline ExperimentReport extremal_eigenvalue_check(const LimitParams& lp, double beta,
                                                  const std::vector<std::size_t>& ns, int reps,
                                                  std::uint64_t seed, unsigned threads = 0) {
    if (reps < 1) throw std::invalid_argument("extremal_eigenvalue_check: reps must be >= 1");
    const SupportInterval sup = support_of_limit(lp);
    ExperimentReport report{"extremal", lp, beta, reps, seed, {}};
    for (std::size_t ci = 0; ci < ns.size(); ++ci) {
        const EnsembleParams ep = ensemble_for(lp, ns[ci], beta);
        const std::size_t R = static_cast<std::size_t>(reps);
        std::vector<double> lo(R, 0.0), hi(R, 0.0);
        std::vector<char> valid(R, 0);
        parallel_for_indexed(R, threads, [&](std::size_t r) {
            SeededStream stream(seed, detail::replicate_stream_id(ci, r));
            const TridiagonalMatrix J = sample_rescaled_tridiagonal(ep, stream);
            try {
                const SpectralMeasure mu = eigen_decompose(J);
                lo[r] = mu.atoms.front();
                hi[r] = mu.atoms.back();
                valid[r] = 1;
            } catch (const EigenConvergenceError&) {
                valid[r] = 0;
            }
        });
        MetricCell cell{ep, reps, 0, seed, detail::replicate_stream_id(ci, 0), {}};
        for (char v : valid)
            if (!v) ++cell.failures;
        const double med_lo = detail::median_of_valid(lo, valid);
        const double med_hi = detail::median_of_valid(hi, valid);
        cell.metrics.emplace_back("median_min", med_lo);
        cell.metrics.emplace_back("median_max", med_hi);
        cell.metrics.emplace_back("support_lower", sup.lower);
        cell.metrics.emplace_back("support_upper", sup.upper);
        cell.metrics.emplace_back("abs_dev_min", std::abs(med_lo - sup.lower));
        cell.metrics.emplace_back("abs_dev_max", std::abs(med_hi - sup.upper));
        cell.metrics.emplace_back("edge_scale",
                                  std::pow(static_cast<double>(ns[ci]), -2.0 / 3.0));
        report.cells.push_back(std::move(cell));
    }
    return report;
}

// Fluctuation harness for linear statistics <mu_n, p>: per n, the variance of
// S = sqrt(beta' n)(<mu_n,p> - sample mean), sample skewness and excess
// kurtosis, and the Kolmogorov distance of the standardized sample to the
// normal law. Every cross_check_stride-th replicate recomputes <mu_n, p>
// through the eigendecomposition; the maximal two-route gap is reported.
inline ExperimentReport clt_experiment(const LimitParams& lp, double beta,
                                       const std::vector<std::size_t>& ns,
                                       const std::vector<double>& poly_ascending, int reps,
                                       std::uint64_t seed, unsigned threads = 0,
                                       std::size_t cross_check_stride = 1) {
    if (reps < 2) throw std::invalid_argument("clt_experiment: reps must be >= 2");
    if (poly_ascending.empty()) throw std::invalid_argument("clt_experiment: empty polynomial");
    ExperimentReport report{"clt", lp, beta, reps, seed, {}};
    for (std::size_t ci = 0; ci < ns.size(); ++ci) {
        const EnsembleParams ep = ensemble_for(lp, ns[ci], beta);
        const std::size_t R = static_cast<std::size_t>(reps);
        std::vector<double> stat(R, 0.0), route_gap(R, 0.0);
        std::vector<char> valid(R, 0);
        parallel_for_indexed(R, threads, [&](std::size_t r) {
            SeededStream stream(seed, detail::replicate_stream_id(ci, r));
            const TridiagonalMatrix J = sample_rescaled_tridiagonal(ep, stream);
            stat[r] = polynomial_mean_by_recurrence(J, poly_ascending);
            valid[r] = 1;
            if (cross_check_stride > 0 && r % cross_check_stride == 0) {
                try {
                    const SpectralMeasure mu = eigen_decompose(J);
                    route_gap[r] =
                        std::abs(stat[r] - polynomial_mean_by_spectrum(mu, poly_ascending));
                } catch (const EigenConvergenceError&) {
                    valid[r] = 0;
                }
            }
        });

        MetricCell cell{ep, reps, 0, seed, detail::replicate_stream_id(ci, 0), {}};
        for (char v : valid)
            if (!v) ++cell.failures;

        detail::compensated_sum mean_acc;
        for (double m : stat) mean_acc.add(m);
        const double mean = mean_acc.value() / static_cast<double>(R);
        detail::compensated_sum m2, m3, m4;
        for (double m : stat) {
            const double d = m - mean;
            m2.add(d * d);
            m3.add(d * d * d);
            m4.add(d * d * d * d);
        }
        const double var = m2.value() / static_cast<double>(R - 1);
        const double sd = std::sqrt(var);
        const double central2 = m2.value() / static_cast<double>(R);
        const double skew =
            m3.value() / static_cast<double>(R) / std::pow(central2, 1.5);
        const double exkurt =
            m4.value() / static_cast<double>(R) / (central2 * central2) - 3.0;

        std::vector<double> standardized;
        standardized.reserve(R);
        for (double m : stat) standardized.push_back((m - mean) / sd);
        const double ks = ks_of_sample(std::move(standardized),
                                       [](double x) { return normal_cdf(x); });

        const double scale = ep.beta_prime() * static_cast<double>(ep.n);
        double max_gap = 0.0;
        for (double gp : route_gap) max_gap = std::max(max_gap, gp);

        cell.metrics.emplace_back("mean_statistic", mean);
        cell.metrics.emplace_back("variance_rescaled", scale * var);
        cell.metrics.emplace_back("skewness", skew);
        cell.metrics.emplace_back("excess_kurtosis", exkurt);
        cell.metrics.emplace_back("ks_standardized_normal", ks);
        cell.metrics.emplace_back("crosscheck_max_abs_diff", max_gap);
        report.cells.push_back(std::move(cell));
    }
    return report;
}

} // namespace jacobi_spectra
