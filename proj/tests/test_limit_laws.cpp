#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <vector>

#include "jacobi_spectra/limit_laws.hpp"
#include "jacobi_spectra/quadrature.hpp"
#include "jacobi_spectra/spectra.hpp"
#include "jacobi_spectra/stats.hpp"

using namespace jacobi_spectra;

namespace {

LimitParams bulk(double g, double s) { return make_limit_params(g, s); }

double law_mass(const LimitParams& lp) {
    const SupportInterval sup = support_of_limit(lp);
    return integrate_with_sqrt_endpoints(
        [&](double x) { return modified_wachter_density(x, lp); }, sup.lower, sup.upper);
}

}  // namespace

TEST_CASE("wachter law pointwise values") {
    // gamma = sigma = 1 collapses to the arcsine law on [0, 1].
    CHECK(wachter_density(0.5, 1.0, 1.0) == Catch::Approx(2.0 / pi).margin(1e-13));
    CHECK(wachter_density(0.25, 1.0, 1.0) ==
          Catch::Approx(1.0 / (pi * std::sqrt(0.25 * 0.75))).margin(1e-12));

    const SupportInterval sup = wachter_support(0.5, 0.5);
    const double root = std::sqrt(1.0 - 0.25 / 1.5) - std::sqrt(0.5 / 1.5);
    CHECK(sup.lower == Catch::Approx((0.5 / 1.5) * root * root).margin(1e-12));
    CHECK(wachter_density(sup.lower - 1e-6, 0.5, 0.5) == 0.0);
    CHECK(wachter_density(sup.upper + 1e-6, 0.5, 0.5) == 0.0);

    CHECK_THROWS_AS(wachter_density(0.5, 0.0, 0.5), std::domain_error);
    CHECK_THROWS_AS(wachter_density(0.5, 0.8, 2.0), std::domain_error);
}

TEST_CASE("marchenko-pastur law pointwise values") {
    // Square case gamma = 1: density sqrt((4 - x) / x) / (2 pi).
    CHECK(marchenko_pastur_density(1.0, 1.0) ==
          Catch::Approx(std::sqrt(3.0) / (2.0 * pi)).margin(1e-13));
    CHECK(marchenko_pastur_density(1.0, 1.0) ==
          Catch::Approx(0.27566444771089593).margin(1e-13));

    const SupportInterval sup = marchenko_pastur_support(0.25);
    CHECK(sup.lower == Catch::Approx(0.25).margin(1e-13));
    CHECK(sup.upper == Catch::Approx(2.25).margin(1e-13));
    CHECK(marchenko_pastur_density(0.2, 0.25) == 0.0);
    CHECK_THROWS_AS(marchenko_pastur_density(1.0, 1.5), std::domain_error);
    CHECK_THROWS_AS(marchenko_pastur_density(1.0, 0.0), std::domain_error);
}

TEST_CASE("rescaled limit density pointwise values") {
    // gamma = 0 branch is a semicircle with radius 2 / sqrt(1 + sigma).
    CHECK(modified_wachter_density(0.0, make_limit_params(0.0, 0.0)) ==
          Catch::Approx(1.0 / pi).margin(1e-13));
    CHECK(modified_wachter_density(0.0, make_limit_params(0.0, 1.0)) ==
          Catch::Approx(std::sqrt(2.0) / pi).margin(1e-13));
    CHECK(modified_wachter_density(0.0, make_limit_params(0.0, 1.0)) ==
          Catch::Approx(0.4501581580785531).margin(1e-13));

    // Bulk with gamma = sigma = 1: arcsine law on [-1, 1].
    const LimitParams ar = bulk(1.0, 1.0);
    CHECK(modified_wachter_density(0.0, ar) == Catch::Approx(1.0 / pi).margin(1e-12));
    CHECK(modified_wachter_density(0.5, ar) ==
          Catch::Approx(1.0 / (pi * std::sqrt(0.75))).margin(1e-12));

    // Outside the support the density vanishes.
    const LimitParams lp = bulk(0.5, 1.0);
    const SupportInterval sup = support_of_limit(lp);
    CHECK(modified_wachter_density(sup.lower - 1e-9, lp) == 0.0);
    CHECK(modified_wachter_density(sup.upper + 1e-9, lp) == 0.0);
}

TEST_CASE("support endpoints") {
    const SupportInterval s11 = support_of_limit(bulk(1.0, 1.0));
    CHECK(s11.lower == Catch::Approx(-1.0).margin(1e-13));
    CHECK(s11.upper == Catch::Approx(1.0).margin(1e-13));

    const SupportInterval s00 = support_of_limit(make_limit_params(0.0, 0.0));
    CHECK(s00.lower == Catch::Approx(-2.0).margin(1e-13));
    CHECK(s00.upper == Catch::Approx(2.0).margin(1e-13));

    const SupportInterval s01 = support_of_limit(make_limit_params(0.0, 1.0));
    CHECK(s01.upper == Catch::Approx(std::sqrt(2.0)).margin(1e-13));

    const SupportInterval shalf = support_of_limit(bulk(0.5, 1.0));
    CHECK(shalf.lower == Catch::Approx(-std::sqrt(1.5)).margin(1e-13));
    CHECK(shalf.upper == Catch::Approx(std::sqrt(1.5)).margin(1e-13));
}

TEST_CASE("limit laws are probability densities") {
    for (const LimitParams& lp :
         {bulk(0.5, 1.0), bulk(1.0, 1.0), bulk(0.25, 0.5), make_limit_params(1.0, 0.0),
          make_limit_params(0.5, 0.0), make_limit_params(0.0, 0.0),
          make_limit_params(0.0, 1.5)}) {
        CHECK(law_mass(lp) == Catch::Approx(1.0).margin(1e-8));
    }
    CHECK(integrate_with_sqrt_endpoints([](double x) { return wachter_density(x, 0.5, 0.5); },
                                        wachter_support(0.5, 0.5).lower,
                                        wachter_support(0.5, 0.5).upper) ==
          Catch::Approx(1.0).margin(1e-8));
    CHECK(integrate_with_sqrt_endpoints(
              [](double x) { return marchenko_pastur_density(x, 0.7); },
              marchenko_pastur_support(0.7).lower, marchenko_pastur_support(0.7).upper) ==
          Catch::Approx(1.0).margin(1e-8));
}

TEST_CASE("limiting Jacobi coefficients") {
    const LimitJacobiParams free_jp = limiting_jacobi(make_limit_params(0.0, 0.0));
    CHECK(free_jp.alpha0 == 0.0);
    CHECK(free_jp.beta0 == Catch::Approx(1.0).margin(1e-15));
    CHECK(free_jp.alpha1 == 0.0);
    CHECK(free_jp.beta1 == Catch::Approx(1.0).margin(1e-15));

    const LimitJacobiParams jp11 = limiting_jacobi(bulk(1.0, 1.0));
    CHECK(jp11.beta0 == Catch::Approx(1.0 / std::sqrt(2.0)).margin(1e-15));
    CHECK(jp11.alpha1 == Catch::Approx(0.0).margin(1e-15));
    CHECK(jp11.beta1 == Catch::Approx(0.5).margin(1e-15));

    const LimitJacobiParams jph = limiting_jacobi(bulk(0.5, 1.0));
    CHECK(jph.beta0 == Catch::Approx(1.0 / std::sqrt(2.0)).margin(1e-15));
    CHECK(jph.beta1 == Catch::Approx(0.6123724356957945).margin(1e-15));

    // The law's support is always [alpha1 - 2 beta1, alpha1 + 2 beta1].
    for (const LimitParams& lp : {bulk(0.5, 1.0), bulk(0.8, 0.3), make_limit_params(1.0, 0.0),
                                  make_limit_params(0.0, 0.7)}) {
        const LimitJacobiParams jp = limiting_jacobi(lp);
        const SupportInterval sup = support_of_limit(lp);
        CHECK(sup.lower == Catch::Approx(jp.alpha1 - 2.0 * jp.beta1).margin(1e-13));
        CHECK(sup.upper == Catch::Approx(jp.alpha1 + 2.0 * jp.beta1).margin(1e-13));
    }
}

TEST_CASE("limit Jacobi matrix truncation layout") {
    const LimitJacobiParams jp = limiting_jacobi(bulk(0.5, 1.0));
    const TridiagonalMatrix m = limit_jacobi_matrix(jp, 5);
    REQUIRE(m.size() == 5);
    CHECK(m.diag[0] == jp.alpha0);
    CHECK(m.offdiag[0] == jp.beta0);
    for (std::size_t i = 1; i < 5; ++i) CHECK(m.diag[i] == jp.alpha1);
    for (std::size_t i = 1; i < 4; ++i) CHECK(m.offdiag[i] == jp.beta1);

    const auto [a, b] = limit_coefficient_arrays(jp, 3);
    REQUIRE(a.size() == 3);
    REQUIRE(b.size() == 3);
    CHECK(a[0] == jp.alpha0);
    CHECK(b[0] == jp.beta0);
    CHECK(a[2] == jp.alpha1);
    CHECK(b[2] == jp.beta1);
}

TEST_CASE("m function of the free matrix matches the semicircle transform") {
    // For the semicircle, m(z) = (-z + sqrt(z^2 - 4)) / 2; at z = 2i this is
    // (sqrt(2) - 1) i.
    const LimitJacobiParams jp = limiting_jacobi(make_limit_params(0.0, 0.0));
    const std::complex<double> m = m_function(std::complex<double>(0.0, 2.0), jp);
    CHECK(m.real() == Catch::Approx(0.0).margin(1e-13));
    CHECK(m.imag() == Catch::Approx(0.41421356237309515).margin(1e-13));
}

TEST_CASE("m function is Herglotz and satisfies its defining identities") {
    for (const LimitParams& lp : {bulk(0.5, 1.0), bulk(1.0, 1.0), bulk(0.3, 0.4),
                                  make_limit_params(1.0, 0.0), make_limit_params(0.0, 0.5)}) {
        const LimitJacobiParams jp = limiting_jacobi(lp);
        for (double im : {0.1, 1.0, 10.0}) {
            for (int i = 0; i < 100; ++i) {
                const double re = -5.0 + 10.0 * double(i) / 99.0;
                const std::complex<double> z(re, im);
                const std::complex<double> m = m_function(z, jp);
                REQUIRE(m.imag() > 0.0);

                // Recover m1 from the outer resolvent step, then check the
                // quadratic fixed-point equation for the constant tail.
                const std::complex<double> m1 =
                    (-1.0 / m - (z - jp.alpha0)) / (jp.beta0 * jp.beta0);
                const std::complex<double> residual =
                    jp.beta1 * jp.beta1 * m1 * m1 + (z - jp.alpha1) * m1 + 1.0;
                REQUIRE(std::abs(residual) < 1e-12);
                REQUIRE(m1.imag() > 0.0);
            }
        }
    }
    CHECK_THROWS_AS(
        m_function(std::complex<double>(0.0, -1.0), limiting_jacobi(bulk(0.5, 1.0))),
        std::domain_error);
}

TEST_CASE("closed-form spectral density matches the rescaled limit law") {
    // The spectral measure of the limiting Jacobi operator is the limit law
    // itself, so the two independently coded densities must agree.
    for (const LimitParams& lp :
         {bulk(0.5, 1.0), bulk(1.0, 1.0), bulk(0.25, 0.5), make_limit_params(1.0, 0.0),
          make_limit_params(0.3, 0.0), make_limit_params(0.0, 0.0),
          make_limit_params(0.0, 1.0)}) {
        const LimitJacobiParams jp = limiting_jacobi(lp);
        const SupportInterval sup = support_of_limit(lp);
        for (int i = 1; i < 40; ++i) {
            const double x = sup.lower + sup.width() * double(i) / 40.0;
            const double closed = spectral_density_closed_form(x, jp);
            const double law = modified_wachter_density(x, lp);
            REQUIRE(closed == Catch::Approx(law).epsilon(1e-9).margin(1e-11));
        }
        CHECK(spectral_density_closed_form(sup.upper + 0.1, jp) == 0.0);
    }
}

TEST_CASE("density recovered from the m function matches the closed form") {
    const LimitParams lp = bulk(0.5, 1.0);
    const LimitJacobiParams jp = limiting_jacobi(lp);
    const SupportInterval sup = support_of_limit(lp);
    for (int i = 0; i < 21; ++i) {
        // Stay away from the sqrt edges where extrapolation degrades.
        const double x = sup.lower + sup.width() * (0.15 + 0.7 * double(i) / 20.0);
        const DensityFromM d = density_from_m(x, jp);
        CHECK(d.converged);
        CHECK(d.value == Catch::Approx(spectral_density_closed_form(x, jp)).margin(2e-6));
    }
}

TEST_CASE("moments of the law match truncated-operator moments") {
    const LimitParams lp = bulk(0.5, 1.0);
    const LimitJacobiParams jp = limiting_jacobi(lp);
    const SupportInterval sup = support_of_limit(lp);
    const TridiagonalMatrix trunc = limit_jacobi_matrix(jp, 200);
    const std::vector<double> op_moments = moments_by_recurrence(trunc, 8);
    for (std::size_t k = 0; k <= 8; ++k) {
        const double quad = moment_with_sqrt_endpoints(
            [&](double x) { return modified_wachter_density(x, lp); }, sup.lower, sup.upper,
            unsigned(k));
        CHECK(quad == Catch::Approx(op_moments[k]).margin(1e-6));
    }
}

TEST_CASE("laws deform continuously in Wasserstein distance") {
    // As sigma -> 0 the bulk law at gamma = 1/2 approaches the sigma = 0 law.
    const LimitParams target = make_limit_params(0.5, 0.0);
    const SupportInterval tsup = support_of_limit(target);
    const CdfTable ref([&](double x) { return modified_wachter_density(x, target); },
                       tsup.lower, tsup.upper);
    double previous = std::numeric_limits<double>::infinity();
    for (double s : {0.2, 0.1, 0.05}) {
        const LimitParams lp = bulk(0.5, s);
        const SupportInterval sup = support_of_limit(lp);
        const CdfTable tab([&](double x) { return modified_wachter_density(x, lp); },
                           sup.lower, sup.upper);
        const double w2 = wasserstein2_between_quantiles(
            [&](double t) { return tab.quantile(t); },
            [&](double t) { return ref.quantile(t); });
        CHECK(w2 < previous);
        previous = w2;
    }
    CHECK(previous < 0.1);
}
