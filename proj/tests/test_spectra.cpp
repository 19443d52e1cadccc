#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "jacobi_spectra/detail/numeric.hpp"
#include "jacobi_spectra/rng.hpp"
#include "jacobi_spectra/spectra.hpp"

using namespace jacobi_spectra;

TEST_CASE("one by one matrix") {
    const SpectralMeasure mu = eigen_decompose(make_tridiagonal({3.25}, {}));
    REQUIRE(mu.size() == 1);
    CHECK(mu.atoms[0] == 3.25);
    CHECK(mu.weights[0] == 1.0);
}

TEST_CASE("two by two symmetric pair") {
    // [[0, 1], [1, 0]] has eigenvalues -1, 1 with first-coordinate weights 1/2 each.
    const SpectralMeasure mu = eigen_decompose(make_tridiagonal({0.0, 0.0}, {1.0}));
    REQUIRE(mu.size() == 2);
    CHECK(mu.atoms[0] == Catch::Approx(-1.0).margin(1e-14));
    CHECK(mu.atoms[1] == Catch::Approx(1.0).margin(1e-14));
    CHECK(mu.weights[0] == Catch::Approx(0.5).margin(1e-14));
    CHECK(mu.weights[1] == Catch::Approx(0.5).margin(1e-14));
}

TEST_CASE("three by three free Jacobi block") {
    // Zero diagonal, unit off-diagonals: spectrum {-sqrt2, 0, sqrt2},
    // spectral weights (1/4, 1/2, 1/4).
    const SpectralMeasure mu = eigen_decompose(make_tridiagonal({0.0, 0.0, 0.0}, {1.0, 1.0}));
    REQUIRE(mu.size() == 3);
    CHECK(mu.atoms[0] == Catch::Approx(-std::sqrt(2.0)).margin(1e-14));
    CHECK(mu.atoms[1] == Catch::Approx(0.0).margin(1e-14));
    CHECK(mu.atoms[2] == Catch::Approx(std::sqrt(2.0)).margin(1e-14));
    CHECK(mu.weights[0] == Catch::Approx(0.25).margin(1e-13));
    CHECK(mu.weights[1] == Catch::Approx(0.5).margin(1e-13));
    CHECK(mu.weights[2] == Catch::Approx(0.25).margin(1e-13));
}

TEST_CASE("moments by recurrence on the free block") {
    // <e1, J^k e1> for the zero-diagonal unit-offdiagonal matrix counts
    // Dyck-like paths: 1, 0, 1, 0, 2 for k = 0..4 at size 3.
    const TridiagonalMatrix m = make_tridiagonal({0.0, 0.0, 0.0}, {1.0, 1.0});
    const std::vector<double> mom = moments_by_recurrence(m, 4);
    REQUIRE(mom.size() == 5);
    CHECK(mom[0] == Catch::Approx(1.0).margin(1e-15));
    CHECK(mom[1] == Catch::Approx(0.0).margin(1e-15));
    CHECK(mom[2] == Catch::Approx(1.0).margin(1e-15));
    CHECK(mom[3] == Catch::Approx(0.0).margin(1e-15));
    CHECK(mom[4] == Catch::Approx(2.0).margin(1e-15));
}

TEST_CASE("recurrence moments equal spectral moments on random matrices") {
    SeededStream rng(321, 0);
    for (int trial = 0; trial < 5; ++trial) {
        std::vector<double> diag(8), off(7);
        for (double& d : diag) d = 2.0 * rng.u01() - 1.0;
        for (double& b : off) b = 0.1 + rng.u01();
        const TridiagonalMatrix m = make_tridiagonal(diag, off);
        const SpectralMeasure mu = eigen_decompose(m);
        const std::vector<double> mom = moments_by_recurrence(m, 12);
        for (std::size_t k = 0; k <= 12; ++k) {
            detail::compensated_sum s;
            for (std::size_t i = 0; i < mu.size(); ++i)
                s.add(mu.weights[i] * std::pow(mu.atoms[i], double(k)));
            CHECK(mom[k] == Catch::Approx(s.value()).epsilon(1e-9).margin(1e-9));
        }
    }
}

TEST_CASE("eigenvalue sums reproduce the trace") {
    SeededStream rng(322, 0);
    std::vector<double> diag(64), off(63);
    double trace = 0.0;
    for (double& d : diag) {
        d = rng.u01();
        trace += d;
    }
    for (double& b : off) b = rng.u01() + 0.05;
    const SpectralMeasure mu = eigen_decompose(make_tridiagonal(diag, off));
    double sum = 0.0, wsum = 0.0;
    for (std::size_t i = 0; i < mu.size(); ++i) {
        sum += mu.atoms[i];
        wsum += mu.weights[i];
    }
    CHECK(sum == Catch::Approx(trace).margin(1e-10 * 64));
    CHECK(wsum == Catch::Approx(1.0).margin(1e-12));
    for (double w : mu.weights) CHECK(w >= 0.0);
}

TEST_CASE("spectral and empirical measures differ by the weighting only") {
    const SpectralMeasure mu = eigen_decompose(make_tridiagonal({0.0, 0.0}, {1.0}));
    // Equal-weight case: gap zero.
    CHECK(kolmogorov_distance_spectral_vs_empirical(mu) == Catch::Approx(0.0).margin(1e-14));

    // Extreme weighting: all spectral mass on the first atom -> gap 1/2.
    const SpectralMeasure skew = make_spectral_measure({-1.0, 1.0}, {1.0, 0.0});
    CHECK(kolmogorov_distance_spectral_vs_empirical(skew) == Catch::Approx(0.5).margin(1e-14));
}

TEST_CASE("polynomial means agree between the two evaluation routes") {
    SeededStream rng(323, 0);
    const std::vector<double> poly{0.3, -1.0, 0.5, 0.25};  // ascending coefficients
    for (int trial = 0; trial < 4; ++trial) {
        std::vector<double> diag(12), off(11);
        for (double& d : diag) d = rng.u01();
        for (double& b : off) b = 0.05 + 0.5 * rng.u01();
        const TridiagonalMatrix m = make_tridiagonal(diag, off);
        const double via_recurrence = polynomial_mean_by_recurrence(m, poly);
        const double via_spectrum = polynomial_mean_by_spectrum(eigen_decompose(m), poly);
        CHECK(via_recurrence == Catch::Approx(via_spectrum).margin(1e-10));
    }
}

TEST_CASE("polynomial evaluation uses ascending coefficients") {
    CHECK(eval_polynomial({1.0, 2.0, 3.0}, 2.0) == Catch::Approx(17.0).margin(1e-15));
    CHECK(eval_polynomial({5.0}, 100.0) == 5.0);
}
