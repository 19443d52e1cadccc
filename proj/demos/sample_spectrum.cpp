// Draws one rescaled tridiagonal matrix, prints its spectrum, and reports
// the Kolmogorov distance of the empirical measure to the limit law.

#include <cstdio>

#include "jacobi_spectra/jacobi_spectra.hpp"

int main() {
    using namespace jacobi_spectra;

    const LimitParams lp = make_limit_params(0.5, 1.0);
    const std::size_t n = 64;
    const EnsembleParams ep = ensemble_for(lp, n, 2.0);

    SeededStream stream(2024, 0);
    const TridiagonalMatrix J = sample_rescaled_tridiagonal(ep, stream);
    const SpectralMeasure mu = eigen_decompose(J);

    std::printf("n=%zu beta=%g p1=%g p2=%g\n", ep.n, ep.beta, ep.p1, ep.p2);
    for (std::size_t i = 0; i < mu.size(); ++i)
        std::printf("%3zu  %+.6f  weight %.6f\n", i + 1, mu.atoms[i], mu.weights[i]);

    const CdfTable cdf = reference_cdf(lp);
    std::printf("\nKS(empirical, limit) = %.4f\n",
                ks_distance(uniform_measure(mu.atoms), cdf));
    std::printf("KS(spectral, empirical) = %.4f\n",
                kolmogorov_distance_spectral_vs_empirical(mu));
    return 0;
}
