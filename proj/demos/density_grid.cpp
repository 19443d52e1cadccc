// Prints the limiting spectral density on its support for a few
// (gamma, sigma) pairs; pipe to a plotting tool of your choice.

#include <cstdio>

#include "jacobi_spectra/jacobi_spectra.hpp"

int main() {
    using namespace jacobi_spectra;

    const double pairs[][2] = {{0.5, 1.0}, {1.0, 1.0}, {0.5, 0.0}, {0.0, 0.0}};
    for (const auto& gs : pairs) {
        const LimitParams lp = make_limit_params(gs[0], gs[1]);
        const SupportInterval sup = support_of_limit(lp);
        std::printf("# gamma=%g sigma=%g regime=%s support=[%.6f, %.6f]\n", lp.gamma, lp.sigma,
                    regime_name(lp.regime), sup.lower, sup.upper);
        const int grid = 41;
        for (int i = 0; i < grid; ++i) {
            const double x = sup.lower + (sup.upper - sup.lower) * i / (grid - 1);
            std::printf("%.6f %.6f\n", x, modified_wachter_density(x, lp));
        }
        std::printf("\n");
    }
    return 0;
}
