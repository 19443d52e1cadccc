#pragma once

#include "jacobi_spectra/ensemble.hpp"
#include "jacobi_spectra/jacobi_coeff.hpp"
#include "jacobi_spectra/ldp.hpp"
#include "jacobi_spectra/limit_laws.hpp"
#include "jacobi_spectra/quadrature.hpp"
#include "jacobi_spectra/rng.hpp"
#include "jacobi_spectra/sampler.hpp"
#include "jacobi_spectra/serialization.hpp"
#include "jacobi_spectra/spectra.hpp"
#include "jacobi_spectra/stats.hpp"
