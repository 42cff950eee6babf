#pragma once

#include "smashline/deformation.hpp"

namespace smashline {

// Continuum-limit parameters of the coupled drift–diffusion system.
// alpha2 is complex: it equals theta^2 n / ([2]_q t) under the continuum
// substitutions and [2]_q is complex for every N >= 3.
struct DiffusionParams {
  double c1 = 0.0;          // x drift
  double alpha1 = 1.0;      // x diffusivity, > 0
  double c2 = 0.0;          // xi drift
  Complex alpha2{0.0, 0.0}; // xi diffusivity
  double lambda = 0.0;      // Hamiltonian x-drift constant
  double lambda_tilde = 0.0; // Hamiltonian xi-drift constant
  double d1 = 1.0;
  double d2 = 1.0;
  double t = 1.0;           // >= 0
};

void validate(const DiffusionParams& p);

enum class GeneratorVariant { stationary, nonstationary };

// Coefficients of the evolution generator acting on densities:
//   dx * D_x + dxx * D_x^2 + dstar * D_xi^* + dstar2 * D_xi^{*2}.
// The non-stationary variant gains (+lambda d1) on D_x and (-lambda_tilde d2)
// on D_xi^* relative to the stationary one.
struct OperatorCoefficients {
  double dx = 0.0;
  double dxx = 0.0;
  Complex dstar{0.0, 0.0};
  Complex dstar2{0.0, 0.0};
};

OperatorCoefficients generator_coefficients(const DiffusionParams& p,
                                            GeneratorVariant v);

}  // namespace smashline
