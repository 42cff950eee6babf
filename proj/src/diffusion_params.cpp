#include "smashline/diffusion_params.hpp"

namespace smashline {

void validate(const DiffusionParams& p) {
  if (p.alpha1 < 0.0) {
    throw ValidationError("diffusion params: alpha1 must be >= 0");
  }
  if (p.t < 0.0) throw ValidationError("diffusion params: t must be >= 0");
}

OperatorCoefficients generator_coefficients(const DiffusionParams& p,
                                            GeneratorVariant v) {
  validate(p);
  OperatorCoefficients c;
  c.dx = -p.c1;
  c.dxx = p.alpha1;
  c.dstar = Complex{p.c2, 0.0};
  c.dstar2 = p.alpha2;
  if (v == GeneratorVariant::nonstationary) {
    c.dx += p.lambda * p.d1;
    c.dstar -= Complex{p.lambda_tilde * p.d2, 0.0};
  }
  return c;
}

}  // namespace smashline
