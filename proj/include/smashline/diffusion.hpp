#pragma once

#include <functional>
#include <vector>

#include "smashline/matrix_realization.hpp"
#include "smashline/qcalculus.hpp"
#include "smashline/random_walk.hpp"

namespace smashline {

// Inverts the continuum substitutions tying the n-step walk to the limit:
//   c1 = 2a(p1 - 1/2) n/t,  alpha1 = a^2 n / (2t),
//   c2 = 2theta(p2 - 1/2) n/t,  alpha2 = theta^2 n / ([2]_q t).
// At N = 2, [2]_q = 0 and alpha2 is undefined: rejected explicitly (the
// xi-sector second-order coupling needs two superdiagonals, which a 2x2
// realization does not have).
DiffusionParams continuum_params(const StepDensity& s, int n, double t,
                                 const Deformation& d);

// Forward map for consistency checks: the step density that realizes the
// given (c1, alpha1, c2-if-possible) targets after n steps of duration t/n.
StepDensity steps_for_continuum(const DiffusionParams& p, int n,
                                const Deformation& d);

// Drifted heat kernel (4 pi alpha1 t)^{-1/2} exp(-(x - c1 t)^2 / (4 alpha1 t));
// unit total mass, satisfies the x-sector of the density evolution.
double gaussian_solution(double x, double t, const DiffusionParams& p);

// Variant with the (4 pi alpha1 t)^{-1} prefactor. Not mass-normalized and
// does not satisfy the evolution equation; kept for the verification ledger.
double gaussian_solution_alt_prefactor(double x, double t,
                                       const DiffusionParams& p);

// The tabulated xi-sector profile
//   sum_{k<N} theta^{N-1-k} sum_{l<k/2} (c2 t)^{k-l} (alpha2/c2)^l [k]_q! / (l!(k-2l)!)
// with the empty k = 0 inner sum read as the single l = 0 term, so the t = 0
// boundary value is theta^{N-1}. Untrusted: compare against
// xi_sector_oracle. Requires c2 != 0 (the formula divides by it).
Complex xi_closed_form(double theta, double t, const DiffusionParams& p,
                       const Deformation& d);

// Authoritative xi-sector solution: exp(t (c2 D* + alpha2 D*^2)) applied to
// the initial coefficient vector via the exact nilpotent series.
XiPolynomial xi_sector_oracle(double t, const DiffusionParams& p,
                              const Deformation& d, const XiPolynomial& initial,
                              DstarVariant variant = DstarVariant::printed);

// Same with the default initial density xi^{N-1} (coefficient vector e_{N-1}).
XiPolynomial xi_sector_oracle(double t, const DiffusionParams& p,
                              const Deformation& d,
                              DstarVariant variant = DstarVariant::printed);

// Limiting n->infinity walk functional evaluated on a polynomial observable:
// the x-part applies exp(t(c1 D_x + alpha1 D_x^2)) (exact finite Taylor
// series on polynomials), the xi-part exp(t(c2 D_xi + alpha2 D_xi^2)) (exact
// nilpotent series), and the constant term of the result is returned. Each
// sector term of the underlying three-term functional acts on the matching
// (pure-x / pure-xi / mixed) part of the observable, so nothing is counted
// twice and d/dt phi(f) = phi(Gf) holds.
Complex phi_infinity(const SmashElement& f, const DiffusionParams& p,
                     const Deformation& d);

// Literal additive reading: each sector exponential applied to the whole
// observable and the three constant terms summed. Double-counts pure
// sectors (phi(1) = 3); kept for the verification ledger.
Complex phi_infinity_additive(const SmashElement& f, const DiffusionParams& p,
                              const Deformation& d);

// Generator image (c1 D_x + alpha1 D_x^2 + c2 D_xi + alpha2 D_xi^2) f of an
// observable, used by the d/dt consistency check.
SmashElement apply_function_generator(const SmashElement& f,
                                      const DiffusionParams& p,
                                      const Deformation& d);

// Pointwise residual |d_t rho - (generator) rho| on the interior grid
// points, maximized over components. rho is sampled through the callable
// (component k, x, t); x-derivatives by second-order central differences
// with spacing dx, the time derivative by central differences with step
// dt_fd, the xi-part exactly through the component coupling matrix of the
// selected D* variant.
struct ResidualField {
  Eigen::VectorXd xs;        // interior points
  std::vector<double> ts;
  Eigen::MatrixXd residual;  // (#interior points) x (#times)
};

ResidualField diffusion_residual_field(
    const std::function<Complex(int, double, double)>& rho, int components,
    const Eigen::VectorXd& xs, const std::vector<double>& ts, double dx,
    double dt_fd, const DiffusionParams& p, DstarVariant dvar,
    GeneratorVariant gvar = GeneratorVariant::stationary);

// Max-norm of the field above.
double diffusion_residual(
    const std::function<Complex(int, double, double)>& rho, int components,
    const Eigen::VectorXd& xs, const std::vector<double>& ts, double dx,
    double dt_fd, const DiffusionParams& p, DstarVariant dvar,
    GeneratorVariant gvar = GeneratorVariant::stationary);

// Residual of a stored uniform-in-time solver series (all interior times).
double diffusion_residual(const std::vector<SystemState>& series,
                          const DiffusionParams& p, DstarVariant dvar,
                          GeneratorVariant gvar = GeneratorVariant::stationary);

}  // namespace smashline
