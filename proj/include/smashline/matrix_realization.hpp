#pragma once

#include <Eigen/Dense>
#include <vector>

#include "smashline/diffusion_params.hpp"
#include "smashline/gaussian_mixture.hpp"

namespace smashline {

using RepMatrix = Eigen::MatrixXcd;

// Two inequivalent N-dimensional realizations of the dual derivative are in
// circulation: the tabulated superdiagonal {i} e^{w^{-1}{i}} ("printed") and
// the one generated by -D_xi L_{q^{-1}} on the monomial basis ("algebraic",
// superdiagonal -q^{-i}[i]_q). They differ already at N = 2 (e^{-1} vs 1);
// both are supported and the verify ledger records the comparison.
enum class DstarVariant { printed, algebraic };

// xi as the N x N matrix with ones on the superdiagonal.
RepMatrix xi_matrix(int n_dim);

// Jackson derivative on ascending coefficient vectors: superdiagonal
// entries {1}, ..., {N-1}.
RepMatrix d_xi_matrix(int n_dim);

// Dual derivative in the selected variant (strictly superdiagonal).
RepMatrix d_xi_star_matrix(int n_dim, DstarVariant variant);

// The superdiagonal lambda_1 ... lambda_{N-1} of the selected D* variant.
Eigen::VectorXcd lambda_entries(int n_dim, DstarVariant variant);

// exp(tG) for a nilpotent G: the exact finite series sum_{m<N} (tG)^m / m!.
RepMatrix nilpotent_exp(const RepMatrix& g, Complex t = Complex{1.0, 0.0});

// The coupled evolution operator: every component evolves under
// H_x = advection * D_x + diffusivity * D_x^2, and component k is sourced by
// coupling(k, k+1) rho_{k+1} + coupling(k, k+2) rho_{k+2}. `coupling` is the
// full strictly-upper N x N matrix dstar_coeff * D* + dstar2_coeff * D*^2,
// so its rows carry c2 lambda_{k+1} and alpha2 lambda_{k+1} lambda_{k+2}.
struct CoupledOperator {
  int components = 0;
  double advection = 0.0;
  double diffusivity = 0.0;
  Eigen::VectorXcd lambdas;
  Eigen::MatrixXcd coupling;
};

CoupledOperator assemble_H(int n_dim, const DiffusionParams& p,
                           DstarVariant dvar,
                           GeneratorVariant gvar = GeneratorVariant::stationary);

enum class Scheme { crank_nicolson, explicit_rk4 };

struct GridSpec {
  double x_min = -10.0;
  double x_max = 10.0;
  double dx = 0.01;
  double dt = 1e-3;
  double t_end = 1.0;
  Scheme scheme = Scheme::crank_nicolson;
  int snapshot_stride = 0;  // 0: keep only the initial and final states
  bool upwind_advection = false;  // optional first-order upwinding of D_x
};

void validate(const GridSpec& g, const DiffusionParams& p);

struct SystemState {
  double time = 0.0;
  Eigen::VectorXd x;            // shared uniform grid
  Eigen::MatrixXcd components;  // (#points) x N, column k holds rho_k
};

// Uniform grid and a state whose every column samples the given mixtures.
SystemState make_state(const GridSpec& g,
                       const std::vector<GaussianMixture>& components,
                       double time = 0.0);
Eigen::VectorXd make_grid(const GridSpec& g);

struct SolveResult {
  std::vector<SystemState> snapshots;  // always includes t=0 and t=t_end
  double max_boundary_density = 0.0;
  long steps = 0;
  double dt_effective = 0.0;
};

// Advances the coupled system to t_end with zero Dirichlet boundaries.
// Crank–Nicolson treats H_x implicitly and the (nilpotent, bounded) coupling
// trapezoidally; explicit RK4 is available for cross-checks and enforces
// alpha1 dt / dx^2 <= 0.25. Throws InstabilityError on norm blow-up or
// boundary-mass violation.
SolveResult solve_system(const GridSpec& g, const DiffusionParams& p,
                         const SystemState& initial, DstarVariant dvar,
                         GeneratorVariant gvar = GeneratorVariant::stationary);

// Semi-analytic solution for Gaussian-mixture initial data: component k is
// its free drift–diffusion evolution plus variation-of-constants integrals
// of the already-solved components above it, with the heat flow applied in
// closed form and the time integrals done by adaptive quadrature.
std::vector<GaussianMixture> duhamel_oracle(
    const DiffusionParams& p, const std::vector<GaussianMixture>& initial,
    double t, DstarVariant dvar,
    GeneratorVariant gvar = GeneratorVariant::stationary,
    double quad_tol = 1e-8);

}  // namespace smashline
