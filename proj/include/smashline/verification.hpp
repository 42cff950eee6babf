#pragma once

#include <optional>
#include <string>
#include <vector>

#include "smashline/diffusion.hpp"

namespace smashline {

// One ledger entry. `hard` entries gate the build (exit code 3 from the CLI
// when failed); the rest record comparisons without asserting agreement.
struct CheckResult {
  std::string check;
  std::optional<Complex> printed_value;
  std::optional<Complex> oracle_value;
  double abs_diff = 0.0;
  double tolerance = 0.0;  // meaningful only when hard
  bool hard = false;
  bool passed = true;
  std::string note;
};

using CheckList = std::vector<CheckResult>;

// Coassociativity and counit axioms on monomials x^k xi^l, k <= kmax,
// l <= N-1. Hard, 1e-12.
CheckList check_bialgebra(const std::vector<int>& orders, int kmax = 4);

// coproduct(xi)^l under the braided product vs the l-th coproduct row,
// validating the q-multinomials independently. Hard, 1e-12.
CheckList check_xi_multiplicativity(const std::vector<int>& orders);

// q-Pascal identity, factorial recurrence, anyonic Leibniz rule and the
// dual-derivative identity on random polynomial pairs, and the q -> 1
// large-N limit. Hard.
CheckList check_qcalculus_identities(const std::vector<int>& orders,
                                     int trials = 100, unsigned seed = 20240817);

// moment vs the braided brute-force oracle over k <= kmax, l <= N-1,
// n <= nmax. Hard at braiding Q = 1 (1e-10 relative); report-only at other
// Q values.
CheckList check_moment_oracle(const std::vector<int>& orders, int nmax,
                              int kmax, const StepDensity& step,
                              const std::vector<double>& braidings);

// Closed-form first moments n a (2 p1 - 1), n theta (2 p2 - 1) up to
// n = nmax. Hard, 1e-12.
CheckList check_first_moments(int order, int nmax, const StepDensity& step);

// Convolution semigroup decomposition over m, n <= 3. Hard, 1e-10.
CheckList check_convolution_semigroup(const std::vector<int>& orders,
                                      int kmax, const StepDensity& step);

// Representation matrices vs the polynomial operators on every basis
// monomial; exact nilpotency M^N = 0. Hard, 1e-13.
CheckList check_matrix_fidelity(const std::vector<int>& orders);

// Printed vs algebraic dual-derivative superdiagonals. Report-only.
CheckList check_dstar_variants(const std::vector<int>& orders);

// Heat-kernel residual of gaussian_solution (hard, < 1e-6 on the given grid)
// and of the alternative prefactor variant (hard in the opposite direction:
// it must visibly violate the equation, residual > 1e-2).
CheckList check_gaussian_prefactor(const DiffusionParams& p, double x_half,
                                   double dx, const std::vector<double>& ts,
                                   double dt_fd);

// Tabulated xi-sector profile vs the nilpotent-exponential oracle (report
// only) and the oracle semigroup property (hard, 1e-12).
CheckList check_xi_sector(const std::vector<int>& orders,
                          const DiffusionParams& p);

// Non-stationary generator: coefficient identity at lambda = lambda_tilde = 0
// and exact drift cancellation at lambda = c1. Hard.
CheckList check_nonstationary_reduction();

// d/dt phi(f) = phi(Gf) for observables of degree <= 3 (hard, 1e-6, finite
// differences with step 1e-5) plus the two readings of phi(1) (report).
CheckList check_phi_infinity(int order, const DiffusionParams& p);

// Finite-n first moment tied by the continuum substitutions reproduces c1 t.
// Hard, 1e-10.
CheckList check_continuum_consistency(int order, double c1, double alpha1,
                                      double t, const std::vector<int>& ns);

// Everything cmd_verify runs, in a fixed order.
CheckList run_standard_verification(const std::vector<int>& orders);

bool all_hard_passed(const CheckList& checks);

}  // namespace smashline
