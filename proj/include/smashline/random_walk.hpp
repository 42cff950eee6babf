#pragma once

#include "smashline/smash_algebra.hpp"

namespace smashline {

// Two-point step densities for both sectors:
//   rho_1(x)  = p1 delta(x - a)     + (1-p1) delta(x + a)
//   rho_2(xi) = p2 delta(xi - theta) + (1-p2) delta(xi + theta)
struct StepDensity {
  double a = 1.0;      // > 0
  double p1 = 0.5;     // in [0, 1]
  double theta = 1.0;  // > 0
  double p2 = 0.5;     // in [0, 1]
};

void validate(const StepDensity& s);

struct WalkSpec {
  StepDensity step;
  int n = 1;  // number of steps, >= 1
  Deformation deformation;
  double braiding_q = 1.0;  // the real x-xi cross braiding constant Q
};

void validate(const WalkSpec& w);

// i-th moment of the x step: p1 a^i + (1-p1)(-a)^i.
double phi_x(int i, const StepDensity& s);

// j-th moment of the xi step: p2 theta^j + (1-p2)(-theta)^j. Rejects j >= N.
double phi_xi(int j, const StepDensity& s, const Deformation& d);

// Exact n-step moment <x^k (x) xi^l> of the walk functional: the sum over
// compositions of k and l into n parts of
//   multinomial(k; i) * q_multinomial(l; j) * prod_t phi_x(i_t) phi_xi(j_t).
// Rejects l >= N (the degree is unrepresentable, not zero-valued).
Complex moment(int k, int l, const WalkSpec& w);

// Ground truth for `moment`: expands (x_1+...+x_n)^k (xi_1+...+xi_n)^l in the
// braided multi-slot algebra using only normal ordering, then evaluates each
// canonical term slotwise with phi_x * phi_xi. Guarded to desk scale
// (n <= 8, k <= 5).
Complex moment_oracle(int k, int l, const WalkSpec& w);

// Linear extension of `moment` over the terms of f.
Complex expectation(const SmashElement& f, const WalkSpec& w);

}  // namespace smashline
