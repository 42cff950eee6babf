#pragma once

#include <Eigen/Dense>
#include <span>

#include "smashline/deformation.hpp"

namespace smashline {

// Truncated polynomial in xi: coefficient m is the xi^m coefficient,
// 0 <= m <= N-1. The vector length must equal the deformation order.
using XiPolynomial = Eigen::VectorXcd;

// [m]_q = (1 - q^m)/(1 - q); exactly zero whenever m is a multiple of N.
Complex q_number(int m, const Deformation& d);

// [m]_q! = [1]_q [2]_q ... [m]_q; equals 1 for m = 0 and vanishes for m >= N.
Complex q_factorial(int m, const Deformation& d);

// [m; j_1 ... j_r]_q = [m]_q! / prod [j_i]_q! for a composition of m < N.
// m >= N is rejected: the factorial ratio degenerates to 0/0 at a root of
// unity and no consumer needs it (xi-degrees never exceed N-1).
Complex q_multinomial(int m, std::span<const int> parts, const Deformation& d);

// Two-part convenience form, the Gaussian binomial [m choose k]_q.
Complex q_binomial(int m, int k, const Deformation& d);

// Jackson derivative: xi^m -> [m]_q xi^{m-1}, constants -> 0.
XiPolynomial jackson_derivative(const XiPolynomial& f, const Deformation& d);

// Scaling operator (L_s f)(xi) = f(s xi), i.e. coefficient c_m -> s^m c_m.
XiPolynomial scale_operator(const XiPolynomial& f, Complex s);

// Dual derivative -D_xi L_{q^{-1}}: xi^m -> -q^{-m} [m]_q xi^{m-1}.
XiPolynomial dual_derivative(const XiPolynomial& f, const Deformation& d);

// m-th coefficient 1/[m]_q! of the truncated q-exponential
// e_q^z = sum_{m<N} z^m/[m]_q!. Rejects m >= N.
Complex q_exponential_coefficient(int m, const Deformation& d);

// Product in C[xi]/xi^N (terms of degree >= N drop).
XiPolynomial xi_multiply(const XiPolynomial& f, const XiPolynomial& g,
                         const Deformation& d);

// Coefficient vector of the monomial xi^m.
XiPolynomial xi_monomial(int m, const Deformation& d);

}  // namespace smashline
