#pragma once

#include <complex>

#include "smashline/errors.hpp"

namespace smashline {

using Complex = std::complex<double>;

// Nilpotency order N (xi^N = 0) together with the primitive N-th root of
// unity q = exp(2*pi*i/N) used by the braiding and the q-calculus.
// N = 1 is rejected: xi would vanish identically.
struct Deformation {
  int order;  // N >= 2
  Complex q;  // exp(2*pi*i/N)

  explicit Deformation(int n);

  // q^m with the exponent reduced mod N, so q^0, q^N, q^{2N}, ... come out
  // exactly 1 and phases never drift for large |m|.
  Complex q_pow(long long m) const;

  friend bool operator==(const Deformation& a, const Deformation& b) {
    return a.order == b.order;
  }
};

}  // namespace smashline
