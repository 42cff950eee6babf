#include "smashline/deformation.hpp"

#include <cmath>
#include <numbers>

namespace smashline {

Deformation::Deformation(int n) : order(n) {
  if (n < 2) {
    throw ValidationError("deformation order must be >= 2 (xi^N = 0 with N = " +
                          std::to_string(n) + " is degenerate)");
  }
  q = std::polar(1.0, 2.0 * std::numbers::pi / static_cast<double>(n));
}

Complex Deformation::q_pow(long long m) const {
  long long r = m % order;
  if (r < 0) r += order;
  if (r == 0) return {1.0, 0.0};
  return std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(r) /
                             static_cast<double>(order));
}

}  // namespace smashline
