#include "smashline/qcalculus.hpp"

#include <string>

namespace smashline {

namespace {

void require_size(const XiPolynomial& f, const Deformation& d,
                  const char* who) {
  if (f.size() != d.order) {
    throw ValidationError(std::string(who) + ": polynomial has " +
                          std::to_string(f.size()) + " coefficients, expected " +
                          std::to_string(d.order));
  }
}

}  // namespace

Complex q_number(int m, const Deformation& d) {
  if (m < 0) throw ValidationError("q_number: m must be nonnegative");
  if (m % d.order == 0) return {0.0, 0.0};
  return (1.0 - d.q_pow(m)) / (1.0 - d.q);
}

Complex q_factorial(int m, const Deformation& d) {
  if (m < 0) throw ValidationError("q_factorial: m must be nonnegative");
  if (m >= d.order) return {0.0, 0.0};  // [N]_q = 0 kills the product
  Complex acc{1.0, 0.0};
  for (int i = 2; i <= m; ++i) acc *= q_number(i, d);
  return acc;
}

Complex q_multinomial(int m, std::span<const int> parts, const Deformation& d) {
  if (m < 0 || m >= d.order) {
    throw ValidationError(
        "q_multinomial: need 0 <= m <= N-1 = " + std::to_string(d.order - 1) +
        " (q-factorials vanish from m = N on), got m = " + std::to_string(m));
  }
  long long sum = 0;
  for (int p : parts) {
    if (p < 0) throw ValidationError("q_multinomial: parts must be nonnegative");
    sum += p;
  }
  if (sum != m) {
    throw ValidationError("q_multinomial: parts sum to " + std::to_string(sum) +
                          ", expected " + std::to_string(m));
  }
  Complex acc = q_factorial(m, d);
  for (int p : parts) acc /= q_factorial(p, d);
  return acc;
}

Complex q_binomial(int m, int k, const Deformation& d) {
  if (k < 0 || k > m) throw ValidationError("q_binomial: need 0 <= k <= m");
  const int parts[2] = {k, m - k};
  return q_multinomial(m, parts, d);
}

XiPolynomial jackson_derivative(const XiPolynomial& f, const Deformation& d) {
  require_size(f, d, "jackson_derivative");
  XiPolynomial out = XiPolynomial::Zero(d.order);
  for (int m = 1; m < d.order; ++m) out(m - 1) = q_number(m, d) * f(m);
  return out;
}

XiPolynomial scale_operator(const XiPolynomial& f, Complex s) {
  XiPolynomial out(f.size());
  Complex p{1.0, 0.0};
  for (Eigen::Index m = 0; m < f.size(); ++m) {
    out(m) = p * f(m);
    p *= s;
  }
  return out;
}

XiPolynomial dual_derivative(const XiPolynomial& f, const Deformation& d) {
  require_size(f, d, "dual_derivative");
  return -jackson_derivative(scale_operator(f, d.q_pow(-1)), d);
}

Complex q_exponential_coefficient(int m, const Deformation& d) {
  if (m < 0 || m >= d.order) {
    throw ValidationError(
        "q_exponential_coefficient: need 0 <= m <= N-1 (series truncates at "
        "xi^N = 0), got m = " +
        std::to_string(m));
  }
  return 1.0 / q_factorial(m, d);
}

XiPolynomial xi_multiply(const XiPolynomial& f, const XiPolynomial& g,
                         const Deformation& d) {
  require_size(f, d, "xi_multiply");
  require_size(g, d, "xi_multiply");
  XiPolynomial out = XiPolynomial::Zero(d.order);
  for (int i = 0; i < d.order; ++i) {
    for (int j = 0; i + j < d.order; ++j) out(i + j) += f(i) * g(j);
  }
  return out;
}

XiPolynomial xi_monomial(int m, const Deformation& d) {
  if (m < 0 || m >= d.order) {
    throw ValidationError("xi_monomial: degree out of range [0, N-1]");
  }
  XiPolynomial out = XiPolynomial::Zero(d.order);
  out(m) = Complex{1.0, 0.0};
  return out;
}

}  // namespace smashline
