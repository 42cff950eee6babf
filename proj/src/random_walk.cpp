#include "smashline/random_walk.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "smashline/compositions.hpp"
#include "smashline/qcalculus.hpp"

namespace smashline {

void validate(const StepDensity& s) {
  if (!(s.a > 0.0)) throw ValidationError("step density: a must be > 0");
  if (!(s.theta > 0.0)) throw ValidationError("step density: theta must be > 0");
  if (s.p1 < 0.0 || s.p1 > 1.0) throw ValidationError("step density: p1 must lie in [0, 1]");
  if (s.p2 < 0.0 || s.p2 > 1.0) throw ValidationError("step density: p2 must lie in [0, 1]");
}

void validate(const WalkSpec& w) {
  validate(w.step);
  if (w.n < 1) throw ValidationError("walk: step count n must be >= 1");
}

double phi_x(int i, const StepDensity& s) {
  if (i < 0) throw ValidationError("phi_x: power must be nonnegative");
  return s.p1 * std::pow(s.a, i) + (1.0 - s.p1) * std::pow(-s.a, i);
}

double phi_xi(int j, const StepDensity& s, const Deformation& d) {
  if (j < 0) throw ValidationError("phi_xi: power must be nonnegative");
  if (j >= d.order) {
    throw ValidationError("phi_xi: xi-power " + std::to_string(j) +
                          " exceeds the nilpotency bound N-1 = " +
                          std::to_string(d.order - 1));
  }
  return s.p2 * std::pow(s.theta, j) + (1.0 - s.p2) * std::pow(-s.theta, j);
}

Complex moment(int k, int l, const WalkSpec& w) {
  validate(w);
  if (k < 0) throw ValidationError("moment: x-power must be nonnegative");
  if (l < 0 || l >= w.deformation.order) {
    throw ValidationError("moment: xi-power " + std::to_string(l) +
                          " exceeds the nilpotency bound N-1 = " +
                          std::to_string(w.deformation.order - 1));
  }
  const int n = w.n;
  // Per-power step moments are reused across compositions.
  std::vector<double> px(static_cast<size_t>(k) + 1);
  for (int i = 0; i <= k; ++i) px[static_cast<size_t>(i)] = phi_x(i, w.step);
  std::vector<double> pj(static_cast<size_t>(l) + 1);
  for (int j = 0; j <= l; ++j) pj[static_cast<size_t>(j)] = phi_xi(j, w.step, w.deformation);

  Complex total{0.0, 0.0};
  for_each_composition(k, n, [&](std::span<const int> xs) {
    double xpart = multinomial(k, xs);
    for (int i : xs) xpart *= px[static_cast<size_t>(i)];
    if (xpart == 0.0) return;
    for_each_composition(l, n, [&](std::span<const int> js) {
      Complex c = q_multinomial(l, js, w.deformation);
      double jpart = xpart;
      for (int j : js) jpart *= pj[static_cast<size_t>(j)];
      total += c * jpart;
    });
  });
  return total;
}

Complex moment_oracle(int k, int l, const WalkSpec& w) {
  validate(w);
  if (k < 0) throw ValidationError("moment_oracle: x-power must be nonnegative");
  if (l < 0 || l >= w.deformation.order) {
    throw ValidationError("moment_oracle: xi-power exceeds the nilpotency bound");
  }
  if (w.n > 8 || k > 5) {
    throw EnumerationGuard("moment_oracle: enumeration guard n <= 8, k <= 5 exceeded");
  }
  const int n = w.n;
  const Deformation& d = w.deformation;

  MultiSlotExpansion sum_x(n), sum_xi(n);
  for (int s = 0; s < n; ++s) {
    MultiSlotExpansion::Key key(static_cast<size_t>(2 * n), 0);
    key[static_cast<size_t>(2 * s)] = 1;
    sum_x.add_term(key, Complex{1.0, 0.0});
    MultiSlotExpansion::Key jkey(static_cast<size_t>(2 * n), 0);
    jkey[static_cast<size_t>(2 * s + 1)] = 1;
    sum_xi.add_term(jkey, Complex{1.0, 0.0});
  }

  MultiSlotExpansion prod = MultiSlotExpansion::unit(n);
  for (int r = 0; r < k; ++r) {
    prod = multislot_multiply(prod, sum_x, w.braiding_q, d, k);
  }
  for (int r = 0; r < l; ++r) {
    prod = multislot_multiply(prod, sum_xi, w.braiding_q, d, k);
  }

  Complex total{0.0, 0.0};
  for (const auto& [key, c] : prod.terms()) {
    Complex v = c;
    for (int s = 0; s < n; ++s) {
      v *= phi_x(key[static_cast<size_t>(2 * s)], w.step);
      v *= phi_xi(key[static_cast<size_t>(2 * s + 1)], w.step, d);
    }
    total += v;
  }
  return total;
}

Complex expectation(const SmashElement& f, const WalkSpec& w) {
  if (!(f.deformation() == w.deformation)) {
    throw ValidationError("expectation: element and walk deformation differ");
  }
  Complex total{0.0, 0.0};
  for (const auto& [key, c] : f.terms()) {
    total += c * moment(key.first, key.second, w);
  }
  return total;
}

}  // namespace smashline
