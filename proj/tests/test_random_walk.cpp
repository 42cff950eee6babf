#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "smashline/compositions.hpp"
#include "smashline/qcalculus.hpp"
#include "smashline/random_walk.hpp"

using namespace smashline;

namespace {

WalkSpec make_walk(int n, int order, double braiding = 1.0,
                   StepDensity step = {1.0, 0.3, 0.7, 0.6}) {
  return WalkSpec{step, n, Deformation(order), braiding};
}

}  // namespace

TEST_CASE("step density validation") {
  CHECK_THROWS_AS(validate(StepDensity{0.0, 0.5, 1.0, 0.5}), ValidationError);
  CHECK_THROWS_AS(validate(StepDensity{1.0, 1.5, 1.0, 0.5}), ValidationError);
  CHECK_THROWS_AS(validate(StepDensity{1.0, 0.5, -1.0, 0.5}), ValidationError);
  CHECK_THROWS_AS(validate(WalkSpec{{}, 0, Deformation(2), 1.0}), ValidationError);
}

TEST_CASE("phi_x values") {
  const StepDensity s{1.0, 0.5, 0.7, 0.5};
  CHECK(phi_x(0, s) == doctest::Approx(1.0));
  CHECK(phi_x(1, s) == doctest::Approx(0.0));
  const StepDensity t{1.0, 0.37, 0.7, 0.5};
  CHECK(phi_x(2, t) == doctest::Approx(1.0));  // (+-1)^2 = 1 in both branches
}

TEST_CASE("phi_xi values and nilpotency precondition") {
  const Deformation d3(3);
  const StepDensity s{1.0, 0.5, 0.7, 0.6};
  CHECK(phi_xi(0, s, d3) == doctest::Approx(1.0));
  const StepDensity sym{1.0, 0.5, 0.7, 0.5};
  CHECK(phi_xi(1, sym, d3) == doctest::Approx(0.0));
  CHECK(phi_xi(2, s, d3) == doctest::Approx(0.49));
  CHECK_THROWS_AS(phi_xi(3, s, d3), ValidationError);
}

TEST_CASE("moment: normalization and first moments") {
  const WalkSpec w = make_walk(4, 3);
  CHECK(std::abs(moment(0, 0, w) - Complex{1.0, 0.0}) < 1e-15);
  const double expect = 4.0 * w.step.a * (2.0 * w.step.p1 - 1.0);
  CHECK(std::abs(moment(1, 0, w) - Complex{expect, 0.0}) < 1e-13);
  CHECK(std::abs(moment(1, 0, w) - moment_oracle(1, 0, w)) < 1e-13);
}

TEST_CASE("moment: xi-sector second moment carries the q-binomial") {
  const WalkSpec w = make_walk(2, 3);
  const Deformation& d = w.deformation;
  const double th = w.step.theta;
  const double drift = th * (2.0 * w.step.p2 - 1.0);
  const Complex expect = 2.0 * th * th + (1.0 + d.q) * drift * drift;
  CHECK(std::abs(moment(0, 2, w) - expect) < 1e-13);
  CHECK(std::abs(moment_oracle(0, 2, w) - expect) < 1e-13);
}

TEST_CASE("moment oracle: commuting binomial expansion") {
  const WalkSpec w = make_walk(2, 2);
  const double f2 = phi_x(2, w.step);
  const double f1 = phi_x(1, w.step);
  CHECK(std::abs(moment_oracle(2, 0, w) - Complex{2.0 * f2 + 2.0 * f1 * f1, 0.0}) <
        1e-13);
  CHECK(std::abs(moment_oracle(0, 0, w) - Complex{1.0, 0.0}) < 1e-15);
}

TEST_CASE("moment preconditions and oracle guard") {
  const WalkSpec w = make_walk(3, 2);
  CHECK_THROWS_AS(moment(0, 2, w), ValidationError);   // l >= N
  CHECK_THROWS_AS(moment(-1, 0, w), ValidationError);
  CHECK_THROWS_AS(moment_oracle(0, 2, w), ValidationError);
  const WalkSpec big = make_walk(9, 2);
  CHECK_THROWS_AS(moment_oracle(1, 0, big), EnumerationGuard);
  const WalkSpec deep = make_walk(3, 2);
  CHECK_THROWS_AS(moment_oracle(6, 0, deep), EnumerationGuard);
}

TEST_CASE("oracle equivalence at Q = 1 over the invariant grid") {
  for (int order : {2, 3, 4}) {
    for (int n = 1; n <= 5; ++n) {
      const WalkSpec w = make_walk(n, order);
      for (int k = 0; k <= 4; ++k) {
        for (int l = 0; l < order; ++l) {
          const Complex a = moment(k, l, w);
          const Complex b = moment_oracle(k, l, w);
          CHECK(std::abs(a - b) / std::max(1.0, std::abs(b)) < 1e-10);
        }
      }
    }
  }
}

TEST_CASE("symmetric walks kill odd moments") {
  const WalkSpec w = make_walk(3, 4, 1.0, StepDensity{1.0, 0.5, 0.7, 0.5});
  for (int k : {1, 3}) {
    CHECK(std::abs(moment(k, 0, w)) < 1e-14);
  }
  for (int l : {1, 3}) {
    CHECK(std::abs(moment(0, l, w)) < 1e-14);
  }
}

TEST_CASE("factorization of the implemented coefficient formula") {
  const WalkSpec w = make_walk(3, 3);
  for (int k = 0; k <= 3; ++k) {
    for (int l = 0; l < 3; ++l) {
      const Complex lhs = moment(k, l, w);
      const Complex rhs = moment(k, 0, w) * moment(0, l, w);
      CHECK(std::abs(lhs - rhs) < 1e-12 * std::max(1.0, std::abs(rhs)));
    }
  }
}

TEST_CASE("convolution semigroup decomposition") {
  const Deformation d3(3);
  const StepDensity step{1.0, 0.3, 0.7, 0.6};
  for (int m = 1; m <= 3; ++m) {
    for (int n = 1; n <= 3; ++n) {
      const WalkSpec wm{step, m, d3, 1.0};
      const WalkSpec wn{step, n, d3, 1.0};
      const WalkSpec wmn{step, m + n, d3, 1.0};
      for (int k = 0; k <= 3; ++k) {
        for (int l = 0; l < 3; ++l) {
          Complex rhs{0.0, 0.0};
          for (int i = 0; i <= k; ++i) {
            const int xparts[2] = {i, k - i};
            const double bx = multinomial(k, xparts);
            for (int j = 0; j <= l; ++j) {
              rhs += bx * q_binomial(l, j, d3) * moment(i, j, wm) *
                     moment(k - i, l - j, wn);
            }
          }
          const Complex lhs = moment(k, l, wmn);
          CHECK(std::abs(lhs - rhs) < 1e-10 * std::max(1.0, std::abs(lhs)));
        }
      }
    }
  }
}

TEST_CASE("expectation is the linear extension of moment") {
  const WalkSpec w = make_walk(5, 3);
  const Deformation& d = w.deformation;

  CHECK(std::abs(expectation(SmashElement::monomial(d, 0, 0), w) -
                 Complex{1.0, 0.0}) < 1e-15);

  SmashElement f(d);
  f.add_term(1, 0, Complex{1.0, 0.0});
  f.add_term(0, 0, Complex{5.0, 0.0});
  const double expect = 5.0 * w.step.a * (2.0 * w.step.p1 - 1.0) + 5.0;
  CHECK(std::abs(expectation(f, w) - Complex{expect, 0.0}) < 1e-12);

  const WalkSpec one = make_walk(1, 3);
  const SmashElement xxi = SmashElement::monomial(d, 1, 1);
  CHECK(std::abs(expectation(xxi, one) -
                 phi_x(1, one.step) * phi_xi(1, one.step, d)) < 1e-14);
}

TEST_CASE("mixed moments pick up braiding dependence only through the oracle") {
  const WalkSpec q1 = make_walk(3, 3, 1.0);
  const WalkSpec q2 = make_walk(3, 3, 2.0);
  // The coefficient formula ignores Q entirely.
  CHECK(std::abs(moment(2, 1, q1) - moment(2, 1, q2)) == 0.0);
  // Pure-sector oracle values are Q-independent too.
  CHECK(std::abs(moment_oracle(3, 0, q1) - moment_oracle(3, 0, q2)) < 1e-13);
  CHECK(std::abs(moment_oracle(0, 2, q1) - moment_oracle(0, 2, q2)) < 1e-13);
}
