#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "smashline/diffusion.hpp"

using namespace smashline;

TEST_CASE("continuum substitutions") {
  const Deformation d3(3);
  {
    const StepDensity s{1.0, 0.6, 1.0, 0.5};
    const DiffusionParams p = continuum_params(s, 100, 1.0, d3);
    CHECK(p.c1 == doctest::Approx(20.0));
    CHECK(p.alpha1 == doctest::Approx(50.0));
    CHECK(p.c2 == doctest::Approx(0.0));
  }
  {
    // symmetric x walk has no drift
    const StepDensity s{1.0, 0.5, 1.0, 0.5};
    CHECK(continuum_params(s, 10, 1.0, d3).c1 == doctest::Approx(0.0));
  }
  {
    const Deformation d4(4);
    const StepDensity s{1.0, 0.5, 0.5, 0.5};
    const DiffusionParams p = continuum_params(s, 8, 2.0, d4);
    // alpha2 = 0.25 * 8 / ((1+i) * 2) = 1/(1+i) = (1-i)/2
    CHECK(std::abs(p.alpha2 - Complex{0.5, -0.5}) < 1e-14);
  }
  {
    const Deformation d2(2);
    const StepDensity s{1.0, 0.5, 0.5, 0.5};
    CHECK_THROWS_AS(continuum_params(s, 8, 2.0, d2), ValidationError);
  }
}

TEST_CASE("gaussian profile") {
  DiffusionParams p;
  p.c1 = 0.0;
  p.alpha1 = 0.25;
  CHECK(gaussian_solution(0.0, 1.0, p) ==
        doctest::Approx(1.0 / std::sqrt(std::numbers::pi)));

  p.c1 = 0.7;
  for (double dx : {0.3, 1.1}) {
    CHECK(gaussian_solution(p.c1 * 2.0 + dx, 2.0, p) ==
          doctest::Approx(gaussian_solution(p.c1 * 2.0 - dx, 2.0, p)));
  }

  // Unit mass by trapezoidal quadrature.
  const double h = 1e-3;
  double mass = 0.0;
  for (double x = -20.0; x <= 20.0 + 1e-12; x += h) {
    mass += gaussian_solution(x, 1.0, p) * h;
  }
  CHECK(std::abs(mass - 1.0) < 1e-8);

  CHECK_THROWS_AS(gaussian_solution(0.0, 0.0, p), ValidationError);
  DiffusionParams bad = p;
  bad.alpha1 = 0.0;
  CHECK_THROWS_AS(gaussian_solution(0.0, 1.0, bad), ValidationError);

  // The alternative prefactor rescales but does not normalize.
  const double ratio = gaussian_solution_alt_prefactor(0.3, 1.0, p) /
                       gaussian_solution(0.3, 1.0, p);
  CHECK(ratio == doctest::Approx(1.0 / std::sqrt(4.0 * std::numbers::pi *
                                                 p.alpha1)));
}

TEST_CASE("tabulated xi profile") {
  const Deformation d2(2);
  DiffusionParams p;
  p.c2 = 0.8;
  p.alpha2 = Complex{0.5, 0.0};
  // N = 2 by hand: theta + c2 t [1]_q!.
  CHECK(std::abs(xi_closed_form(0.3, 2.0, p, d2) -
                 Complex{0.3 + 0.8 * 2.0, 0.0}) < 1e-14);
  // Only the boundary term survives at t = 0.
  CHECK(std::abs(xi_closed_form(0.3, 0.0, p, d2) - Complex{0.3, 0.0}) < 1e-15);
  const Deformation d4(4);
  CHECK(std::abs(xi_closed_form(0.5, 0.0, p, d4) - Complex{0.125, 0.0}) < 1e-15);

  DiffusionParams zero = p;
  zero.c2 = 0.0;
  CHECK_THROWS_AS(xi_closed_form(0.3, 1.0, zero, d2), ValidationError);
}

TEST_CASE("xi sector oracle") {
  const Deformation d2(2);
  DiffusionParams p;
  p.c2 = 0.9;
  p.alpha2 = Complex{0.0, 0.0};

  // t = 0 leaves the initial vector unchanged.
  XiPolynomial init(2);
  init << Complex{0.25, 0.0}, Complex{1.5, 0.0};
  CHECK((xi_sector_oracle(0.0, p, d2, init) - init).cwiseAbs().maxCoeff() ==
        0.0);

  // Pure drift at N = 2: exp has exactly two terms.
  const Complex lam = lambda_entries(2, DstarVariant::printed)(0);
  const XiPolynomial sol = xi_sector_oracle(2.0, p, d2);
  CHECK(std::abs(sol(1) - Complex{1.0, 0.0}) < 1e-15);
  CHECK(std::abs(sol(0) - p.c2 * 2.0 * lam) < 1e-14);

  // Zero generator: identity for all t.
  DiffusionParams off;
  off.c2 = 0.0;
  off.alpha2 = Complex{0.0, 0.0};
  CHECK((xi_sector_oracle(3.7, off, d2, init) - init).cwiseAbs().maxCoeff() ==
        0.0);

  // Semigroup property.
  const Deformation d4(4);
  DiffusionParams full;
  full.c2 = 1.1;
  full.alpha2 = Complex{0.4, 0.2};
  XiPolynomial v(4);
  v << Complex{0.1, 0.0}, Complex{-0.3, 0.2}, Complex{0.0, 1.0}, Complex{0.7, 0.0};
  const XiPolynomial once = xi_sector_oracle(1.1, full, d4, v);
  const XiPolynomial twice =
      xi_sector_oracle(0.7, full, d4, xi_sector_oracle(0.4, full, d4, v));
  CHECK((once - twice).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("heat-kernel residual on a fine grid") {
  DiffusionParams p;
  p.c1 = 0.25;
  p.alpha1 = 1.0;

  const double dx = 2e-3;
  const auto npts = static_cast<Eigen::Index>(std::llround(6.0 / dx)) + 1;
  Eigen::VectorXd xs(npts);
  for (Eigen::Index i = 0; i < npts; ++i) xs(i) = -3.0 + i * dx;

  auto rho = [&](int, double x, double t) -> Complex {
    return gaussian_solution(x, t, p);
  };
  const double res = diffusion_residual(rho, 1, xs, {0.5, 1.0}, dx, 1e-5, p,
                                        DstarVariant::printed);
  CHECK(res < 1e-6);

  const double res_alt = diffusion_residual(
      [&](int, double x, double t) -> Complex {
        return gaussian_solution_alt_prefactor(x, t, p);
      },
      1, xs, {0.5, 1.0}, dx, 1e-5, p, DstarVariant::printed);
  CHECK(res_alt > 1e-2);
}

TEST_CASE("residual vanishes exactly when every coefficient is zero") {
  DiffusionParams p;
  p.c1 = 0.0;
  p.alpha1 = 0.0;
  Eigen::VectorXd xs(9);
  for (int i = 0; i < 9; ++i) xs(i) = -1.0 + 0.25 * i;
  auto rho = [](int, double x, double) -> Complex {
    return Complex{x * x + 1.0, 0.0};
  };
  CHECK(diffusion_residual(rho, 1, xs, {0.3}, 0.25, 1e-4, p,
                           DstarVariant::printed) == 0.0);
}

TEST_CASE("non-stationary drift cancellation") {
  DiffusionParams p;
  p.c1 = 0.8;
  p.alpha1 = 0.0;
  p.lambda = 0.8;  // cancels the advection exactly
  Eigen::VectorXd xs(9);
  for (int i = 0; i < 9; ++i) xs(i) = -1.0 + 0.25 * i;
  auto rho = [](int, double x, double) -> Complex {
    return Complex{std::cos(x), 0.0};
  };
  CHECK(diffusion_residual(rho, 1, xs, {0.5}, 0.25, 1e-4, p,
                           DstarVariant::printed,
                           GeneratorVariant::nonstationary) == 0.0);
}

TEST_CASE("limiting functional on observables") {
  const Deformation d3(3);
  DiffusionParams p;
  p.c1 = 0.6;
  p.alpha1 = 0.4;
  p.c2 = 0.9;
  p.alpha2 = Complex{0.3, 0.0};
  p.t = 0.8;

  const SmashElement one = SmashElement::monomial(d3, 0, 0);
  CHECK(std::abs(phi_infinity(one, p, d3) - Complex{1.0, 0.0}) < 1e-15);
  CHECK(std::abs(phi_infinity_additive(one, p, d3) - Complex{3.0, 0.0}) <
        1e-15);

  const SmashElement x = SmashElement::monomial(d3, 1, 0);
  CHECK(std::abs(phi_infinity(x, p, d3) - Complex{p.c1 * p.t, 0.0}) < 1e-14);

  const SmashElement xi = SmashElement::monomial(d3, 0, 1);
  CHECK(std::abs(phi_infinity(xi, p, d3) - Complex{p.c2 * p.t, 0.0}) < 1e-14);

  // Second x moment: mean^2 + variance.
  const SmashElement x2 = SmashElement::monomial(d3, 2, 0);
  const double expect = p.c1 * p.t * p.c1 * p.t + 2.0 * p.alpha1 * p.t;
  CHECK(std::abs(phi_infinity(x2, p, d3) - Complex{expect, 0.0}) < 1e-13);
}

TEST_CASE("limiting functional is generator-consistent") {
  const Deformation d3(3);
  DiffusionParams p;
  p.c1 = 0.5;
  p.alpha1 = 0.3;
  p.c2 = 0.7;
  p.alpha2 = Complex{0.2, 0.1};
  p.t = 0.6;
  const double h = 1e-5;
  for (int k = 0; k <= 3; ++k) {
    for (int l = 0; l < 3 && k + l <= 3; ++l) {
      const SmashElement f = SmashElement::monomial(d3, k, l);
      DiffusionParams plus = p, minus = p;
      plus.t += h;
      minus.t -= h;
      const Complex ddt =
          (phi_infinity(f, plus, d3) - phi_infinity(f, minus, d3)) / (2.0 * h);
      const Complex gen = phi_infinity(apply_function_generator(f, p, d3), p, d3);
      CHECK(std::abs(ddt - gen) < 1e-6);
    }
  }
}

TEST_CASE("solver snapshots pass the residual check") {
  DiffusionParams p;
  p.c1 = 0.3;
  p.alpha1 = 0.5;
  p.c2 = 1.0;
  p.alpha2 = Complex{0.0, 0.0};
  GridSpec g;
  g.x_min = -8.0;
  g.x_max = 8.0;
  g.dx = 0.02;
  g.dt = 1e-3;
  g.t_end = 0.2;
  g.snapshot_stride = 1;  // every step, so the series is uniform in time
  std::vector<GaussianMixture> init;
  for (int k = 0; k < 2; ++k) {
    init.push_back(GaussianMixture::gaussian(Complex{1.0, 0.0}, 0.0, 0.25));
  }
  const SolveResult r =
      solve_system(g, p, make_state(g, init), DstarVariant::printed);
  REQUIRE(r.snapshots.size() >= 3);
  // The discrete solution satisfies the semi-discrete system up to the
  // O(dt^2) gap between the trapezoidal update and the centered derivative.
  CHECK(diffusion_residual(r.snapshots, p, DstarVariant::printed) < 1e-4);
  CHECK_THROWS_AS(
      diffusion_residual({r.snapshots[0], r.snapshots[1]}, p,
                         DstarVariant::printed),
      ValidationError);
}

TEST_CASE("finite-n first moment reproduces the continuum drift") {
  const Deformation d3(3);
  DiffusionParams p;
  p.c1 = 2.0;
  p.alpha1 = 0.5;
  p.t = 1.0;
  for (int n : {10, 100}) {
    const StepDensity s = steps_for_continuum(p, n, d3);
    WalkSpec w{s, n, d3, 1.0};
    CHECK(std::abs(moment(1, 0, w) - Complex{p.c1 * p.t, 0.0}) < 1e-10);
  }
  // Too much drift for too few steps pushes p1 out of [0, 1].
  DiffusionParams hard = p;
  hard.c1 = 100.0;
  CHECK_THROWS_AS(steps_for_continuum(hard, 2, d3), ValidationError);
}
