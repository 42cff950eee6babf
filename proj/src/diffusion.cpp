#include "smashline/diffusion.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <thread>

#include "smashline/runtime.hpp"

namespace smashline {

DiffusionParams continuum_params(const StepDensity& s, int n, double t,
                                 const Deformation& d) {
  validate(s);
  if (n < 1) throw ValidationError("continuum_params: n must be >= 1");
  if (!(t > 0.0)) throw ValidationError("continuum_params: t must be > 0");
  const Complex two_q = q_number(2, d);
  if (two_q == Complex{0.0, 0.0}) {
    throw ValidationError(
        "continuum_params: [2]_q = 0 at N = 2, alpha2 is undefined (the "
        "xi-sector second-order term is absent)");
  }
  DiffusionParams p;
  const double nn = static_cast<double>(n);
  p.c1 = 2.0 * s.a * (s.p1 - 0.5) * nn / t;
  p.alpha1 = s.a * s.a * nn / (2.0 * t);
  p.c2 = 2.0 * s.theta * (s.p2 - 0.5) * nn / t;
  p.alpha2 = s.theta * s.theta * nn / (two_q * t);
  p.t = t;
  return p;
}

StepDensity steps_for_continuum(const DiffusionParams& p, int n,
                                const Deformation& d) {
  validate(p);
  (void)d;
  if (n < 1) throw ValidationError("steps_for_continuum: n must be >= 1");
  if (!(p.t > 0.0)) throw ValidationError("steps_for_continuum: t must be > 0");
  if (!(p.alpha1 > 0.0)) {
    throw ValidationError("steps_for_continuum: alpha1 must be > 0");
  }
  StepDensity s;
  const double nn = static_cast<double>(n);
  s.a = std::sqrt(2.0 * p.alpha1 * p.t / nn);
  s.p1 = 0.5 + p.c1 * p.t / (2.0 * nn * s.a);
  // theta is kept at a unit-like scale; only the x-sector tie is needed by
  // the finite-n consistency checks.
  s.theta = 1.0;
  s.p2 = 0.5;
  if (s.p1 < 0.0 || s.p1 > 1.0) {
    throw ValidationError(
        "steps_for_continuum: drift too large for this n (p1 leaves [0,1])");
  }
  return s;
}

double gaussian_solution(double x, double t, const DiffusionParams& p) {
  validate(p);
  if (!(p.alpha1 > 0.0)) {
    throw ValidationError("gaussian_solution: alpha1 must be > 0");
  }
  if (!(t > 0.0)) throw ValidationError("gaussian_solution: t must be > 0");
  const double z = x - p.c1 * t;
  const double denom = 4.0 * p.alpha1 * t;
  return std::exp(-z * z / denom) / std::sqrt(std::numbers::pi * denom);
}

double gaussian_solution_alt_prefactor(double x, double t,
                                       const DiffusionParams& p) {
  validate(p);
  if (!(p.alpha1 > 0.0)) {
    throw ValidationError("gaussian_solution: alpha1 must be > 0");
  }
  if (!(t > 0.0)) throw ValidationError("gaussian_solution: t must be > 0");
  const double z = x - p.c1 * t;
  const double denom = 4.0 * p.alpha1 * t;
  return std::exp(-z * z / denom) / (std::numbers::pi * denom);
}

namespace {

double factorial(int n) {
  double acc = 1.0;
  for (int i = 2; i <= n; ++i) acc *= static_cast<double>(i);
  return acc;
}

}  // namespace

Complex xi_closed_form(double theta, double t, const DiffusionParams& p,
                       const Deformation& d) {
  validate(p);
  if (p.c2 == 0.0) {
    throw ValidationError("xi_closed_form: the tabulated profile divides by c2");
  }
  const Complex ratio = p.alpha2 / p.c2;
  Complex total{0.0, 0.0};
  for (int k = 0; k < d.order; ++k) {
    const int l_max = (k == 0) ? 0 : (k - 1) / 2;  // l < k/2, k = 0 boundary kept
    Complex inner{0.0, 0.0};
    for (int l = 0; l <= l_max; ++l) {
      inner += std::pow(p.c2 * t, k - l) * std::pow(ratio, l) *
               q_factorial(k, d) / (factorial(l) * factorial(k - 2 * l));
    }
    total += std::pow(theta, d.order - 1 - k) * inner;
  }
  return total;
}

XiPolynomial xi_sector_oracle(double t, const DiffusionParams& p,
                              const Deformation& d, const XiPolynomial& initial,
                              DstarVariant variant) {
  validate(p);
  if (initial.size() != d.order) {
    throw ValidationError("xi_sector_oracle: initial vector has wrong length");
  }
  const RepMatrix dstar = d_xi_star_matrix(d.order, variant);
  const RepMatrix gen = p.c2 * dstar + p.alpha2 * (dstar * dstar);
  return nilpotent_exp(gen, Complex{t, 0.0}) * initial;
}

XiPolynomial xi_sector_oracle(double t, const DiffusionParams& p,
                              const Deformation& d, DstarVariant variant) {
  XiPolynomial initial = XiPolynomial::Zero(d.order);
  initial(d.order - 1) = Complex{1.0, 0.0};
  return xi_sector_oracle(t, p, d, initial, variant);
}

namespace {

// Constant term of exp(t (c1 D_x + alpha1 D_x^2)) x^k: exact finite Taylor
// series on the degree-(k) coefficient vector.
double x_exponential_constant(int k, double c1, double alpha1, double t) {
  Eigen::VectorXd v = Eigen::VectorXd::Zero(k + 1);
  v(k) = 1.0;
  Eigen::VectorXd term = v;
  Eigen::VectorXd acc = v;
  for (int m = 1; m <= k; ++m) {
    Eigen::VectorXd next = Eigen::VectorXd::Zero(k + 1);
    for (int pw = 0; pw <= k; ++pw) {
      if (pw + 1 <= k) next(pw) += c1 * (pw + 1) * term(pw + 1);
      if (pw + 2 <= k) next(pw) += alpha1 * (pw + 1) * (pw + 2) * term(pw + 2);
    }
    term = (t / static_cast<double>(m)) * next;
    acc += term;
    if (term.cwiseAbs().maxCoeff() == 0.0) break;
  }
  return acc(0);
}

// (0, l) entry of exp(t (c2 D_xi + alpha2 D_xi^2)).
Complex xi_exponential_constant(int l, const DiffusionParams& p,
                                const Deformation& d) {
  const RepMatrix jac = d_xi_matrix(d.order);
  const RepMatrix gen = p.c2 * jac + p.alpha2 * (jac * jac);
  const RepMatrix u = nilpotent_exp(gen, Complex{p.t, 0.0});
  return u(0, l);
}

}  // namespace

Complex phi_infinity(const SmashElement& f, const DiffusionParams& p,
                     const Deformation& d) {
  validate(p);
  Complex total{0.0, 0.0};
  for (const auto& [key, c] : f.terms()) {
    total += c * x_exponential_constant(key.first, p.c1, p.alpha1, p.t) *
             xi_exponential_constant(key.second, p, d);
  }
  return total;
}

Complex phi_infinity_additive(const SmashElement& f, const DiffusionParams& p,
                              const Deformation& d) {
  validate(p);
  Complex x_term{0.0, 0.0}, xi_term{0.0, 0.0}, joint{0.0, 0.0};
  for (const auto& [key, c] : f.terms()) {
    const double xfac = x_exponential_constant(key.first, p.c1, p.alpha1, p.t);
    const Complex jfac = xi_exponential_constant(key.second, p, d);
    if (key.second == 0) x_term += c * xfac;
    if (key.first == 0) xi_term += c * jfac;
    joint += c * xfac * jfac;
  }
  return x_term + xi_term + joint;
}

SmashElement apply_function_generator(const SmashElement& f,
                                      const DiffusionParams& p,
                                      const Deformation& d) {
  SmashElement out(f.deformation(), f.x_cap());
  for (const auto& [key, c] : f.terms()) {
    const int k = key.first;
    const int l = key.second;
    if (k >= 1) out.add_term(k - 1, l, c * p.c1 * static_cast<double>(k));
    if (k >= 2) {
      out.add_term(k - 2, l,
                   c * p.alpha1 * static_cast<double>(k) * (k - 1.0));
    }
    if (l >= 1) out.add_term(k, l - 1, c * p.c2 * q_number(l, d));
    if (l >= 2) {
      out.add_term(k, l - 2,
                   c * p.alpha2 * q_number(l, d) * q_number(l - 1, d));
    }
  }
  return out;
}

ResidualField diffusion_residual_field(
    const std::function<Complex(int, double, double)>& rho, int components,
    const Eigen::VectorXd& xs, const std::vector<double>& ts, double dx,
    double dt_fd, const DiffusionParams& p, DstarVariant dvar,
    GeneratorVariant gvar) {
  if (components < 1) throw ValidationError("diffusion_residual: need >= 1 component");
  if (xs.size() < 3 || ts.empty() || !(dx > 0.0) || !(dt_fd > 0.0)) {
    throw ValidationError("diffusion_residual: degenerate grid");
  }
  const OperatorCoefficients oc = generator_coefficients(p, gvar);
  Eigen::MatrixXcd coupling = Eigen::MatrixXcd::Zero(components, components);
  if (components >= 2) {
    const RepMatrix dstar = d_xi_star_matrix(components, dvar);
    coupling = oc.dstar * dstar + oc.dstar2 * (dstar * dstar);
  }

  const Eigen::Index npts = xs.size();
  const Eigen::Index interior = npts - 2;
  ResidualField field;
  field.xs = xs.segment(1, interior);
  field.ts = ts;
  field.residual.setZero(interior, static_cast<Eigen::Index>(ts.size()));

  const int nthreads =
      std::min<int>(worker_count(), static_cast<int>(interior));

  for (size_t ti = 0; ti < ts.size(); ++ti) {
    const double t = ts[ti];
    auto work = [&](int tid) {
      std::vector<Complex> mid(static_cast<size_t>(components));
      for (Eigen::Index i = tid; i < interior; i += nthreads) {
        const double x = xs(i + 1);
        for (int k = 0; k < components; ++k) {
          mid[static_cast<size_t>(k)] = rho(k, x, t);
        }
        double point = 0.0;
        for (int k = 0; k < components; ++k) {
          const Complex dt_term =
              (rho(k, x, t + dt_fd) - rho(k, x, t - dt_fd)) / (2.0 * dt_fd);
          const Complex up = rho(k, x + dx, t);
          const Complex down = rho(k, x - dx, t);
          Complex spatial = oc.dx * (up - down) / (2.0 * dx) +
                            oc.dxx * (up - 2.0 * mid[static_cast<size_t>(k)] + down) /
                                (dx * dx);
          for (int j = 0; j < components; ++j) {
            const Complex cc = coupling(k, j);
            if (cc != Complex{0.0, 0.0}) spatial += cc * mid[static_cast<size_t>(j)];
          }
          point = std::max(point, std::abs(dt_term - spatial));
        }
        field.residual(i, static_cast<Eigen::Index>(ti)) = point;
      }
    };
    if (nthreads <= 1) {
      work(0);
    } else {
      std::vector<std::thread> pool;
      pool.reserve(static_cast<size_t>(nthreads));
      for (int tid = 0; tid < nthreads; ++tid) pool.emplace_back(work, tid);
      for (std::thread& th : pool) th.join();
    }
  }
  return field;
}

double diffusion_residual(
    const std::function<Complex(int, double, double)>& rho, int components,
    const Eigen::VectorXd& xs, const std::vector<double>& ts, double dx,
    double dt_fd, const DiffusionParams& p, DstarVariant dvar,
    GeneratorVariant gvar) {
  const ResidualField field = diffusion_residual_field(rho, components, xs, ts,
                                                       dx, dt_fd, p, dvar, gvar);
  return field.residual.maxCoeff();
}

double diffusion_residual(const std::vector<SystemState>& series,
                          const DiffusionParams& p, DstarVariant dvar,
                          GeneratorVariant gvar) {
  if (series.size() < 3) {
    throw ValidationError("diffusion_residual: need at least three snapshots");
  }
  const double dt = series[1].time - series[0].time;
  for (size_t m = 1; m < series.size(); ++m) {
    if (std::abs(series[m].time - series[m - 1].time - dt) > 1e-12 * (1.0 + dt)) {
      throw ValidationError("diffusion_residual: snapshots must be uniform in time");
    }
  }
  const Eigen::VectorXd& xs = series[0].x;
  const double dx = xs(1) - xs(0);
  const int ncomp = static_cast<int>(series[0].components.cols());

  std::vector<double> ts;
  for (size_t m = 1; m + 1 < series.size(); ++m) ts.push_back(series[m].time);

  auto lookup = [&](int k, double x, double t) -> Complex {
    const auto mi = static_cast<size_t>(
        std::llround((t - series[0].time) / dt));
    const auto xi = static_cast<Eigen::Index>(std::llround((x - xs(0)) / dx));
    return series[mi].components(xi, k);
  };
  return diffusion_residual(lookup, ncomp, xs, ts, dx, dt, p, dvar, gvar);
}

}  // namespace smashline
