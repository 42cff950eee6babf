#include "smashline/matrix_realization.hpp"

#include <Eigen/SparseCore>
#include <Eigen/SparseLU>
#include <algorithm>
#include <cmath>
#include <functional>
#include <string>

#include "smashline/qcalculus.hpp"

namespace smashline {

namespace {

void require_dim(int n_dim, const char* who) {
  if (n_dim < 2) {
    throw ValidationError(std::string(who) + ": dimension must be >= 2");
  }
}

}  // namespace

RepMatrix xi_matrix(int n_dim) {
  require_dim(n_dim, "xi_matrix");
  RepMatrix m = RepMatrix::Zero(n_dim, n_dim);
  for (int i = 0; i + 1 < n_dim; ++i) m(i, i + 1) = Complex{1.0, 0.0};
  return m;
}

RepMatrix d_xi_matrix(int n_dim) {
  require_dim(n_dim, "d_xi_matrix");
  const Deformation d(n_dim);
  RepMatrix m = RepMatrix::Zero(n_dim, n_dim);
  for (int i = 0; i + 1 < n_dim; ++i) m(i, i + 1) = q_number(i + 1, d);
  return m;
}

Eigen::VectorXcd lambda_entries(int n_dim, DstarVariant variant) {
  require_dim(n_dim, "lambda_entries");
  const Deformation d(n_dim);
  Eigen::VectorXcd lam(n_dim - 1);
  for (int i = 1; i < n_dim; ++i) {
    const Complex bracket = q_number(i, d);
    if (variant == DstarVariant::printed) {
      lam(i - 1) = bracket * std::exp(d.q_pow(-1) * bracket);
    } else {
      lam(i - 1) = -d.q_pow(-i) * bracket;
    }
  }
  return lam;
}

RepMatrix d_xi_star_matrix(int n_dim, DstarVariant variant) {
  const Eigen::VectorXcd lam = lambda_entries(n_dim, variant);
  RepMatrix m = RepMatrix::Zero(n_dim, n_dim);
  for (int i = 0; i + 1 < n_dim; ++i) m(i, i + 1) = lam(i);
  return m;
}

RepMatrix nilpotent_exp(const RepMatrix& g, Complex t) {
  if (g.rows() != g.cols()) {
    throw ValidationError("nilpotent_exp: matrix must be square");
  }
  const Eigen::Index n = g.rows();
  RepMatrix acc = RepMatrix::Identity(n, n);
  RepMatrix term = RepMatrix::Identity(n, n);
  for (Eigen::Index m = 1; m < n; ++m) {
    term = (t / static_cast<double>(m)) * (g * term).eval();
    if (term.cwiseAbs().maxCoeff() == 0.0) break;
    acc += term;
  }
  return acc;
}

CoupledOperator assemble_H(int n_dim, const DiffusionParams& p,
                           DstarVariant dvar, GeneratorVariant gvar) {
  require_dim(n_dim, "assemble_H");
  const OperatorCoefficients oc = generator_coefficients(p, gvar);
  CoupledOperator op;
  op.components = n_dim;
  op.advection = oc.dx;
  op.diffusivity = oc.dxx;
  op.lambdas = lambda_entries(n_dim, dvar);
  const RepMatrix dstar = d_xi_star_matrix(n_dim, dvar);
  op.coupling = oc.dstar * dstar + oc.dstar2 * (dstar * dstar);
  return op;
}

void validate(const GridSpec& g, const DiffusionParams& p) {
  validate(p);
  if (!(g.x_max > g.x_min)) throw ValidationError("grid: x_max must exceed x_min");
  if (!(g.dx > 0.0)) throw ValidationError("grid: dx must be > 0");
  if (!(g.dt > 0.0)) throw ValidationError("grid: dt must be > 0");
  if (!(g.t_end > 0.0)) throw ValidationError("grid: t_end must be > 0");
  if ((g.x_max - g.x_min) / g.dx < 4.0) {
    throw ValidationError("grid: degenerate (fewer than 5 points)");
  }
  if (g.scheme == Scheme::explicit_rk4 &&
      p.alpha1 * g.dt / (g.dx * g.dx) > 0.25) {
    throw ValidationError(
        "grid: explicit scheme violates the stability bound "
        "alpha1*dt/dx^2 <= 0.25");
  }
}

Eigen::VectorXd make_grid(const GridSpec& g) {
  const auto n = static_cast<Eigen::Index>(
      std::llround((g.x_max - g.x_min) / g.dx)) + 1;
  Eigen::VectorXd xs(n);
  for (Eigen::Index i = 0; i < n; ++i) xs(i) = g.x_min + static_cast<double>(i) * g.dx;
  return xs;
}

SystemState make_state(const GridSpec& g,
                       const std::vector<GaussianMixture>& components,
                       double time) {
  SystemState st;
  st.time = time;
  st.x = make_grid(g);
  st.components.resize(st.x.size(), static_cast<Eigen::Index>(components.size()));
  for (size_t k = 0; k < components.size(); ++k) {
    st.components.col(static_cast<Eigen::Index>(k)) = components[k].sample(st.x);
  }
  return st;
}

namespace {

// Tridiagonal discretization of advection * D_x + diffusivity * D_x^2 on the
// interior points, zero Dirichlet boundaries.
Eigen::SparseMatrix<double> discretize_hx(const CoupledOperator& op,
                                          const GridSpec& g,
                                          Eigen::Index interior) {
  const double dx = g.dx;
  const double diff = op.diffusivity / (dx * dx);
  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(static_cast<size_t>(interior) * 3);
  double lower, center, upper;
  if (g.upwind_advection) {
    // Profiles move with speed -advection; difference into the wind.
    const double a = op.advection;
    if (a >= 0.0) {
      lower = diff;
      center = -2.0 * diff - a / dx;
      upper = diff + a / dx;
    } else {
      lower = diff - a / dx;
      center = -2.0 * diff + a / dx;
      upper = diff;
    }
  } else {
    lower = diff - op.advection / (2.0 * dx);
    center = -2.0 * diff;
    upper = diff + op.advection / (2.0 * dx);
  }
  for (Eigen::Index i = 0; i < interior; ++i) {
    if (i > 0) trips.emplace_back(i, i - 1, lower);
    trips.emplace_back(i, i, center);
    if (i + 1 < interior) trips.emplace_back(i, i + 1, upper);
  }
  Eigen::SparseMatrix<double> a(interior, interior);
  a.setFromTriplets(trips.begin(), trips.end());
  return a;
}

Eigen::VectorXcd solve_real_lu(const Eigen::SparseLU<Eigen::SparseMatrix<double>>& lu,
                               const Eigen::VectorXcd& rhs) {
  const Eigen::VectorXd re = lu.solve(rhs.real());
  const Eigen::VectorXd im = lu.solve(rhs.imag());
  return re + Complex{0.0, 1.0} * im;
}

}  // namespace

SolveResult solve_system(const GridSpec& g, const DiffusionParams& p,
                         const SystemState& initial, DstarVariant dvar,
                         GeneratorVariant gvar) {
  validate(g, p);
  const int ncomp = static_cast<int>(initial.components.cols());
  if (ncomp < 2) throw ValidationError("solve_system: need >= 2 components");
  const CoupledOperator op = assemble_H(ncomp, p, dvar, gvar);

  const Eigen::Index npts = initial.x.size();
  if (initial.components.rows() != npts) {
    throw ValidationError("solve_system: grid/component size mismatch");
  }
  const Eigen::Index interior = npts - 2;

  const long steps = std::max(1L, std::lround(g.t_end / g.dt));
  const double dt = g.t_end / static_cast<double>(steps);

  Eigen::MatrixXcd u = initial.components;
  u.row(0).setZero();
  u.row(npts - 1).setZero();

  const Eigen::SparseMatrix<double> a = discretize_hx(op, g, interior);
  Eigen::SparseMatrix<double> ident(interior, interior);
  ident.setIdentity();

  Eigen::SparseMatrix<double> m_rhs;
  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
  if (g.scheme == Scheme::crank_nicolson) {
    Eigen::SparseMatrix<double> m_lhs = ident - (dt / 2.0) * a;
    m_rhs = ident + (dt / 2.0) * a;
    m_lhs.makeCompressed();
    lu.compute(m_lhs);
    if (lu.info() != Eigen::Success) {
      throw InstabilityError("solve_system: Crank-Nicolson factorization failed");
    }
  }

  const double initial_scale = u.cwiseAbs().maxCoeff() + 1.0;

  SolveResult result;
  result.dt_effective = dt;
  SystemState snap0 = initial;
  snap0.components = u;
  result.snapshots.push_back(std::move(snap0));

  auto coupling_term = [&](const Eigen::MatrixXcd& state, int k) {
    Eigen::VectorXcd src = Eigen::VectorXcd::Zero(interior);
    for (int j = k + 1; j < ncomp; ++j) {
      const Complex c = op.coupling(k, j);
      if (c != Complex{0.0, 0.0}) {
        src += c * state.col(j).segment(1, interior);
      }
    }
    return src;
  };

  auto record_boundary = [&](double& acc) {
    for (int k = 0; k < ncomp; ++k) {
      acc = std::max(acc, std::abs(u(1, k)));
      acc = std::max(acc, std::abs(u(npts - 2, k)));
    }
  };
  record_boundary(result.max_boundary_density);

  const bool want_intermediate = g.snapshot_stride > 0;

  for (long step = 0; step < steps; ++step) {
    if (g.scheme == Scheme::crank_nicolson) {
      // Descending component order: the strictly upper coupling then sees
      // already-updated sources, keeping the trapezoidal rule second order.
      const Eigen::MatrixXcd old = u;
      for (int k = ncomp - 1; k >= 0; --k) {
        Eigen::VectorXcd rhs = m_rhs * old.col(k).segment(1, interior);
        rhs += (dt / 2.0) * (coupling_term(old, k) + coupling_term(u, k));
        u.col(k).segment(1, interior) = solve_real_lu(lu, rhs);
      }
    } else {
      auto rhs_of = [&](const Eigen::MatrixXcd& state) {
        Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(npts, ncomp);
        for (int k = 0; k < ncomp; ++k) {
          Eigen::VectorXcd hk =
              a.cast<Complex>() * state.col(k).segment(1, interior);
          out.col(k).segment(1, interior) = hk + coupling_term(state, k);
        }
        return out;
      };
      const Eigen::MatrixXcd k1 = rhs_of(u);
      const Eigen::MatrixXcd k2 = rhs_of(u + (dt / 2.0) * k1);
      const Eigen::MatrixXcd k3 = rhs_of(u + (dt / 2.0) * k2);
      const Eigen::MatrixXcd k4 = rhs_of(u + dt * k3);
      u += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
      u.row(0).setZero();
      u.row(npts - 1).setZero();
    }

    record_boundary(result.max_boundary_density);
    if ((step & 15) == 0 || step + 1 == steps) {
      const double mag = u.cwiseAbs().maxCoeff();
      if (!std::isfinite(mag) || mag > 1e6 * initial_scale) {
        throw InstabilityError("solve_system: norm growth exceeded 1e6, solution is unstable");
      }
    }

    if ((want_intermediate && (step + 1) % g.snapshot_stride == 0 &&
         step + 1 < steps) ||
        step + 1 == steps) {
      SystemState snap;
      snap.time = initial.time + static_cast<double>(step + 1) * dt;
      snap.x = initial.x;
      snap.components = u;
      result.snapshots.push_back(std::move(snap));
    }
  }

  if (result.max_boundary_density * g.dx > 1e-10) {
    throw InstabilityError(
        "solve_system: boundary mass exceeds 1e-10; widen the domain");
  }
  result.steps = steps;
  return result;
}

namespace {

// Adaptive Simpson quadrature over mixture-valued integrands. Accuracy is
// measured by evaluating the correction on a fixed probe set.
class MixtureQuadrature {
 public:
  MixtureQuadrature(std::function<GaussianMixture(double)> f,
                    std::vector<double> probes, double tol)
      : f_(std::move(f)), probes_(std::move(probes)), tol_(tol) {}

  GaussianMixture integrate(double a, double b) {
    const GaussianMixture fa = f_(a);
    const GaussianMixture fm = f_(0.5 * (a + b));
    const GaussianMixture fb = f_(b);
    GaussianMixture whole = simpson(a, b, fa, fm, fb);
    GaussianMixture out = recurse(a, b, fa, fm, fb, whole, tol_, 0);
    out.compact();
    return out;
  }

 private:
  static GaussianMixture simpson(double a, double b, const GaussianMixture& fa,
                                 const GaussianMixture& fm,
                                 const GaussianMixture& fb) {
    const double h = (b - a) / 6.0;
    GaussianMixture s;
    s.add_scaled(fa, h);
    s.add_scaled(fm, 4.0 * h);
    s.add_scaled(fb, h);
    s.compact();
    return s;
  }

  double probe_norm(const GaussianMixture& left, const GaussianMixture& right,
                    const GaussianMixture& whole) const {
    double m = 0.0;
    for (double x : probes_) {
      const Complex v =
          left.evaluate(x) + right.evaluate(x) - whole.evaluate(x);
      m = std::max(m, std::abs(v));
    }
    return m;
  }

  GaussianMixture recurse(double a, double b, const GaussianMixture& fa,
                          const GaussianMixture& fm, const GaussianMixture& fb,
                          const GaussianMixture& whole, double tol, int depth) {
    const double m = 0.5 * (a + b);
    const GaussianMixture fl = f_(0.5 * (a + m));
    const GaussianMixture fr = f_(0.5 * (m + b));
    GaussianMixture left = simpson(a, m, fa, fl, fm);
    GaussianMixture right = simpson(m, b, fm, fr, fb);
    const double err = probe_norm(left, right, whole);
    if (depth >= kMaxDepth || err <= 15.0 * tol) {
      GaussianMixture out;
      out.add_scaled(left, 1.0);
      out.add_scaled(right, 1.0);
      // Richardson tail: (S_left + S_right - S_whole) / 15
      out.add_scaled(left, 1.0 / 15.0);
      out.add_scaled(right, 1.0 / 15.0);
      out.add_scaled(whole, -1.0 / 15.0);
      out.compact();
      return out;
    }
    GaussianMixture gl = recurse(a, m, fa, fl, fm, left, tol / 2.0, depth + 1);
    GaussianMixture gr = recurse(m, b, fm, fr, fb, right, tol / 2.0, depth + 1);
    gl.add_scaled(gr, 1.0);
    gl.compact();
    return gl;
  }

  static constexpr int kMaxDepth = 24;

  std::function<GaussianMixture(double)> f_;
  std::vector<double> probes_;
  double tol_;
};

std::vector<double> probe_points(const std::vector<GaussianMixture>& initial,
                                 double drift, double alpha, double t) {
  double lo = 0.0, hi = 0.0;
  bool any = false;
  for (const GaussianMixture& m : initial) {
    for (const GaussianTerm& g : m.terms()) {
      const double spread = 4.0 * std::sqrt(g.variance + 2.0 * alpha * t);
      const double m0 = g.mean;
      const double m1 = g.mean + drift * t;
      const double a = std::min(m0, m1) - spread;
      const double b = std::max(m0, m1) + spread;
      if (!any) {
        lo = a;
        hi = b;
        any = true;
      } else {
        lo = std::min(lo, a);
        hi = std::max(hi, b);
      }
    }
  }
  if (!any) {
    lo = -1.0;
    hi = 1.0;
  }
  std::vector<double> probes;
  const int count = 33;
  probes.reserve(count);
  for (int i = 0; i < count; ++i) {
    probes.push_back(lo + (hi - lo) * static_cast<double>(i) /
                              static_cast<double>(count - 1));
  }
  return probes;
}

}  // namespace

std::vector<GaussianMixture> duhamel_oracle(
    const DiffusionParams& p, const std::vector<GaussianMixture>& initial,
    double t, DstarVariant dvar, GeneratorVariant gvar, double quad_tol) {
  const int ncomp = static_cast<int>(initial.size());
  if (ncomp < 2) throw ValidationError("duhamel_oracle: need >= 2 components");
  if (t < 0.0) throw ValidationError("duhamel_oracle: t must be >= 0");
  const CoupledOperator op = assemble_H(ncomp, p, dvar, gvar);
  const double drift = -op.advection;  // d_t u = adv*u_x drifts with -adv
  const std::vector<double> probes =
      probe_points(initial, drift, op.diffusivity, t);

  // rho_k(s), solved from the top of the triangle downward.
  std::function<GaussianMixture(int, double)> rho = [&](int k,
                                                        double s) -> GaussianMixture {
    GaussianMixture out = initial[static_cast<size_t>(k)].evolved(
        drift, op.diffusivity, s);
    bool coupled = false;
    for (int j = k + 1; j < ncomp && j <= k + 2; ++j) {
      if (op.coupling(k, j) != Complex{0.0, 0.0}) coupled = true;
    }
    if (!coupled || s <= 0.0) return out;

    auto integrand = [&](double u) {
      GaussianMixture src;
      for (int j = k + 1; j < ncomp && j <= k + 2; ++j) {
        const Complex c = op.coupling(k, j);
        if (c != Complex{0.0, 0.0}) src.add_scaled(rho(j, u), c);
      }
      return src.evolved(drift, op.diffusivity, s - u);
    };
    MixtureQuadrature quad(integrand, probes, quad_tol);
    out.add_scaled(quad.integrate(0.0, s), 1.0);
    out.compact();
    return out;
  };

  std::vector<GaussianMixture> result;
  result.reserve(static_cast<size_t>(ncomp));
  for (int k = 0; k < ncomp; ++k) result.push_back(rho(k, t));
  return result;
}

}  // namespace smashline
