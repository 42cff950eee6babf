// smashline: braided random-walk moments, coproduct tables, and the coupled
// drift-diffusion system, from one batch front-end. All commands are
// deterministic: identical configuration produces byte-identical data files.

#include <CLI11.hpp>
#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "smashline/diffusion.hpp"
#include "smashline/random_walk.hpp"
#include "smashline/serialize.hpp"
#include "smashline/verification.hpp"

namespace sm = smashline;
using sm::Complex;
using sm::Json;

namespace {

struct CommonOut {
  std::string output;
  std::string summary;  // defaults to <output>.summary.json
};

Json g_config;  // preloaded --config contents, if any

Json load_config_file(int argc, char** argv) {
  std::string path;
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--config" && i + 1 < argc) {
      path = argv[i + 1];
      break;
    }
    if (arg.rfind("--config=", 0) == 0) {
      path = arg.substr(9);
      break;
    }
  }
  if (path.empty()) return Json::object();
  std::ifstream in(path);
  if (!in) throw sm::ValidationError("cannot open config file: " + path);
  Json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw sm::ValidationError(std::string("config file is not valid JSON: ") +
                              e.what());
  }
  if (!j.is_object()) throw sm::ValidationError("config file must hold a JSON object");
  return j;
}

// Pulls a config value into `var` if the key is present; flags given on the
// command line override afterwards through CLI11.
template <typename T>
void from_config(const char* key, T& var, std::vector<std::string>& known) {
  known.push_back(key);
  if (g_config.contains(key)) {
    try {
      var = g_config.at(key).get<T>();
    } catch (const std::exception&) {
      throw sm::ValidationError(std::string("config key '") + key +
                                "' has the wrong type");
    }
  }
}

void reject_unknown_config_keys(const std::vector<std::string>& known) {
  for (const auto& [key, value] : g_config.items()) {
    if (std::find(known.begin(), known.end(), key) == known.end()) {
      throw sm::ValidationError("unknown config key: " + key);
    }
  }
}

std::string csv_complex_row(std::initializer_list<std::string> cells) {
  std::string row;
  bool first = true;
  for (const std::string& c : cells) {
    if (!first) row += ',';
    row += c;
    first = false;
  }
  row += '\n';
  return row;
}

void write_summary(const CommonOut& out, const std::string& command,
                   const Json& config_echo, const Json& extra,
                   double wall_seconds) {
  Json summary{
      {"command", command},
      {"config", config_echo},
      {"decisions",
       {{"dstar_variant_default", "printed"},
        {"gaussian_prefactor_exponent", -0.5},
        {"phi_infinity_reading", "sector-routed"}}},
      {"wall_time_s", wall_seconds},
      {"outputs", Json::array({out.output})},
  };
  for (const auto& [k, v] : extra.items()) summary[k] = v;
  const std::string path =
      out.summary.empty() ? out.output + ".summary.json" : out.summary;
  sm::write_text_file(path, summary.dump(2) + "\n");
}

// ---------------------------------------------------------------------------

struct MomentsConfig {
  int n = 3, k_max = 2, l_max = 1, order = 2;
  double braiding = 1.0, a = 1.0, p1 = 0.5, theta = 1.0, p2 = 0.5;
  bool oracle = false;
  std::string format = "csv";
};

int run_moments(const MomentsConfig& cfg, const CommonOut& out) {
  const auto start = std::chrono::steady_clock::now();
  const sm::Deformation d(cfg.order);
  if (cfg.l_max >= cfg.order) {
    throw sm::ValidationError(
        "l_max = " + std::to_string(cfg.l_max) +
        " exceeds the nilpotency bound N-1 = " + std::to_string(cfg.order - 1) +
        " (xi^N = 0)");
  }
  if (cfg.k_max < 0 || cfg.l_max < 0) {
    throw sm::ValidationError("k_max and l_max must be nonnegative");
  }
  sm::WalkSpec walk{{cfg.a, cfg.p1, cfg.theta, cfg.p2}, cfg.n, d, cfg.braiding};
  validate(walk);
  if (cfg.format != "csv" && cfg.format != "json") {
    throw sm::ValidationError("format must be 'csv' or 'json'");
  }

  std::string csv = "k,l,n,re,im\n";
  Json json_rows = Json::array();
  double max_dev = 0.0;
  Json cells = Json::array();
  for (int k = 0; k <= cfg.k_max; ++k) {
    for (int l = 0; l <= cfg.l_max; ++l) {
      const Complex m = sm::moment(k, l, walk);
      csv += csv_complex_row({std::to_string(k), std::to_string(l),
                              std::to_string(cfg.n), sm::format_double(m.real()),
                              sm::format_double(m.imag())});
      json_rows.push_back(Json{{"k", k},
                               {"l", l},
                               {"n", cfg.n},
                               {"re", m.real()},
                               {"im", m.imag()}});
      if (cfg.oracle) {
        const Complex o = sm::moment_oracle(k, l, walk);
        const double dev = std::abs(m - o);
        max_dev = std::max(max_dev, dev);
        cells.push_back(Json{{"k", k},
                             {"l", l},
                             {"moment", sm::complex_to_json(m)},
                             {"oracle", sm::complex_to_json(o)},
                             {"abs_diff", dev}});
      }
    }
  }
  if (cfg.format == "json") {
    sm::write_text_file(out.output, json_rows.dump(2) + "\n");
  } else {
    sm::write_text_file(out.output, csv);
  }

  Json echo{{"n", cfg.n},     {"k_max", cfg.k_max}, {"l_max", cfg.l_max},
            {"N", cfg.order}, {"Q", cfg.braiding},  {"a", cfg.a},
            {"p1", cfg.p1},   {"theta", cfg.theta}, {"p2", cfg.p2},
            {"oracle", cfg.oracle}, {"format", cfg.format}};
  Json extra = Json::object();
  if (cfg.oracle) {
    extra["oracle_comparison"] =
        Json{{"max_abs_deviation", max_dev}, {"cells", cells}};
  }
  const double wall = std::chrono::duration<double>(
                          std::chrono::steady_clock::now() - start)
                          .count();
  write_summary(out, "moments", echo, extra, wall);
  return 0;
}

// ---------------------------------------------------------------------------

struct CoproductConfig {
  int k = 1, l = 0, slots = 2, order = 2;
};

int run_coproduct(const CoproductConfig& cfg, const CommonOut& out) {
  const auto start = std::chrono::steady_clock::now();
  const sm::Deformation d(cfg.order);
  const sm::MultiSlotExpansion e = sm::coproduct_power(cfg.k, cfg.l, cfg.slots, d);
  sm::write_text_file(out.output, sm::to_json(e).dump(2) + "\n");
  Json echo{{"k", cfg.k}, {"l", cfg.l}, {"slots", cfg.slots}, {"N", cfg.order}};
  const double wall = std::chrono::duration<double>(
                          std::chrono::steady_clock::now() - start)
                          .count();
  write_summary(out, "coproduct", echo, Json::object(), wall);
  return 0;
}

// ---------------------------------------------------------------------------

struct DiffusionConfig {
  int order = 2;
  double c1 = 0.0, alpha1 = 1.0, c2 = 0.0, alpha2_re = 0.0, alpha2_im = 0.0;
  double lambda = 0.0, lambda_tilde = 0.0;
  std::string dstar = "printed";
  std::string generator = "stationary";
  // solve
  double x_min = -10.0, x_max = 10.0, dx = 0.01, dt = 1e-3, t_end = 1.0;
  std::string scheme = "cn";
  int stride = 0;
  bool upwind = false;
  double init_mean = 0.0, init_sigma = 0.05;
  // closed-form / residual
  double t = 1.0;
  double theta_max = 1.0, dtheta = 0.25;
  double t_min = 0.5, t_max = 2.0;
  int t_count = 4;
  double fd_dt = 1e-5;
};

sm::DstarVariant parse_dstar(const std::string& s) {
  if (s == "printed") return sm::DstarVariant::printed;
  if (s == "algebraic") return sm::DstarVariant::algebraic;
  throw sm::ValidationError("dstar variant must be 'printed' or 'algebraic'");
}

sm::GeneratorVariant parse_generator(const std::string& s) {
  if (s == "stationary") return sm::GeneratorVariant::stationary;
  if (s == "nonstationary") return sm::GeneratorVariant::nonstationary;
  throw sm::ValidationError("generator must be 'stationary' or 'nonstationary'");
}

sm::DiffusionParams params_of(const DiffusionConfig& cfg, double t) {
  sm::DiffusionParams p;
  p.c1 = cfg.c1;
  p.alpha1 = cfg.alpha1;
  p.c2 = cfg.c2;
  p.alpha2 = Complex{cfg.alpha2_re, cfg.alpha2_im};
  p.lambda = cfg.lambda;
  p.lambda_tilde = cfg.lambda_tilde;
  p.t = t;
  validate(p);
  return p;
}

Json diffusion_echo(const DiffusionConfig& cfg) {
  return Json{{"N", cfg.order},
              {"c1", cfg.c1},
              {"alpha1", cfg.alpha1},
              {"c2", cfg.c2},
              {"alpha2_re", cfg.alpha2_re},
              {"alpha2_im", cfg.alpha2_im},
              {"lambda", cfg.lambda},
              {"lambda_tilde", cfg.lambda_tilde},
              {"dstar", cfg.dstar},
              {"generator", cfg.generator}};
}

int run_diffusion_solve(const DiffusionConfig& cfg, const CommonOut& out) {
  const auto start = std::chrono::steady_clock::now();
  const sm::DiffusionParams p = params_of(cfg, cfg.t_end);
  const sm::DstarVariant dvar = parse_dstar(cfg.dstar);
  const sm::GeneratorVariant gvar = parse_generator(cfg.generator);

  sm::GridSpec grid;
  grid.x_min = cfg.x_min;
  grid.x_max = cfg.x_max;
  grid.dx = cfg.dx;
  grid.dt = cfg.dt;
  grid.t_end = cfg.t_end;
  grid.snapshot_stride = cfg.stride;
  grid.upwind_advection = cfg.upwind;
  if (cfg.scheme == "cn") {
    grid.scheme = sm::Scheme::crank_nicolson;
  } else if (cfg.scheme == "rk4") {
    grid.scheme = sm::Scheme::explicit_rk4;
  } else {
    throw sm::ValidationError("scheme must be 'cn' or 'rk4'");
  }
  if (!(cfg.init_sigma > 0.0)) {
    throw sm::ValidationError("init_sigma must be > 0");
  }

  std::vector<sm::GaussianMixture> initial;
  for (int k = 0; k < cfg.order; ++k) {
    initial.push_back(sm::GaussianMixture::gaussian(
        Complex{1.0, 0.0}, cfg.init_mean, cfg.init_sigma * cfg.init_sigma));
  }
  const sm::SystemState init_state = sm::make_state(grid, initial);
  const sm::SolveResult result = sm::solve_system(grid, p, init_state, dvar, gvar);

  std::string csv = "x,t,k,re,im\n";
  for (const sm::SystemState& snap : result.snapshots) {
    for (int k = 0; k < cfg.order; ++k) {
      for (Eigen::Index i = 0; i < snap.x.size(); ++i) {
        const Complex v = snap.components(i, k);
        csv += csv_complex_row({sm::format_double(snap.x(i)),
                                sm::format_double(snap.time), std::to_string(k),
                                sm::format_double(v.real()),
                                sm::format_double(v.imag())});
      }
    }
  }
  sm::write_text_file(out.output, csv);

  Json extra{{"steps", result.steps},
             {"dt_effective", result.dt_effective},
             {"max_boundary_density", result.max_boundary_density}};

  // All-components-equal flag: with the coupling off, every column evolves
  // identically from identical initial data.
  {
    const sm::SystemState& last = result.snapshots.back();
    double comp_dev = 0.0;
    for (int k = 1; k < cfg.order; ++k) {
      comp_dev = std::max(comp_dev, (last.components.col(k) - last.components.col(0))
                                        .cwiseAbs()
                                        .maxCoeff());
    }
    extra["all_components_equal"] = comp_dev < 1e-12;
  }

  if (cfg.order <= 3) {
    const std::vector<sm::GaussianMixture> oracle =
        sm::duhamel_oracle(p, initial, cfg.t_end, dvar, gvar);
    const sm::SystemState& last = result.snapshots.back();
    double num = 0.0, den = 0.0;
    Json per_component = Json::array();
    for (int k = 0; k < cfg.order; ++k) {
      const Eigen::VectorXcd ref = oracle[static_cast<size_t>(k)].sample(last.x);
      const double nk = (last.components.col(k) - ref).squaredNorm();
      const double dk = ref.squaredNorm();
      num += nk;
      den += dk;
      per_component.push_back(
          Json{{"k", k}, {"rel_l2", dk > 0.0 ? std::sqrt(nk / dk) : 0.0}});
    }
    extra["oracle_comparison"] = Json{
        {"rel_l2", den > 0.0 ? std::sqrt(num / den) : 0.0},
        {"per_component", per_component}};
  }

  const double wall = std::chrono::duration<double>(
                          std::chrono::steady_clock::now() - start)
                          .count();
  Json echo = diffusion_echo(cfg);
  echo["x_min"] = cfg.x_min;
  echo["x_max"] = cfg.x_max;
  echo["dx"] = cfg.dx;
  echo["dt"] = cfg.dt;
  echo["t_end"] = cfg.t_end;
  echo["scheme"] = cfg.scheme;
  echo["stride"] = cfg.stride;
  echo["init_mean"] = cfg.init_mean;
  echo["init_sigma"] = cfg.init_sigma;
  write_summary(out, "diffusion solve", echo, extra, wall);
  return 0;
}

int run_diffusion_closed_form(const DiffusionConfig& cfg, const CommonOut& out) {
  const auto start = std::chrono::steady_clock::now();
  const sm::DiffusionParams p = params_of(cfg, cfg.t);
  const sm::Deformation d(cfg.order);
  const sm::DstarVariant dvar = parse_dstar(cfg.dstar);

  std::string csv = "x,t,re,im,residual\n";
  const auto npts = static_cast<Eigen::Index>(
                        std::llround((cfg.x_max - cfg.x_min) / cfg.dx)) + 1;
  for (Eigen::Index i = 0; i < npts; ++i) {
    const double x = cfg.x_min + static_cast<double>(i) * cfg.dx;
    const double g = sm::gaussian_solution(x, cfg.t, p);
    csv += csv_complex_row({sm::format_double(x), sm::format_double(cfg.t),
                            sm::format_double(g), sm::format_double(0.0),
                            sm::format_double(0.0)});
  }
  sm::write_text_file(out.output, csv);

  // xi-sector rows go to a sibling file with the same five-column schema;
  // the residual column carries |closed form - oracle|.
  std::string xi_csv = "x,t,re,im,residual\n";
  const sm::XiPolynomial oracle = sm::xi_sector_oracle(cfg.t, p, d, dvar);
  double max_diff = 0.0;
  for (double theta = 0.0; theta <= cfg.theta_max + 1e-12; theta += cfg.dtheta) {
    Complex poly{0.0, 0.0};
    double tp = 1.0;
    for (int m = 0; m < cfg.order; ++m) {
      poly += oracle(m) * tp;
      tp *= theta;
    }
    const Complex closed = sm::xi_closed_form(theta, cfg.t, p, d);
    const double diff = std::abs(closed - poly);
    max_diff = std::max(max_diff, diff);
    xi_csv += csv_complex_row({sm::format_double(theta), sm::format_double(cfg.t),
                               sm::format_double(closed.real()),
                               sm::format_double(closed.imag()),
                               sm::format_double(diff)});
  }
  std::string xi_path = out.output;
  const size_t dot = xi_path.rfind('.');
  xi_path = (dot == std::string::npos ? xi_path : xi_path.substr(0, dot)) +
            "_xi.csv";
  sm::write_text_file(xi_path, xi_csv);

  Json echo = diffusion_echo(cfg);
  echo["t"] = cfg.t;
  echo["x_min"] = cfg.x_min;
  echo["x_max"] = cfg.x_max;
  echo["dx"] = cfg.dx;
  echo["theta_max"] = cfg.theta_max;
  echo["dtheta"] = cfg.dtheta;
  Json extra{{"xi_output", xi_path},
             {"xi_max_abs_difference_vs_oracle", max_diff}};
  const double wall = std::chrono::duration<double>(
                          std::chrono::steady_clock::now() - start)
                          .count();
  write_summary(out, "diffusion closed-form", echo, extra, wall);
  return 0;
}

int run_diffusion_residual(const DiffusionConfig& cfg, const CommonOut& out) {
  const auto start = std::chrono::steady_clock::now();
  const sm::DiffusionParams p = params_of(cfg, cfg.t);
  const sm::DstarVariant dvar = parse_dstar(cfg.dstar);
  const sm::GeneratorVariant gvar = parse_generator(cfg.generator);
  if (cfg.t_count < 1) throw sm::ValidationError("t_count must be >= 1");
  if (!(cfg.t_min > 0.0) || cfg.t_max < cfg.t_min) {
    throw sm::ValidationError("need 0 < t_min <= t_max");
  }

  const auto npts = static_cast<Eigen::Index>(
                        std::llround((cfg.x_max - cfg.x_min) / cfg.dx)) + 1;
  Eigen::VectorXd xs(npts);
  for (Eigen::Index i = 0; i < npts; ++i) {
    xs(i) = cfg.x_min + static_cast<double>(i) * cfg.dx;
  }
  std::vector<double> ts;
  for (int i = 0; i < cfg.t_count; ++i) {
    ts.push_back(cfg.t_count == 1
                     ? cfg.t_min
                     : cfg.t_min + (cfg.t_max - cfg.t_min) * i / (cfg.t_count - 1));
  }

  auto rho = [&](int, double x, double t) -> Complex {
    return sm::gaussian_solution(x, t, p);
  };
  const sm::ResidualField field = sm::diffusion_residual_field(
      rho, 1, xs, ts, cfg.dx, cfg.fd_dt, p, dvar, gvar);

  std::string csv = "x,t,re,im,residual\n";
  for (size_t ti = 0; ti < field.ts.size(); ++ti) {
    for (Eigen::Index i = 0; i < field.xs.size(); ++i) {
      const double v = sm::gaussian_solution(field.xs(i), field.ts[ti], p);
      csv += csv_complex_row(
          {sm::format_double(field.xs(i)), sm::format_double(field.ts[ti]),
           sm::format_double(v), sm::format_double(0.0),
           sm::format_double(field.residual(i, static_cast<Eigen::Index>(ti)))});
    }
  }
  sm::write_text_file(out.output, csv);

  Json echo = diffusion_echo(cfg);
  echo["x_min"] = cfg.x_min;
  echo["x_max"] = cfg.x_max;
  echo["dx"] = cfg.dx;
  echo["t_min"] = cfg.t_min;
  echo["t_max"] = cfg.t_max;
  echo["t_count"] = cfg.t_count;
  echo["fd_dt"] = cfg.fd_dt;
  Json extra{{"max_residual", field.residual.maxCoeff()}};
  const double wall = std::chrono::duration<double>(
                          std::chrono::steady_clock::now() - start)
                          .count();
  write_summary(out, "diffusion residual", echo, extra, wall);
  return 0;
}

// ---------------------------------------------------------------------------

Json check_to_json(const sm::CheckResult& r) {
  Json j{{"check", r.check},
         {"printed_value", r.printed_value ? sm::complex_to_json(*r.printed_value)
                                           : Json(nullptr)},
         {"oracle_value", r.oracle_value ? sm::complex_to_json(*r.oracle_value)
                                         : Json(nullptr)},
         {"abs_diff", r.abs_diff},
         {"hard", r.hard},
         {"passed", r.passed}};
  if (r.hard) j["tolerance"] = r.tolerance;
  if (!r.note.empty()) j["note"] = r.note;
  return j;
}

int run_verify(const std::vector<int>& orders, const CommonOut& out) {
  const auto start = std::chrono::steady_clock::now();
  const sm::CheckList checks = sm::run_standard_verification(orders);
  Json entries = Json::array();
  for (const sm::CheckResult& r : checks) {
    entries.push_back(check_to_json(r));
    std::cout << (r.passed ? (r.hard ? "[PASS] " : "[INFO] ") : "[FAIL] ")
              << r.check << "  measured " << r.abs_diff;
    if (r.hard) std::cout << " (tolerance " << r.tolerance << ")";
    std::cout << "\n";
  }
  const bool ok = sm::all_hard_passed(checks);
  Json ledger{{"checks", entries}, {"all_hard_passed", ok}};
  sm::write_text_file(out.output, ledger.dump(2) + "\n");

  Json echo{{"orders", orders}};
  const double wall = std::chrono::duration<double>(
                          std::chrono::steady_clock::now() - start)
                          .count();
  write_summary(out, "verify", echo, Json{{"all_hard_passed", ok}}, wall);
  if (!ok) throw sm::InvariantFailure("one or more hard invariants failed");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    g_config = load_config_file(argc, argv);

    CLI::App app{"smashline: algebraic random walks on a nilpotent-extended "
                 "line and their diffusion limit"};
    app.require_subcommand(1);
    std::string config_path;
    app.add_option("--config", config_path,
                   "JSON config file; command-line flags override its values");

    std::vector<std::string> known;

    CommonOut out;
    from_config("output", out.output, known);
    from_config("summary", out.summary, known);

    // moments ---------------------------------------------------------------
    MomentsConfig mc;
    from_config("n", mc.n, known);
    from_config("k_max", mc.k_max, known);
    from_config("l_max", mc.l_max, known);
    from_config("N", mc.order, known);
    from_config("Q", mc.braiding, known);
    from_config("a", mc.a, known);
    from_config("p1", mc.p1, known);
    from_config("theta", mc.theta, known);
    from_config("p2", mc.p2, known);
    from_config("oracle", mc.oracle, known);
    from_config("format", mc.format, known);
    CLI::App* moments = app.add_subcommand("moments", "exact n-step moment table");
    moments->add_option("--n", mc.n, "number of walk steps");
    moments->add_option("--k-max", mc.k_max, "largest x power");
    moments->add_option("--l-max", mc.l_max, "largest xi power");
    moments->add_option("--N", mc.order, "nilpotency order (xi^N = 0)");
    moments->add_option("--Q", mc.braiding, "x-xi cross braiding constant");
    moments->add_option("--a", mc.a, "x step magnitude");
    moments->add_option("--p1", mc.p1, "probability of +a");
    moments->add_option("--theta", mc.theta, "xi step amplitude");
    moments->add_option("--p2", mc.p2, "probability of +theta");
    moments->add_flag("--oracle", mc.oracle,
                      "also run the braided brute-force oracle");
    moments->add_option("--format", mc.format, "csv | json");

    // coproduct ---------------------------------------------------------------
    CoproductConfig cc;
    from_config("k", cc.k, known);
    from_config("l", cc.l, known);
    from_config("slots", cc.slots, known);
    CLI::App* coproduct =
        app.add_subcommand("coproduct", "n-fold coproduct of a monomial");
    coproduct->add_option("--k", cc.k, "x power");
    coproduct->add_option("--l", cc.l, "xi power");
    coproduct->add_option("--slots", cc.slots, "tensor slot count");
    coproduct->add_option("--N", cc.order, "nilpotency order");

    // diffusion ---------------------------------------------------------------
    DiffusionConfig dc;
    from_config("c1", dc.c1, known);
    from_config("alpha1", dc.alpha1, known);
    from_config("c2", dc.c2, known);
    from_config("alpha2_re", dc.alpha2_re, known);
    from_config("alpha2_im", dc.alpha2_im, known);
    from_config("lambda", dc.lambda, known);
    from_config("lambda_tilde", dc.lambda_tilde, known);
    from_config("dstar", dc.dstar, known);
    from_config("generator", dc.generator, known);
    from_config("x_min", dc.x_min, known);
    from_config("x_max", dc.x_max, known);
    from_config("dx", dc.dx, known);
    from_config("dt", dc.dt, known);
    from_config("t_end", dc.t_end, known);
    from_config("scheme", dc.scheme, known);
    from_config("stride", dc.stride, known);
    from_config("upwind", dc.upwind, known);
    from_config("init_mean", dc.init_mean, known);
    from_config("init_sigma", dc.init_sigma, known);
    from_config("t", dc.t, known);
    from_config("theta_max", dc.theta_max, known);
    from_config("dtheta", dc.dtheta, known);
    from_config("t_min", dc.t_min, known);
    from_config("t_max", dc.t_max, known);
    from_config("t_count", dc.t_count, known);
    from_config("fd_dt", dc.fd_dt, known);

    CLI::App* diffusion =
        app.add_subcommand("diffusion", "coupled drift-diffusion system");
    diffusion->require_subcommand(1);
    auto add_params = [&](CLI::App* c) {
      c->add_option("--N", dc.order, "component count / nilpotency order");
      c->add_option("--c1", dc.c1, "x drift");
      c->add_option("--alpha1", dc.alpha1, "x diffusivity");
      c->add_option("--c2", dc.c2, "xi drift");
      c->add_option("--alpha2-re", dc.alpha2_re, "xi diffusivity (real part)");
      c->add_option("--alpha2-im", dc.alpha2_im, "xi diffusivity (imag part)");
      c->add_option("--lambda", dc.lambda, "Hamiltonian x-drift constant");
      c->add_option("--lambda-tilde", dc.lambda_tilde,
                    "Hamiltonian xi-drift constant");
      c->add_option("--dstar", dc.dstar, "D* variant: printed | algebraic");
      c->add_option("--generator", dc.generator,
                    "stationary | nonstationary");
    };
    CLI::App* solve = diffusion->add_subcommand("solve", "time-step the system");
    add_params(solve);
    solve->add_option("--x-min", dc.x_min, "");
    solve->add_option("--x-max", dc.x_max, "");
    solve->add_option("--dx", dc.dx, "");
    solve->add_option("--dt", dc.dt, "");
    solve->add_option("--t-end", dc.t_end, "");
    solve->add_option("--scheme", dc.scheme, "cn | rk4");
    solve->add_option("--stride", dc.stride, "snapshot stride (0: ends only)");
    solve->add_flag("--upwind", dc.upwind, "first-order upwind advection");
    solve->add_option("--init-mean", dc.init_mean, "initial Gaussian mean");
    solve->add_option("--init-sigma", dc.init_sigma, "initial Gaussian width");
    CLI::App* closed =
        diffusion->add_subcommand("closed-form", "closed-form profiles");
    add_params(closed);
    closed->add_option("--t", dc.t, "evaluation time");
    closed->add_option("--x-min", dc.x_min, "");
    closed->add_option("--x-max", dc.x_max, "");
    closed->add_option("--dx", dc.dx, "");
    closed->add_option("--theta-max", dc.theta_max, "");
    closed->add_option("--dtheta", dc.dtheta, "");
    CLI::App* residual =
        diffusion->add_subcommand("residual", "evolution-equation residual");
    add_params(residual);
    residual->add_option("--x-min", dc.x_min, "");
    residual->add_option("--x-max", dc.x_max, "");
    residual->add_option("--dx", dc.dx, "");
    residual->add_option("--t-min", dc.t_min, "");
    residual->add_option("--t-max", dc.t_max, "");
    residual->add_option("--t-count", dc.t_count, "");
    residual->add_option("--fd-dt", dc.fd_dt, "time-derivative step");

    // verify ------------------------------------------------------------------
    std::vector<int> verify_orders;
    from_config("orders", verify_orders, known);
    CLI::App* verify = app.add_subcommand(
        "verify", "run the invariant suites and write the comparison ledger");
    verify->add_option("--N", verify_orders,
                       "nilpotency orders to check (repeatable)");

    std::string output_flag, summary_flag;
    for (CLI::App* c : {moments, coproduct, solve, closed, residual, verify}) {
      c->add_option("--output,-o", output_flag, "output file");
      c->add_option("--summary", summary_flag, "summary JSON path");
    }

    reject_unknown_config_keys(known);
    CLI11_PARSE(app, argc, argv);
    if (!output_flag.empty()) out.output = output_flag;
    if (!summary_flag.empty()) out.summary = summary_flag;

    if (moments->parsed()) {
      if (out.output.empty()) out.output = "moments.csv";
      return run_moments(mc, out);
    }
    if (coproduct->parsed()) {
      if (out.output.empty()) out.output = "coproduct.json";
      return run_coproduct(cc, out);
    }
    if (diffusion->parsed()) {
      if (solve->parsed()) {
        if (out.output.empty()) out.output = "solution.csv";
        return run_diffusion_solve(dc, out);
      }
      if (closed->parsed()) {
        if (out.output.empty()) out.output = "closed_form.csv";
        return run_diffusion_closed_form(dc, out);
      }
      if (out.output.empty()) out.output = "residual.csv";
      return run_diffusion_residual(dc, out);
    }
    if (verify->parsed()) {
      if (verify_orders.empty()) verify_orders = {2, 3, 4};
      for (int n : verify_orders) {
        if (n < 2) throw sm::ValidationError("verify: orders must be >= 2");
      }
      if (out.output.empty()) out.output = "verify_ledger.json";
      return run_verify(verify_orders, out);
    }
    return 0;
  } catch (const sm::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const sm::InvariantFailure& e) {
    std::cerr << "invariant failure: " << e.what() << "\n";
    return 3;
  } catch (const sm::InstabilityError& e) {
    std::cerr << "numerical instability: " << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
