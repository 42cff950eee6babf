#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>
#include <string>

namespace fs = std::filesystem;
using Json = nlohmann::json;

namespace {

const std::string kCli = SMASHLINE_CLI_PATH;

struct RunOutcome {
  int exit_code = -1;
  std::string stderr_text;
};

RunOutcome run(const std::string& args, const fs::path& dir) {
  const fs::path errfile = dir / "stderr.txt";
  const std::string cmd = "cd " + dir.string() + " && " + kCli + " " + args +
                          " 2> " + errfile.string();
  const int raw = std::system(cmd.c_str());
  RunOutcome out;
  out.exit_code = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  std::ifstream in(errfile);
  std::stringstream ss;
  ss << in.rdbuf();
  out.stderr_text = ss.str();
  return out;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path scratch() {
  const fs::path dir = fs::current_path() / "cli_scratch";
  fs::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("moments table format and determinism") {
  const fs::path dir = scratch();
  const std::string flags =
      "moments --n 3 --k-max 2 --l-max 1 --N 2 -o a.csv";
  CHECK(run(flags, dir).exit_code == 0);
  const std::string a = slurp(dir / "a.csv");
  std::stringstream ss(a);
  std::string line;
  std::getline(ss, line);
  CHECK(line == "k,l,n,re,im");
  std::getline(ss, line);
  CHECK(line == "0,0,3,1,0");
  int rows = 1;
  while (std::getline(ss, line)) {
    if (!line.empty()) ++rows;
  }
  CHECK(rows == 6);

  CHECK(run("moments --n 3 --k-max 2 --l-max 1 --N 2 -o b.csv", dir).exit_code ==
        0);
  CHECK(a == slurp(dir / "b.csv"));
}

TEST_CASE("moments table in JSON form") {
  const fs::path dir = scratch();
  CHECK(run("moments --n 3 --k-max 1 --l-max 1 --N 2 --format json -o a.json",
            dir)
            .exit_code == 0);
  const Json rows = Json::parse(slurp(dir / "a.json"));
  REQUIRE(rows.is_array());
  CHECK(rows.size() == 4);
  CHECK(rows[0].at("k") == 0);
  CHECK(rows[0].at("l") == 0);
  CHECK(rows[0].at("n") == 3);
  CHECK(rows[0].at("re").get<double>() == 1.0);
  CHECK(run("moments --format yaml -o bad.out", dir).exit_code == 2);
}

TEST_CASE("nilpotency bound violations exit with code 2") {
  const fs::path dir = scratch();
  const RunOutcome out = run("moments --n 2 --l-max 2 --N 2 -o bad.csv", dir);
  CHECK(out.exit_code == 2);
  CHECK(out.stderr_text.find("nilpotency") != std::string::npos);
}

TEST_CASE("oracle comparison lands in the run summary") {
  const fs::path dir = scratch();
  CHECK(run("moments --n 3 --k-max 3 --l-max 1 --N 2 --a 1 --p1 0.3 "
            "--theta 0.7 --p2 0.6 --oracle -o om.csv",
            dir)
            .exit_code == 0);
  const Json summary = Json::parse(slurp(dir / "om.csv.summary.json"));
  CHECK(summary.at("command") == "moments");
  CHECK(summary.at("oracle_comparison").at("max_abs_deviation").get<double>() <
        1e-10);
  CHECK(summary.at("decisions").at("dstar_variant_default") == "printed");
  CHECK(summary.contains("wall_time_s"));
}

TEST_CASE("coproduct JSON output") {
  const fs::path dir = scratch();
  CHECK(run("coproduct --k 1 --l 0 --slots 2 --N 2 -o cop.json", dir)
            .exit_code == 0);
  const Json j = Json::parse(slurp(dir / "cop.json"));
  CHECK(j.at("n") == 2);
  CHECK(j.at("terms").size() == 2);
}

TEST_CASE("config file values are overridable by flags") {
  const fs::path dir = scratch();
  {
    std::ofstream cfg(dir / "cfg.json");
    cfg << R"({"n": 4, "k_max": 1, "l_max": 0, "N": 3})";
  }
  CHECK(run("--config cfg.json moments -o c1.csv", dir).exit_code == 0);
  const std::string c1 = slurp(dir / "c1.csv");
  CHECK(c1.find("0,0,4,") != std::string::npos);

  CHECK(run("--config cfg.json moments --n 6 -o c2.csv", dir).exit_code == 0);
  CHECK(slurp(dir / "c2.csv").find("0,0,6,") != std::string::npos);

  {
    std::ofstream cfg(dir / "bad.json");
    cfg << R"({"no_such_key": 1})";
  }
  CHECK(run("--config bad.json moments -o c3.csv", dir).exit_code == 2);
}

TEST_CASE("diffusion residual command") {
  const fs::path dir = scratch();
  const RunOutcome out = run(
      "diffusion residual --N 2 --c1 0.25 --alpha1 1.0 --x-min -3 --x-max 3 "
      "--dx 0.002 --t-min 0.5 --t-max 1.0 --t-count 2 -o res.csv",
      dir);
  CHECK(out.exit_code == 0);
  const Json summary = Json::parse(slurp(dir / "res.csv.summary.json"));
  CHECK(summary.at("max_residual").get<double>() < 1e-6);
  std::stringstream ss(slurp(dir / "res.csv"));
  std::string header;
  std::getline(ss, header);
  CHECK(header == "x,t,re,im,residual");
}

TEST_CASE("diffusion solve with oracle summary") {
  const fs::path dir = scratch();
  const RunOutcome out = run(
      "diffusion solve --N 2 --c1 0.4 --alpha1 0.5 --c2 1.0 --x-min -8 "
      "--x-max 8 --dx 0.05 --dt 0.002 --t-end 0.5 --init-mean 0 "
      "--init-sigma 0.5 -o sol.csv",
      dir);
  CHECK(out.exit_code == 0);
  const Json summary = Json::parse(slurp(dir / "sol.csv.summary.json"));
  CHECK(summary.at("oracle_comparison").at("rel_l2").get<double>() < 2e-3);
  CHECK(summary.at("all_components_equal") == false);
  std::stringstream ss(slurp(dir / "sol.csv"));
  std::string header;
  std::getline(ss, header);
  CHECK(header == "x,t,k,re,im");
}

TEST_CASE("decoupled solve reports all components equal") {
  const fs::path dir = scratch();
  const RunOutcome out = run(
      "diffusion solve --N 2 --c1 0.4 --alpha1 0.5 --c2 0 --x-min -8 "
      "--x-max 8 --dx 0.05 --dt 0.002 --t-end 0.4 --init-sigma 0.5 -o eq.csv",
      dir);
  CHECK(out.exit_code == 0);
  const Json summary = Json::parse(slurp(dir / "eq.csv.summary.json"));
  CHECK(summary.at("all_components_equal") == true);
}

TEST_CASE("closed-form command writes both sector files") {
  const fs::path dir = scratch();
  const RunOutcome out = run(
      "diffusion closed-form --N 2 --c1 0 --alpha1 0.25 --c2 0.8 "
      "--alpha2-re 0.5 --t 1 --x-min -2 --x-max 2 --dx 0.5 "
      "--theta-max 1 --dtheta 0.5 -o cf.csv",
      dir);
  CHECK(out.exit_code == 0);
  const std::string gauss = slurp(dir / "cf.csv");
  CHECK(gauss.find("x,t,re,im,residual") == 0);
  // Peak value of the kernel at x = 0, t = 1 with alpha1 = 1/4.
  CHECK(gauss.find("0,1,0.56418958354775628") != std::string::npos);
  const std::string xi = slurp(dir / "cf_xi.csv");
  std::stringstream ss(xi);
  std::string line;
  int rows = -1;  // skip header
  while (std::getline(ss, line)) {
    if (!line.empty()) ++rows;
  }
  CHECK(rows == 3);  // theta in {0, 0.5, 1}
}

TEST_CASE("unstable solves exit with code 4") {
  const fs::path dir = scratch();
  const RunOutcome out = run(
      "diffusion solve --N 2 --c1 80 --alpha1 0.05 --scheme rk4 --x-min -8 "
      "--x-max 8 --dx 0.1 --dt 0.04 --t-end 2 --init-sigma 0.5 -o boom.csv",
      dir);
  CHECK(out.exit_code == 4);
}

TEST_CASE("worker count does not change the residual output") {
  const fs::path dir = scratch();
  const std::string flags =
      "diffusion residual --N 2 --c1 0.25 --alpha1 1.0 --x-min -2 --x-max 2 "
      "--dx 0.01 --t-min 0.5 --t-max 1.0 --t-count 2 ";
  const fs::path err = dir / "stderr.txt";
  auto run_env = [&](const std::string& env, const std::string& outfile) {
    const std::string cmd = "cd " + dir.string() + " && " + env + " " + kCli +
                            " " + flags + "-o " + outfile + " 2> " +
                            err.string();
    return WEXITSTATUS(std::system(cmd.c_str()));
  };
  CHECK(run_env("SMASHLINE_THREADS=1", "r1.csv") == 0);
  CHECK(run_env("SMASHLINE_THREADS=4", "r4.csv") == 0);
  CHECK(slurp(dir / "r1.csv") == slurp(dir / "r4.csv"));
}

TEST_CASE("verify writes the comparison ledger") {
  const fs::path dir = scratch();
  const RunOutcome out = run("verify --N 2 --N 3 -o ledger.json", dir);
  CHECK(out.exit_code == 0);
  const Json ledger = Json::parse(slurp(dir / "ledger.json"));
  CHECK(ledger.at("all_hard_passed") == true);

  bool saw_variants = false, saw_prefactor = false, saw_braiding = false;
  for (const Json& entry : ledger.at("checks")) {
    const std::string name = entry.at("check").get<std::string>();
    if (name.find("dual-derivative variants N=2") != std::string::npos) {
      saw_variants = true;
      CHECK(std::abs(entry.at("printed_value").at(0).get<double>() -
                     std::exp(-1.0)) < 1e-12);
      CHECK(std::abs(entry.at("oracle_value").at(0).get<double>() - 1.0) <
            1e-12);
    }
    if (name.find("prefactor exponent -1") != std::string::npos) {
      saw_prefactor = true;
    }
    if (name.find("Q=2") != std::string::npos) saw_braiding = true;
  }
  CHECK(saw_variants);
  CHECK(saw_prefactor);
  CHECK(saw_braiding);
}
