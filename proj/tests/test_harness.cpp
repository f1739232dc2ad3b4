#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "wqc/harness.hpp"
#include "wqc/lqr.hpp"

using namespace wqc;

namespace {

int run_cli(std::initializer_list<const char*> args) {
  std::vector<const char*> argv{"wqc_optim"};
  argv.insert(argv.end(), args);
  return cli_main(static_cast<int>(argv.size()), argv.data());
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace

TEST_CASE("config json parses constants and defaults") {
  const ExperimentConfig c = ExperimentConfig::from_json(R"({
    "objective": "quad", "algorithm": "agd1", "diag": [1, 10],
    "params": {"L": 10, "gamma": 1, "mu": 1}, "max_iter": 50, "seed": 3
  })");
  CHECK(c.objective == "quad");
  CHECK(c.algorithm == Algorithm::Agd1);
  CHECK(std::get<ClassParams>(c.params).L == 10.0);
  CHECK(c.max_iter == 50);
  CHECK(c.seed == 3);
  CHECK_FALSE(c.x0.has_value());

  const ExperimentConfig e = ExperimentConfig::from_json(R"({
    "objective": "sinsq", "algorithm": "gd", "params": "estimate",
    "stepsize_rule": "gamma_over_2L", "x0": [4.0]
  })");
  CHECK(std::holds_alternative<std::string>(e.params));
  CHECK(e.stepsize_rule == StepsizeRule::GammaOver2L);
  CHECK((*e.x0)[0] == 4.0);

  CHECK_THROWS_AS(ExperimentConfig::from_json("{}"), InvalidInput);
  CHECK_THROWS_AS(ExperimentConfig::from_json("not json"), InvalidInput);
  CHECK_THROWS_AS(ExperimentConfig::from_json(R"({"objective":"quad","algorithm":"foo"})"),
                  InvalidInput);
}

TEST_CASE("run_experiment produces a dominated envelope and files") {
  const auto dir = std::filesystem::temp_directory_path() / "wqc_harness_test";
  std::filesystem::remove_all(dir);

  ExperimentConfig cfg;
  cfg.objective = "quad";
  cfg.quad_diag = {1.0, 10.0};
  cfg.algorithm = Algorithm::Agd1;
  cfg.max_iter = 200;
  cfg.output_prefix = (dir / "run").string();
  const ExperimentResult result = run_experiment(cfg);

  CHECK(result.envelope.clean());
  CHECK(result.params_used.L == 10.0);
  CHECK(result.params_used.mu == 1.0);

  const std::string csv = read_file(cfg.output_prefix + ".csv");
  CHECK(csv == result.csv);
  CHECK(csv.rfind("k,f,grad_norm,envelope,wall_nanos\n", 0) == 0);
  const auto rows = std::count(csv.begin(), csv.end(), '\n');
  CHECK(rows == static_cast<long>(result.trajectory.size()) + 1);

  const std::string json = read_file(cfg.output_prefix + ".json");
  CHECK(json.find("\"schema_version\": 1") != std::string::npos);
  CHECK(json.find("\"first_violation\": null") != std::string::npos);
  std::filesystem::remove_all(dir);
}

TEST_CASE("identical configs produce byte-identical outputs") {
  ExperimentConfig cfg;
  cfg.objective = "sinsq";
  cfg.algorithm = Algorithm::Gd;
  cfg.stepsize_rule = StepsizeRule::GammaOver2L;
  cfg.params = std::string("estimate");
  cfg.max_iter = 100;
  const ExperimentResult a = run_experiment(cfg);
  const ExperimentResult b = run_experiment(cfg);
  CHECK(a.csv == b.csv);
  CHECK(a.json == b.json);
}

TEST_CASE("oqa config requires a positive mu") {
  ExperimentConfig cfg;
  cfg.objective = "flat_quartic";
  cfg.algorithm = Algorithm::Oqa;
  cfg.params = std::string("estimate");
  CHECK_THROWS_AS(run_experiment(cfg), InvalidInput);
}

TEST_CASE("comparison table separates accelerated from plain descent") {
  std::vector<ExperimentConfig> configs;
  for (const Algorithm a : {Algorithm::Agd1, Algorithm::Gd}) {
    ExperimentConfig cfg;
    cfg.objective = "quad";
    cfg.quad_diag = {1.0, 100.0};
    cfg.algorithm = a;
    cfg.stepsize_rule = StepsizeRule::GammaOverL;
    cfg.max_iter = 4000;
    configs.push_back(cfg);
  }
  const ComparisonTable table = compare_algorithms(configs);
  REQUIRE(table.rows.size() == 2);
  const auto& agd = table.rows[0].iterations;
  const auto& gd = table.rows[1].iterations;
  REQUIRE(agd.size() == 3);

  // eps = 1e-6 column: the accelerated count stays under the rate-implied
  // ceiling and beats plain descent at condition number 100.
  const double r0sq = 18.0;
  const int ceiling =
      static_cast<int>(std::ceil(std::sqrt(100.0) * std::log(100.0 * r0sq / 1e-6))) + 1;
  REQUIRE(agd[2].has_value());
  REQUIRE(gd[2].has_value());
  CHECK(*agd[2] <= ceiling);
  CHECK(*agd[2] < *gd[2]);

  const std::string text = table.to_text();
  CHECK(text.find("agd1") != std::string::npos);
  CHECK(text.find("gd") != std::string::npos);
}

TEST_CASE("single config gives a one-row table") {
  ExperimentConfig cfg;
  cfg.objective = "quad";
  cfg.quad_diag = {1.0, 4.0};
  cfg.algorithm = Algorithm::Agd1;
  cfg.max_iter = 300;
  const ComparisonTable table = compare_algorithms({cfg});
  CHECK(table.rows.size() == 1);
}

TEST_CASE("mismatched objectives are rejected") {
  ExperimentConfig a;
  a.objective = "quad";
  ExperimentConfig b;
  b.objective = "sinsq";
  CHECK_THROWS_AS(compare_algorithms({a, b}), InvalidInput);
}

TEST_CASE("all applicable algorithms solve sinsq from x0 = 4") {
  for (const Algorithm alg : {Algorithm::Gd, Algorithm::Agd1, Algorithm::Agd2}) {
    ExperimentConfig cfg;
    cfg.objective = "sinsq";
    cfg.algorithm = alg;
    cfg.params = std::string("estimate");
    cfg.stepsize_rule = StepsizeRule::GammaOverL;
    Vector x0(1);
    x0 << 4.0;
    cfg.x0 = x0;
    cfg.max_iter = 3000;
    const ExperimentResult result = run_experiment(cfg);
    double best = std::numeric_limits<double>::infinity();
    for (const auto& rec : result.trajectory.records) best = std::min(best, rec.f);
    CHECK(best <= 1e-4);
  }
}

TEST_CASE("cli verify certifies the convex quadratic") {
  CHECK(run_cli({"verify", "--objective", "quad", "--box", "-2", "2", "--grid", "101"}) == 0);
}

TEST_CASE("cli usage errors exit with 2") {
  CHECK(run_cli({"run", "--config", "missing.json"}) == 2);
  CHECK(run_cli({"frobnicate"}) == 2);
  CHECK(run_cli({"verify", "--objective", "quad", "--unknown-flag", "1"}) == 2);
  CHECK(run_cli({"verify", "--objective", "nope", "--box", "-1", "1", "--grid", "11"}) == 2);
  CHECK(run_cli({"bench", "--suite", "nope"}) == 2);
  CHECK(run_cli({}) == 2);
}

TEST_CASE("cli run executes a config end to end") {
  const auto dir = std::filesystem::temp_directory_path() / "wqc_cli_test";
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  const auto config_path = dir / "cfg.json";
  {
    std::ofstream out(config_path);
    out << R"({"objective": "quad", "diag": [1, 10], "algorithm": "agd1",
               "max_iter": 100, "output_prefix": ")"
        << (dir / "out").string() << R"("})";
  }
  CHECK(run_cli({"run", "--config", config_path.c_str()}) == 0);
  CHECK(std::filesystem::exists(dir / "out.csv"));
  CHECK(std::filesystem::exists(dir / "out.json"));
  std::filesystem::remove_all(dir);
}

TEST_CASE("cli lqr runs the pipeline from a problem file") {
  const auto dir = std::filesystem::temp_directory_path() / "wqc_cli_lqr";
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  const auto problem_path = dir / "scalar.json";
  {
    LqrProblem p;
    p.A = Matrix::Constant(1, 1, 0.5);
    p.B = Matrix::Constant(1, 1, 1.0);
    p.Qc = Matrix::Constant(1, 1, 1.0);
    p.R = Matrix::Constant(1, 1, 1.0);
    p.Sigma0 = Matrix::Constant(1, 1, 1.0);
    p.K0 = Matrix::Constant(1, 1, 0.0);
    std::ofstream out(problem_path);
    out << p.to_json(2);
  }
  CHECK(run_cli({"lqr", "--problem", problem_path.c_str(), "--algorithm", "agd1"}) == 0);
  CHECK(run_cli({"lqr", "--problem", (dir / "absent.json").c_str()}) == 2);
  std::filesystem::remove_all(dir);
}
