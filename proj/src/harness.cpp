#include "wqc/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "wqc/bench.hpp"
#include "wqc/lqr.hpp"
#include "wqc/oqa.hpp"
#include "wqc/sampling.hpp"
#include "wqc/wes.hpp"

#include "CLI11.hpp"

namespace wqc {

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

StepsizeRule stepsize_rule_from_string(const std::string& s) {
  if (s == "one_over_L") return StepsizeRule::OneOverL;
  if (s == "gamma_over_L") return StepsizeRule::GammaOverL;
  if (s == "gamma_over_2L") return StepsizeRule::GammaOver2L;
  if (s == "fixed") return StepsizeRule::Fixed;
  throw InvalidInput("unknown stepsize rule: " + s);
}

std::string stepsize_rule_to_string(StepsizeRule r) {
  switch (r) {
    case StepsizeRule::OneOverL: return "one_over_L";
    case StepsizeRule::GammaOverL: return "gamma_over_L";
    case StepsizeRule::GammaOver2L: return "gamma_over_2L";
    case StepsizeRule::Fixed: return "fixed";
  }
  return "?";
}

Vector vector_from_json(const nlohmann::json& j) {
  const auto values = j.get<std::vector<double>>();
  return Eigen::Map<const Vector>(values.data(), static_cast<Eigen::Index>(values.size()));
}

bool looks_like_file(const std::string& objective) {
  return objective.find('/') != std::string::npos ||
         objective.find(".json") != std::string::npos;
}

/// Everything run_experiment needs after the config is resolved.
struct ResolvedExperiment {
  ObjectiveOracle oracle;
  Vector x0;
  ClassParams params;       // mu flavor matches the algorithm (see resolve)
  bool is_lqr = false;
  bool params_estimated = false;
};

bool wants_growth_mu(const ExperimentConfig& config) {
  // Algorithm 2 and the gamma/2L stepsize target the quadratic-growth class,
  // whose mu is the distance-form growth constant.
  return config.algorithm == Algorithm::Agd2 ||
         (config.algorithm == Algorithm::Gd &&
          config.stepsize_rule == StepsizeRule::GammaOver2L);
}

ResolvedExperiment resolve(const ExperimentConfig& config) {
  const bool estimate = std::holds_alternative<std::string>(config.params);
  if (estimate && std::get<std::string>(config.params) != "estimate")
    throw InvalidInput("config.params must be constants or the string \"estimate\"");

  if (looks_like_file(config.objective)) {
    const LqrProblem problem = LqrProblem::from_file(config.objective);
    ResolvedExperiment r{lqr_oracle(problem, /*safeguard=*/true), Vector(), ClassParams{},
                         true, estimate};
    r.x0 = config.x0 ? *config.x0 : flatten_gain(problem.K0);
    if (estimate) {
      r.params = estimate_lqr_class_params(problem, 50, config.seed).params;
    } else {
      r.params = std::get<ClassParams>(config.params);
    }
    return r;
  }

  if (!is_catalogue_id(config.objective))
    throw InvalidInput("unknown objective: " + config.objective);

  if (config.objective == "quad") {
    const int dim = config.quad_diag.empty() ? config.dimension
                                             : static_cast<int>(config.quad_diag.size());
    Vector diag = Vector::Ones(dim);
    for (std::size_t i = 0; i < config.quad_diag.size(); ++i) diag[i] = config.quad_diag[i];
    const Vector x_star = config.quad_x_star ? *config.quad_x_star : Vector::Zero(dim);
    ResolvedExperiment r{make_quadratic_objective(Matrix(diag.asDiagonal()), x_star), Vector(),
                         ClassParams{}, false, estimate};
    r.x0 = config.x0 ? *config.x0 : default_start("quad", dim);
    if (estimate) {
      r.params.L = diag.maxCoeff();
      r.params.gamma = 1.0;
      r.params.mu = diag.minCoeff();
    } else {
      r.params = std::get<ClassParams>(config.params);
    }
    return r;
  }

  ResolvedExperiment r{make_nonconvex_test_objective(config.objective, config.dimension),
                       Vector(), ClassParams{}, false, estimate};
  r.x0 = config.x0 ? *config.x0 : default_start(config.objective, config.dimension);
  if (estimate) {
    const CertifiedParams cert = certify_catalogue_objective(config.objective, config.dimension);
    r.params = cert.params;
    if (wants_growth_mu(config)) r.params.mu = std::min(cert.growth_mu, cert.params.L);
  } else {
    r.params = std::get<ClassParams>(config.params);
  }
  return r;
}

EnvelopeReport build_report(const std::vector<std::pair<double, double>>& measured_envelope) {
  EnvelopeReport report;
  report.max_ratio = 0.0;
  int k = 0;
  for (const auto& [measured, envelope] : measured_envelope) {
    EnvelopeRow row;
    row.k = k++;
    row.measured = measured;
    row.envelope = envelope;
    row.dominated = measured <= envelope * (1.0 + 1e-9);
    if (!row.dominated && !report.first_violation) report.first_violation = row.k;
    if (envelope > 0.0) report.max_ratio = std::max(report.max_ratio, measured / envelope);
    report.rows.push_back(row);
  }
  return report;
}

}  // namespace

std::string to_string(Algorithm a) {
  switch (a) {
    case Algorithm::Gd: return "gd";
    case Algorithm::Agd1: return "agd1";
    case Algorithm::Agd2: return "agd2";
    case Algorithm::Oqa: return "oqa";
  }
  return "?";
}

Algorithm algorithm_from_string(const std::string& s) {
  if (s == "gd") return Algorithm::Gd;
  if (s == "agd1") return Algorithm::Agd1;
  if (s == "agd2") return Algorithm::Agd2;
  if (s == "oqa") return Algorithm::Oqa;
  throw InvalidInput("unknown algorithm: " + s);
}

ExperimentConfig ExperimentConfig::from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw InvalidInput(std::string("config: bad JSON: ") + e.what());
  }
  ExperimentConfig c;
  try {
    c.objective = j.at("objective").get<std::string>();
    c.algorithm = algorithm_from_string(j.value("algorithm", "gd"));
    if (j.contains("params")) {
      if (j["params"].is_string()) {
        c.params = j["params"].get<std::string>();
      } else {
        ClassParams p;
        p.L = j["params"].at("L").get<double>();
        p.gamma = j["params"].at("gamma").get<double>();
        p.mu = j["params"].value("mu", 0.0);
        if (j["params"].contains("tau")) p.tau = j["params"]["tau"].get<double>();
        if (j["params"].contains("zeta")) p.zeta = j["params"]["zeta"].get<double>();
        p.validate();
        c.params = p;
      }
    }
    if (j.contains("x0") && !(j["x0"].is_string() && j["x0"] == "default"))
      c.x0 = vector_from_json(j["x0"]);
    if (j.contains("gamma0")) c.gamma0 = j["gamma0"].get<double>();
    c.max_iter = j.value("max_iter", 500);
    c.grad_tol = j.value("grad_tol", 0.0);
    c.gap_tol = j.value("gap_tol", 0.0);
    c.seed = j.value("seed", std::uint64_t{0});
    c.output_prefix = j.value("output_prefix", "");
    c.dimension = j.value("dimension", 1);
    if (j.contains("diag")) c.quad_diag = j["diag"].get<std::vector<double>>();
    if (j.contains("x_star")) c.quad_x_star = vector_from_json(j["x_star"]);
    if (j.contains("stepsize_rule"))
      c.stepsize_rule = stepsize_rule_from_string(j["stepsize_rule"].get<std::string>());
    c.include_timing = j.value("include_timing", false);
  } catch (const nlohmann::json::exception& e) {
    throw InvalidInput(std::string("config: ") + e.what());
  }
  return c;
}

ExperimentConfig ExperimentConfig::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open config file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return from_json(buf.str());
}

std::string trajectory_to_csv(const Trajectory& trajectory, bool include_timing) {
  std::string out = "k,f,grad_norm,envelope,wall_nanos\n";
  for (const auto& rec : trajectory.records) {
    out += std::to_string(rec.k);
    out += ',';
    out += fmt(rec.f);
    out += ',';
    out += fmt(rec.grad_norm);
    out += ',';
    if (rec.envelope) out += fmt(*rec.envelope);
    out += ',';
    out += std::to_string(include_timing ? rec.wall_nanos : 0);
    out += '\n';
  }
  return out;
}

std::string class_params_to_json(const ClassParams& params, int indent) {
  nlohmann::json j;
  j["L"] = params.L;
  j["gamma"] = params.gamma;
  j["mu"] = params.mu;
  if (params.tau) j["tau"] = *params.tau;
  if (params.zeta) j["zeta"] = *params.zeta;
  return j.dump(indent);
}

ExperimentResult run_experiment(const ExperimentConfig& config) {
  ResolvedExperiment r = resolve(config);
  const ClassParams& params = r.params;
  params.validate();

  if ((config.algorithm == Algorithm::Oqa || config.algorithm == Algorithm::Agd2) &&
      !(params.mu > 0.0))
    throw InvalidInput(to_string(config.algorithm) + " requires mu > 0");

  const double f_star = r.oracle.known_minimum().value_or(0.0);
  const double r0sq = r.oracle.known_minimizer()
                          ? (r.x0 - *r.oracle.known_minimizer()).squaredNorm()
                          : 0.0;

  ExperimentResult result;
  result.params_used = params;
  std::vector<std::pair<double, double>> cmp;  // (measured, envelope) per row

  switch (config.algorithm) {
    case Algorithm::Gd: {
      GdConfig gc;
      gc.stepsize_rule = config.stepsize_rule;
      gc.max_iter = config.max_iter;
      gc.grad_tol = config.grad_tol;
      result.trajectory = gd_run(r.oracle, params, r.x0, gc);
      if (!r.is_lqr && config.stepsize_rule != StepsizeRule::Fixed) {
        const bool linear = config.stepsize_rule != StepsizeRule::OneOverL;
        const GdEnvelope variant = config.stepsize_rule == StepsizeRule::OneOverL
                                       ? GdEnvelope::WqcSublinear
                                       : (config.stepsize_rule == StepsizeRule::GammaOverL
                                              ? GdEnvelope::WqscLinear
                                              : GdEnvelope::WqGrowthLinear);
        if (!linear || params.mu > 0.0) {
          const Vector& x_star = *r.oracle.known_minimizer();
          for (auto& rec : result.trajectory.records) {
            const double env = gd_envelope(params, variant, rec.k, r0sq, rec.f - f_star);
            const double meas =
                linear ? (rec.x - x_star).squaredNorm() : rec.f - f_star;
            rec.envelope = env;
            cmp.emplace_back(meas, env);
          }
        }
      }
      break;
    }
    case Algorithm::Agd1:
    case Algorithm::Agd2: {
      const WesVariant variant = config.algorithm == Algorithm::Agd1
                                     ? WesVariant::algorithm1(params.gamma)
                                     : WesVariant::algorithm2(params.gamma);
      result.trajectory = agd_run(r.oracle, params, r.x0, config.gamma0, config.max_iter,
                                  config.grad_tol, variant);
      const bool default_gamma0 = !config.gamma0.has_value();
      if (!r.is_lqr && default_gamma0) {
        // Closed-form rate at gamma_0 = max(L, mu/gamma).
        for (auto& rec : result.trajectory.records) {
          double env;
          if (config.algorithm == Algorithm::Agd1) {
            const double lin =
                std::pow(1.0 - std::sqrt(params.mu * params.gamma * params.gamma / params.L),
                         rec.k);
            const double sub = 4.0 / std::pow(2.0 + params.gamma * rec.k, 2);
            env = std::min(lin, sub) * params.L * r0sq;
          } else {
            env = std::pow(1.0 - 0.5 * std::sqrt(params.mu * params.gamma * params.gamma /
                                                 params.L),
                           rec.k) *
                  params.L * r0sq;
          }
          rec.envelope = env;
          cmp.emplace_back(rec.f - f_star, env);
        }
      } else {
        // Fall back to the per-run lambda envelope already logged.
        for (const auto& rec : result.trajectory.records)
          if (rec.envelope) cmp.emplace_back(rec.f - f_star, *rec.envelope);
      }
      break;
    }
    case Algorithm::Oqa: {
      const OqaRun run = oqa_run(r.oracle, params, r.x0, config.max_iter, config.gap_tol);
      result.trajectory = run.trajectory;
      const double rate = 1.0 - std::sqrt(params.mu * params.gamma * params.gamma / params.L);
      const double gap0 = run.gaps.empty() ? 0.0 : run.gaps.front();
      for (std::size_t i = 0; i < run.gaps.size(); ++i)
        cmp.emplace_back(run.gaps[i], std::pow(rate, static_cast<double>(i)) * gap0);
      break;
    }
  }

  result.envelope = build_report(cmp);
  result.csv = trajectory_to_csv(result.trajectory, config.include_timing);

  nlohmann::json j;
  j["schema_version"] = 1;
  j["objective"] = config.objective;
  j["algorithm"] = to_string(config.algorithm);
  j["params"] = nlohmann::json::parse(class_params_to_json(params));
  j["params_estimated"] = r.params_estimated;
  j["seed"] = config.seed;
  j["stepsize_rule"] = stepsize_rule_to_string(config.stepsize_rule);
  j["n_iterations"] = result.trajectory.records.size();
  j["final_f"] = result.trajectory.records.empty() ? 0.0 : result.trajectory.back().f;
  j["envelope_indexing"] =
      "row k bounds the iterate after k steps; the source statements write the same bound "
      "with exponent k+1 on x_{k+1}";
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& row : result.envelope.rows) {
    rows.push_back({{"k", row.k},
                    {"measured", row.measured},
                    {"envelope", row.envelope},
                    {"dominated", row.dominated}});
  }
  j["envelope"] = {{"rows", rows}, {"max_ratio", result.envelope.max_ratio}};
  if (result.envelope.first_violation)
    j["envelope"]["first_violation"] = *result.envelope.first_violation;
  else
    j["envelope"]["first_violation"] = nullptr;
  result.json = j.dump(2);
  result.json += '\n';

  if (!config.output_prefix.empty()) {
    const std::filesystem::path prefix(config.output_prefix);
    if (prefix.has_parent_path()) std::filesystem::create_directories(prefix.parent_path());
    std::ofstream csv(config.output_prefix + ".csv", std::ios::binary);
    csv << result.csv;
    std::ofstream json(config.output_prefix + ".json", std::ios::binary);
    json << result.json;
  }
  return result;
}

ComparisonTable compare_algorithms(const std::vector<ExperimentConfig>& configs) {
  if (configs.empty()) throw InvalidInput("compare_algorithms: no configs");
  for (const auto& c : configs) {
    if (c.objective != configs.front().objective)
      throw InvalidInput("compare_algorithms: configs must share one objective");
    const bool same_x0 =
        (!c.x0 && !configs.front().x0) ||
        (c.x0 && configs.front().x0 && c.x0->size() == configs.front().x0->size() &&
         *c.x0 == *configs.front().x0);
    if (!same_x0) throw InvalidInput("compare_algorithms: configs must share one x0");
  }

  ComparisonTable table;
  table.objective = configs.front().objective;
  for (const auto& config : configs) {
    ExperimentConfig quiet = config;
    quiet.output_prefix.clear();
    const ExperimentResult result = run_experiment(quiet);

    ResolvedExperiment r = resolve(quiet);
    const double f_star = r.oracle.known_minimum().value_or(0.0);

    ComparisonRow row;
    row.algorithm = config.algorithm;
    for (const double eps : table.epsilons) {
      std::optional<int> hit;
      for (const auto& rec : result.trajectory.records) {
        if (rec.f - f_star <= eps) {
          hit = rec.k;
          break;
        }
      }
      row.iterations.push_back(hit);
    }
    table.rows.push_back(row);
  }
  return table;
}

std::string ComparisonTable::to_text() const {
  std::ostringstream out;
  out << "objective: " << objective << '\n';
  out << "algorithm";
  for (const double eps : epsilons) out << "\titers_to_" << eps;
  out << '\n';
  for (const auto& row : rows) {
    out << to_string(row.algorithm);
    for (const auto& it : row.iterations) {
      out << '\t';
      if (it)
        out << *it;
      else
        out << '-';
    }
    out << '\n';
  }
  return out.str();
}

namespace {

int cmd_run(const std::string& config_path) {
  const ExperimentConfig config = ExperimentConfig::from_file(config_path);
  const ExperimentResult result = run_experiment(config);
  std::cout << "iterations: " << result.trajectory.records.size() - 1
            << "  final f: " << fmt(result.trajectory.back().f);
  if (result.envelope.first_violation)
    std::cout << "  envelope violated at k=" << *result.envelope.first_violation;
  else if (!result.envelope.rows.empty())
    std::cout << "  envelope: dominated";
  std::cout << '\n';
  if (!config.output_prefix.empty())
    std::cout << "wrote " << config.output_prefix << ".csv and .json\n";
  return 0;
}

int cmd_verify(const std::string& objective, double lo, double hi, int grid, int dim) {
  if (!(lo < hi)) throw InvalidInput("verify: --box needs lo < hi");
  if (grid < 2) throw InvalidInput("verify: --grid needs at least 2 points");
  ObjectiveOracle oracle =
      objective == "quad"
          ? make_quadratic_objective(Matrix::Identity(dim, dim), Vector::Zero(dim))
          : make_nonconvex_test_objective(objective, dim);
  const auto samples = box_samples(lo, hi, dim, grid);
  ClassParams params = estimate_params(oracle, *oracle.known_minimizer(), samples);
  if (is_catalogue_id(objective) && objective != "quad")
    params.L = catalogue_info(objective).L;
  else if (objective == "quad")
    params.L = 1.0;
  std::cout << class_params_to_json(params, 2) << '\n';
  return 0;
}

int cmd_lqr(const std::string& problem_path, const std::string& algorithm,
            const std::string& output_prefix) {
  const LqrProblem problem = LqrProblem::from_file(problem_path);
  const LqrClassEstimate estimate = estimate_lqr_class_params(problem);
  const LqrWqscResult wqsc = check_lqr_wqsc(problem, estimate.samples);

  ExperimentConfig config;
  config.objective = problem_path;
  config.algorithm = algorithm_from_string(algorithm);
  config.output_prefix = output_prefix;
  const ExperimentResult result = run_experiment(config);

  nlohmann::json j;
  j["schema_version"] = 1;
  j["problem"] = problem_path;
  j["algorithm"] = algorithm;
  j["estimated_params"] = nlohmann::json::parse(class_params_to_json(estimate.params));
  j["gamma_hat"] = wqsc.gamma_hat;
  j["mu_hat"] = wqsc.mu_hat;
  j["bound_lambda_min_holds"] = wqsc.bound_holds_lambda_min;
  j["bound_lambda_max_holds"] = wqsc.bound_holds_lambda_max;
  j["best_inner_coefficient"] = wqsc.best_inner_coefficient;
  j["wqsc_violations"] = wqsc.wqsc_report.violations.size();
  j["wqsc_worst_slack"] = wqsc.wqsc_report.worst_slack;
  j["final_f"] = result.trajectory.back().f;
  j["n_iterations"] = result.trajectory.records.size();
  std::cout << j.dump(2) << '\n';
  return 0;
}

int cmd_bench(const std::string& suite, const std::string& output_dir) {
  if (suite != "default") throw InvalidInput("unknown bench suite: " + suite);
  int threads = 0;
  if (const char* env = std::getenv("WQC_OPTIM_THREADS")) threads = std::atoi(env);
  return run_bench_and_report(output_dir, threads) == 0 ? 0 : 1;
}

}  // namespace

int cli_main(int argc, const char* const* argv) {
  CLI::App app{"first-order methods for weakly-quasi-convex objectives"};
  app.require_subcommand(1);

  auto* run = app.add_subcommand("run", "run one experiment from a JSON config");
  std::string config_path;
  run->add_option("--config", config_path, "experiment config file")->required();

  auto* verify = app.add_subcommand("verify", "certify class constants on a box");
  std::string objective;
  std::vector<double> box{-1.0, 1.0};
  int grid = 101;
  int dim = 1;
  verify->add_option("--objective", objective, "catalogue objective id")->required();
  verify->add_option("--box", box, "box bounds: lo hi")->expected(2);
  verify->add_option("--grid", grid, "number of sample points");
  verify->add_option("--dim", dim, "objective dimension");

  auto* lqr = app.add_subcommand("lqr", "LQR pipeline: estimate, check, optimize");
  std::string problem_path;
  std::string algorithm = "agd1";
  std::string lqr_output;
  lqr->add_option("--problem", problem_path, "LQR problem JSON file")->required();
  lqr->add_option("--algorithm", algorithm, "gd | agd1 | agd2 | oqa");
  lqr->add_option("--output", lqr_output, "output prefix for trajectory files");

  auto* bench = app.add_subcommand("bench", "run the acceptance suite");
  std::string suite = "default";
  std::string bench_output = "bench_out";
  bench->add_option("--suite", suite, "suite name");
  bench->add_option("--output", bench_output, "output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (run->parsed()) return cmd_run(config_path);
    if (verify->parsed()) return cmd_verify(objective, box[0], box[1], grid, dim);
    if (lqr->parsed()) return cmd_lqr(problem_path, algorithm, lqr_output);
    if (bench->parsed()) return cmd_bench(suite, bench_output);
  } catch (const InvalidInput& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 2;
}

}  // namespace wqc
