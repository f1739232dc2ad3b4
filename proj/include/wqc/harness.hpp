#pragma once

#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "wqc/classcheck.hpp"
#include "wqc/gd.hpp"
#include "wqc/types.hpp"

namespace wqc {

enum class Algorithm { Gd, Agd1, Agd2, Oqa };

std::string to_string(Algorithm a);
Algorithm algorithm_from_string(const std::string& s);

/// One experiment: which objective, which algorithm, which constants.
/// params = "estimate" certifies the constants with classcheck first.
/// x0 = "default" uses the catalogue's documented start (K0 for LQR files).
struct ExperimentConfig {
  std::string objective;                    // catalogue id or LQR problem path
  Algorithm algorithm = Algorithm::Gd;
  std::variant<ClassParams, std::string> params = std::string("estimate");
  std::optional<Vector> x0;                 // nullopt = "default"
  std::optional<double> gamma0;
  int max_iter = 500;
  double grad_tol = 0.0;
  double gap_tol = 0.0;
  std::uint64_t seed = 0;
  std::string output_prefix;

  int dimension = 1;                        // catalogue objectives
  std::vector<double> quad_diag;            // "quad": diagonal of H
  std::optional<Vector> quad_x_star;        // "quad": minimizer (default 0)
  StepsizeRule stepsize_rule = StepsizeRule::OneOverL;  // gd only
  bool include_timing = false;  // keep file outputs byte-reproducible by default

  static ExperimentConfig from_json(const std::string& text);
  static ExperimentConfig from_file(const std::string& path);
};

struct EnvelopeRow {
  int k = 0;
  double measured = 0.0;
  double envelope = 0.0;
  bool dominated = false;  // measured <= envelope (1 + 1e-9)
};

struct EnvelopeReport {
  std::vector<EnvelopeRow> rows;
  std::optional<int> first_violation;
  double max_ratio = 0.0;

  bool clean() const { return !first_violation.has_value(); }
};

struct ExperimentResult {
  Trajectory trajectory;
  EnvelopeReport envelope;
  ClassParams params_used;
  std::string csv;   // exact bytes written to <prefix>.csv
  std::string json;  // exact bytes written to <prefix>.json
};

/// Runs the configured algorithm, compares the measured quantity against the
/// matching rate envelope, and (when output_prefix is set) writes
/// <prefix>.csv and <prefix>.json.
ExperimentResult run_experiment(const ExperimentConfig& config);

/// Iterations needed to drive the f-gap below each epsilon, per algorithm.
struct ComparisonRow {
  Algorithm algorithm = Algorithm::Gd;
  std::vector<std::optional<int>> iterations;  // one entry per epsilon
};

struct ComparisonTable {
  std::string objective;
  std::vector<double> epsilons{1e-2, 1e-4, 1e-6};
  std::vector<ComparisonRow> rows;

  std::string to_text() const;
};

/// All configs must share one objective and starting point.
ComparisonTable compare_algorithms(const std::vector<ExperimentConfig>& configs);

/// Subcommands: run, verify, lqr, bench. Returns the process exit code
/// (2 for usage errors, 1 for failed invariants during bench).
int cli_main(int argc, const char* const* argv);

/// Serialization helpers shared by the CLI and the acceptance suite.
std::string trajectory_to_csv(const Trajectory& trajectory, bool include_timing = false);
std::string class_params_to_json(const ClassParams& params, int indent = -1);

}  // namespace wqc
