#pragma once

#include <map>
#include <string>
#include <vector>

#include "wqc/types.hpp"

namespace wqc {

struct BenchCriterion {
  int id = 0;
  std::string name;
  bool passed = false;
  std::string detail;  // short failure context, empty on pass
};

struct BenchOutcome {
  std::vector<BenchCriterion> criteria;
  std::map<std::string, std::string> outputs;  // relative path -> file bytes

  int failures() const;
};

/// Runs the default acceptance suite: every rate envelope, certificate and
/// property check at its pinned tolerance, one criterion per entry.
/// max_threads bounds the worker pool (0 = hardware concurrency); results are
/// merged in criterion order so the outcome is independent of scheduling.
BenchOutcome run_bench_suite(int max_threads = 0);

/// Prints one PASS/FAIL line per criterion and writes the suite outputs under
/// output_dir (empty = no files). Returns the number of failed criteria.
int run_bench_and_report(const std::string& output_dir, int max_threads = 0);

}  // namespace wqc
