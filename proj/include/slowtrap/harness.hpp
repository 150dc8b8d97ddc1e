#pragma once

// Seeded Monte Carlo experiments. Each run returns a table of statistics, a
// list of pass/fail criteria and the simulation-error budget. Tolerances are
// engineering choices (the limit theorems carry no rates) and are reported
// next to every statistic.

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "slowtrap/config.hpp"

namespace slowtrap {

struct Criterion {
  std::string name;
  std::string acceptance;  ///< acceptance id such as "A2", empty if none
  double value = 0.0;
  std::string bound;       ///< human-readable bound, e.g. "< 0.08"
  bool pass = false;
};

Criterion criterion_below(std::string name, std::string acceptance, double value, double bound);
Criterion criterion_above(std::string name, std::string acceptance, double value, double bound);
Criterion criterion_within(std::string name, std::string acceptance, double value, double lo, double hi);
/// Boolean criterion; value is 1 or 0.
Criterion criterion_true(std::string name, std::string acceptance, bool ok, std::string what);

struct ResultTable {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
  void add(std::vector<std::string> row);
};

struct BudgetItem {
  std::string name;
  double value;
};

struct ExperimentResult {
  std::string id;
  ResultTable table;
  std::vector<Criterion> criteria;
  std::vector<BudgetItem> budget;
  std::vector<std::string> warnings;

  bool all_pass() const;
  /// Conjunction of the criteria tagged with `acceptance`; false if none.
  bool passes(const std::string& acceptance) const;
};

struct RunOptions {
  std::uint64_t seed = 20240601;
  unsigned workers = 0;  ///< 0 selects the hardware concurrency
};

/// Experiment ids accepted by run_experiment.
const std::vector<std::string>& experiment_ids();

/// Rejects unknown sections and keys.
void validate_config(const Config& cfg);
/// Built-in pinned thresholds file (versioned, regenerated by run_pilot).
std::filesystem::path default_pinned_path();
/// Pinned thresholds merged under `user`; `[general] pinned` selects the file.
Config effective_config(const Config& user);

ExperimentResult run_experiment(const std::string& id, const Config& cfg, const RunOptions& opt);

/// CSV body: header and rows, then `budget,<name>,<value>` lines and one
/// `PASS`/`FAIL` line per criterion.
std::string to_csv(const ExperimentResult& r);
std::filesystem::path write_result(const ExperimentResult& r, const std::filesystem::path& dir);

/// Runs the pilot-pinned statistics at three times the replica budget and
/// writes the constants file. Returns the text written.
std::string run_pilot(const Config& cfg, const RunOptions& opt, const std::filesystem::path& out);

/// Acceptance criteria A1..A8: runs the experiment behind `id` and returns
/// it; the verdict is result.passes(id).
const std::vector<std::string>& acceptance_ids();
ExperimentResult run_acceptance(const std::string& id, const Config& cfg, const RunOptions& opt);

}  // namespace slowtrap
