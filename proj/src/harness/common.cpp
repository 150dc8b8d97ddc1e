#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

#include "experiments.hpp"
#include "slowtrap/stats.hpp"

#ifndef SLOWTRAP_CONFIG_DIR
#define SLOWTRAP_CONFIG_DIR "config"
#endif

namespace slowtrap {

// ---------------------------------------------------------------- criteria and tables

Criterion criterion_below(std::string name, std::string acceptance, double value, double bound) {
  return {std::move(name), std::move(acceptance), value, "< " + format_double(bound), value < bound};
}

Criterion criterion_above(std::string name, std::string acceptance, double value, double bound) {
  return {std::move(name), std::move(acceptance), value, "> " + format_double(bound), value > bound};
}

Criterion criterion_within(std::string name, std::string acceptance, double value, double lo, double hi) {
  return {std::move(name), std::move(acceptance), value, "in [" + format_double(lo) + ", " + format_double(hi) + "]",
          value >= lo && value <= hi};
}

Criterion criterion_true(std::string name, std::string acceptance, bool ok, std::string what) {
  return {std::move(name), std::move(acceptance), ok ? 1.0 : 0.0, std::move(what), ok};
}

void ResultTable::add(std::vector<std::string> row) {
  if (row.size() != columns.size()) throw std::logic_error("ResultTable::add: row width mismatch");
  rows.push_back(std::move(row));
}

bool ExperimentResult::all_pass() const {
  return std::all_of(criteria.begin(), criteria.end(), [](const Criterion& c) { return c.pass; });
}

bool ExperimentResult::passes(const std::string& acceptance) const {
  bool any = false;
  for (const auto& c : criteria) {
    if (c.acceptance != acceptance) continue;
    any = true;
    if (!c.pass) return false;
  }
  return any;
}

std::string to_csv(const ExperimentResult& r) {
  std::ostringstream out;
  auto row = [&](const std::vector<std::string>& cells) {
    for (std::size_t k = 0; k < cells.size(); ++k) out << (k ? "," : "") << cells[k];
    out << '\n';
  };
  std::vector<std::string> head = {"experiment"};
  head.insert(head.end(), r.table.columns.begin(), r.table.columns.end());
  row(head);
  for (const auto& cells : r.table.rows) {
    std::vector<std::string> line = {r.id};
    line.insert(line.end(), cells.begin(), cells.end());
    row(line);
  }
  for (const auto& b : r.budget) out << "budget," << b.name << ',' << format_double(b.value) << '\n';
  for (const auto& w : r.warnings) out << "warning," << w << '\n';
  for (const auto& c : r.criteria)
    out << (c.pass ? "PASS" : "FAIL") << ',' << r.id << '.' << c.name << ',' << (c.acceptance.empty() ? "-" : c.acceptance)
        << ',' << format_double(c.value) << ',' << c.bound << '\n';
  return out.str();
}

std::filesystem::path write_result(const ExperimentResult& r, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  const auto path = dir / (r.id + ".csv");
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << to_csv(r);
  return path;
}

// ---------------------------------------------------------------- configuration

namespace {

const std::map<std::string, std::vector<std::string>>& schema() {
  static const std::map<std::string, std::vector<std::string>> s = {
      {"general", {"pinned", "seed", "workers", "version"}},
      {"simulate", {"family", "gamma", "alpha", "v_floor", "dt", "log_values", "levels"}},
      {"E1", {"family", "gamma", "n", "t", "replicas", "v_floor", "dt", "ks_threshold", "trend_slack"}},
      {"E2",
       {"family", "gamma", "n", "t", "replicas", "v_floor", "dt", "ks_threshold", "contrast_family", "contrast_gamma"}},
      {"E3",
       {"family", "gamma", "n", "t", "replicas", "v_floor", "dt", "ks_threshold", "proxy_radius", "proxy_threshold",
        "max_steps_factor"}},
      {"E4",
       {"replicas", "alphas", "alpha_near_one", "dt", "v_floor", "subsample", "levels", "clock_ratio_threshold",
        "path_win_fraction", "near_one_threshold"}},
      {"E6",
       {"family", "gamma", "contrast_alpha", "n", "t", "replicas", "max_threshold", "sum_threshold",
        "contrast_threshold"}},
      {"E7", {"C", "n", "replicas", "count_spread", "sep_q10_floor", "count_q90"}},
      {"E8",
       {"family", "gamma", "n", "replicas", "beta_diffusive", "beta_boundary", "var_low", "var_high", "ks_threshold", "beta_sub",
        "msd_times", "msd_replicas", "slope_tolerance", "oracle_tolerance", "beta_contrast", "contrast_slope_max"}},
      {"E9", {"betas", "log_n", "tolerance", "eps", "table_nodes", "route_agreement"}},
      {"FA", {"n", "steps", "T"}},
      {"INV", {"replicas", "n", "fin_replicas", "t", "dt", "v_floor"}},
  };
  return s;
}

}  // namespace

void validate_config(const Config& cfg) {
  std::vector<std::string> names;
  for (const auto& kv : schema()) names.push_back(kv.first);
  cfg.require_sections(names);
  for (const auto& [sec, keys] : schema()) cfg.require_known(sec, keys);
}

std::filesystem::path default_pinned_path() {
  return std::filesystem::path(SLOWTRAP_CONFIG_DIR) / "pinned_thresholds.cfg";
}

Config effective_config(const Config& user) {
  validate_config(user);
  const std::filesystem::path path = user.get_string("general", "pinned", default_pinned_path().string());
  Config cfg;
  if (std::filesystem::exists(path)) {
    cfg = Config::load(path);
    validate_config(cfg);
  }
  cfg.merge(user);
  return cfg;
}

// ---------------------------------------------------------------- dispatch

const std::vector<std::string>& experiment_ids() {
  static const std::vector<std::string> ids = {"E1", "E2", "E3", "E4", "E6", "E7", "E8", "E9", "FA", "INV"};
  return ids;
}

ExperimentResult run_experiment(const std::string& id, const Config& cfg, const RunOptions& opt) {
  validate_config(cfg);
  using namespace detail;
  if (id == "E1") return run_e1(cfg, opt);
  if (id == "E2") return run_e2(cfg, opt);
  if (id == "E3") return run_e3(cfg, opt);
  if (id == "E4" || id == "E5") return run_e4(cfg, opt);
  if (id == "E6") return run_e6(cfg, opt);
  if (id == "E7") return run_e7(cfg, opt);
  if (id == "E8") return run_e8(cfg, opt);
  if (id == "E9") return run_e9(cfg, opt);
  if (id == "FA") return run_figure_a(cfg, opt);
  if (id == "INV") return run_invariants(cfg, opt);
  throw std::invalid_argument("unknown experiment id '" + id + "'");
}

const std::vector<std::string>& acceptance_ids() {
  static const std::vector<std::string> ids = {"A1", "A2", "A3", "A4", "A5", "A6", "A7", "A8"};
  return ids;
}

ExperimentResult run_acceptance(const std::string& id, const Config& cfg, const RunOptions& opt) {
  static const std::map<std::string, std::string> experiment = {{"A1", "E6"}, {"A2", "E1"}, {"A3", "E3"},
                                                                {"A4", "E4"}, {"A5", "E8"}, {"A6", "E9"},
                                                                {"A7", "FA"}, {"A8", "INV"}};
  const auto it = experiment.find(id);
  if (it == experiment.end()) throw std::invalid_argument("unknown acceptance id '" + id + "'");
  return run_experiment(it->second, cfg, opt);
}

// ---------------------------------------------------------------- shared helpers

namespace detail {

TailFamily family_from(const Config& cfg, const std::string& section, const std::string& family_key,
                       const std::string& param_key, const std::string& default_family, double default_param) {
  const auto name = cfg.get_string(section, family_key, default_family);
  const double p = cfg.get_double(section, param_key, default_param);
  if (name == "log_pareto") return TailFamily::log_pareto(p);
  if (name == "log_weibull") return TailFamily::log_weibull(p);
  if (name == "regular") return TailFamily::regular(p);
  throw ConfigError(section + "." + family_key + ": unknown family '" + name + "'");
}

std::size_t replicas_from(const Config& cfg, const std::string& section, std::size_t fallback) {
  const auto r = cfg.get_int(section, "replicas", static_cast<std::int64_t>(fallback));
  if (r < 1) throw ConfigError(section + ".replicas must be positive");
  return static_cast<std::size_t>(r);
}

ContinuumSample sample_continuum(double T, double dt, double v_floor, Rng& rng) {
  ContinuumSample s;
  s.bm = sample_bm_path(T, dt, rng);
  s.pts = sample_points(3.0 * std::sqrt(T) + 1.0, v_floor, rng);
  fit_window(s, rng);
  return s;
}

void fit_window(ContinuumSample& s, Rng& rng, double level) {
  const double hi = s.bm.cell_max.empty() ? 0.0 : *std::max_element(s.bm.cell_max.begin(), s.bm.cell_max.end());
  const double lo = s.bm.cell_min.empty() ? 0.0 : *std::min_element(s.bm.cell_min.begin(), s.bm.cell_min.end());
  const double need = std::max(hi, -lo) + 1.0;
  if (need > s.pts.W) extend_window(s.pts, std::max(need, 1.5 * s.pts.W), rng);
  if (level <= 0.0) return;
  for (;;) {
    try {
      localization_sites(s.pts, level);
      return;
    } catch (const WindowExhausted&) {
      extend_window(s.pts, 2.0 * s.pts.W, rng);
    }
  }
}

void run_until_level(ContinuumSample& s, double level, Rng& rng, double max_T) {
  for (;;) {
    fit_window(s, rng);
    const auto rec = record_covers(s.pts, s.bm);
    if (!rec.empty() && rec.back().v > level) return;
    const double T = s.bm.horizon();
    if (T >= max_T) throw std::runtime_error("bm too short");
    extend_bm(s.bm, 2.0 * T, rng);
  }
}

double ks_noise(std::size_t na, std::size_t nb) {
  const double a = static_cast<double>(na), b = static_cast<double>(nb);
  return 0.5 * 1.358 * std::sqrt((a + b) / (a * b));
}

SignBalance sign_balance(const std::vector<double>& x) {
  std::vector<double> s(x.size());
  for (std::size_t k = 0; k < x.size(); ++k) s[k] = x[k] > 0.0 ? 1.0 : (x[k] < 0.0 ? -1.0 : 0.0);
  return {mean(s), std_error(s)};
}

double pinned(const Config& cfg, const std::string& section, const std::string& key, double fallback) {
  return cfg.get_double(section, key, fallback);
}

}  // namespace detail
}  // namespace slowtrap
