#pragma once

// Shared plumbing for the experiment sources.

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "slowtrap/cadlag.hpp"
#include "slowtrap/config.hpp"
#include "slowtrap/continuum.hpp"
#include "slowtrap/harness.hpp"
#include "slowtrap/landscape.hpp"
#include "slowtrap/rng.hpp"

namespace slowtrap::detail {

inline std::string fmt(double v) { return format_double(v); }
inline std::string fmt(std::size_t v) { return std::to_string(v); }

/// Stream for replica `r` of the experiment part labelled `salt`.
inline Rng replica_stream(const RunOptions& opt, std::uint64_t salt, std::uint64_t r) {
  return make_stream(derive_seed(opt.seed, salt), r);
}

/// Stable salt from a short label.
inline std::uint64_t salt_of(const std::string& label, std::uint64_t extra = 0) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : label) h = (h ^ c) * 1099511628211ULL;
  return combine_index(h, extra);
}

/// family = log_pareto | log_weibull | regular, parameter from `param_key`.
TailFamily family_from(const Config& cfg, const std::string& section, const std::string& family_key,
                       const std::string& param_key, const std::string& default_family, double default_param);

std::size_t replicas_from(const Config& cfg, const std::string& section, std::size_t fallback);

/// Points and Brownian path whose window covers the path with margin.
struct ContinuumSample {
  MarkedPointSet pts;
  BmPath bm;
};
ContinuumSample sample_continuum(double T, double dt, double v_floor, Rng& rng);
/// Grows the window until the range (and, if t > 0, the flanking sites
/// with mark > t) lie inside it.
void fit_window(ContinuumSample& s, Rng& rng, double level = 0.0);
/// Extends the path (doubling) until m^B at the horizon exceeds `level`.
void run_until_level(ContinuumSample& s, double level, Rng& rng, double max_T = 4096.0);

/// Half the 95% two-sample KS critical value; the noise allowance of trend checks.
double ks_noise(std::size_t na, std::size_t nb);

/// Sign symmetry: mean of sign(x) and its standard error.
struct SignBalance {
  double mean;
  double se;
};
SignBalance sign_balance(const std::vector<double>& x);

/// Reads a pinned constant from [pinned.<section>] or falls back.
double pinned(const Config& cfg, const std::string& section, const std::string& key, double fallback);

ExperimentResult run_e1(const Config& cfg, const RunOptions& opt);
ExperimentResult run_e2(const Config& cfg, const RunOptions& opt);
ExperimentResult run_e3(const Config& cfg, const RunOptions& opt);
ExperimentResult run_e4(const Config& cfg, const RunOptions& opt);
ExperimentResult run_e6(const Config& cfg, const RunOptions& opt);
ExperimentResult run_e7(const Config& cfg, const RunOptions& opt);
ExperimentResult run_e8(const Config& cfg, const RunOptions& opt);
ExperimentResult run_e9(const Config& cfg, const RunOptions& opt);
ExperimentResult run_figure_a(const Config& cfg, const RunOptions& opt);
ExperimentResult run_invariants(const Config& cfg, const RunOptions& opt);

}  // namespace slowtrap::detail
