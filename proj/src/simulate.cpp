#include "slowtrap/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "slowtrap/continuum.hpp"
#include "slowtrap/lattice.hpp"
#include "slowtrap/rng.hpp"

namespace slowtrap {
namespace {

TailFamily simulate_family(const Config& cfg) {
  const auto name = cfg.get_string("simulate", "family", "regular");
  const double p = cfg.get_double("simulate", "gamma", 0.5);
  if (name == "log_pareto") return TailFamily::log_pareto(p);
  if (name == "log_weibull") return TailFamily::log_weibull(p);
  if (name == "regular") return TailFamily::regular(p);
  throw ConfigError("simulate.family: unknown family '" + name + "'");
}

void require_finite(const StepPath& p) {
  bool ok = std::isfinite(p.initial_value);
  for (double v : p.values) ok = ok && std::isfinite(v);
  if (!ok) throw std::overflow_error("values overflow a double; set [simulate] log_values = true");
}

/// Points and Brownian path, grown until the range stays inside the window
/// and m^B at the horizon exceeds `level`.
void grow(MarkedPointSet& pts, BmPath& bm, double level, Rng& rng) {
  for (;;) {
    const double hi = *std::max_element(bm.cell_max.begin(), bm.cell_max.end());
    const double lo = *std::min_element(bm.cell_min.begin(), bm.cell_min.end());
    if (std::max(hi, -lo) + 1.0 > pts.W) extend_window(pts, 2.0 * (std::max(hi, -lo) + 1.0), rng);
    const auto rec = record_covers(pts, bm);
    if (level <= 0.0 || (!rec.empty() && rec.back().v > level)) return;
    extend_bm(bm, 2.0 * bm.horizon(), rng);
  }
}

}  // namespace

StepPath simulate_process(const std::string& process, std::size_t n, double t, std::uint64_t seed, const Config& cfg) {
  if (!(t > 0.0)) throw std::invalid_argument("simulate: --t must be positive");
  Rng rng = make_stream(seed, 0);
  if (process == "clock" || process == "btm") {
    const auto steps = static_cast<std::size_t>(std::floor(static_cast<double>(n) * static_cast<double>(n) * t));
    if (steps < 1) throw std::invalid_argument("simulate: n^2 t must be at least 1");
    const TrapLandscape land(simulate_family(cfg), rng());
    DepthField depths(land);
    const auto walk = simulate_srw(steps, rng);
    const auto clock = clock_process(depths, walk, rng);
    if (process == "btm") {
      const double horizon = clock.linear[steps - 1];
      if (!std::isfinite(horizon)) throw std::overflow_error("clock overflows a double; use a regular family");
      return btm_path(walk, clock, horizon);
    }
    if (cfg.get_bool("simulate", "log_values", false)) {
      StepPath p(clock.log_times[0], static_cast<double>(steps));
      for (std::size_t k = 1; k <= steps; ++k) p.push_jump(static_cast<double>(k), clock.log_times[k]);
      return p;
    }
    auto p = clock_as_path(clock);
    require_finite(p);
    return p;
  }
  const double v_floor = cfg.get_double("simulate", "v_floor", 0.01);
  const double dt = cfg.get_double("simulate", "dt", 1e-3) * std::max(1.0, t);
  auto bm = sample_bm_path(std::max(t, 1.0), dt, rng);
  auto pts = sample_points(3.0 * std::sqrt(bm.horizon()) + 1.0, v_floor, rng);
  if (process == "mB") {
    grow(pts, bm, 0.0, rng);
    return explored_extremal_process(pts, bm).truncated(t);
  }
  if (process == "extremal_fin") {
    grow(pts, bm, t, rng);
    return extremal_fin_path(pts, bm, t);
  }
  if (process == "fin") {
    const double alpha = cfg.get_double("simulate", "alpha", 0.5);
    const auto levels = static_cast<std::size_t>(cfg.get_int("simulate", "levels", 1000));
    const FinClockOptions opt{0.0, true};
    for (;;) {
      grow(pts, bm, 0.0, rng);
      const auto clock = fin_clock_path(pts, bm.grid, alpha, opt);
      if (clock.values.back() > t) return fin_path(clock, bm.grid, t, levels);
      extend_bm(bm, 2.0 * bm.horizon(), rng);
    }
  }
  throw std::invalid_argument("simulate: unknown process '" + process + "'");
}

}  // namespace slowtrap
