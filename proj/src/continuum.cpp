#include "slowtrap/continuum.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <random>

#include "slowtrap/simd/kernels.hpp"

namespace slowtrap {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::size_t poisson(double mean, Rng& rng) {
  if (!(mean > 0.0)) return 0;
  std::poisson_distribution<std::int64_t> P(mean);
  return static_cast<std::size_t>(P(rng));
}

void sort_by_position(MarkedPointSet& pts) {
  std::vector<std::size_t> idx(pts.x.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return pts.x[a] < pts.x[b]; });
  std::vector<double> x(idx.size()), v(idx.size());
  for (std::size_t k = 0; k < idx.size(); ++k) {
    x[k] = pts.x[idx[k]];
    v[k] = pts.v[idx[k]];
  }
  pts.x = std::move(x);
  pts.v = std::move(v);
}

// Points on [lo, hi] with Pareto marks above `floor`.
void add_strip(MarkedPointSet& pts, double lo, double hi, double floor, Rng& rng) {
  const std::size_t n = poisson((hi - lo) / floor, rng);
  for (std::size_t k = 0; k < n; ++k) {
    pts.x.push_back(lo + (hi - lo) * uniform_open(rng));
    pts.v.push_back(floor / uniform_open(rng));
  }
}

double resolve_bandwidth(const GridPath& bm, const FinClockOptions& opt) {
  const double h = opt.bandwidth > 0.0 ? opt.bandwidth : std::sqrt(bm.dt);
  return h;
}

// Iterative segment tree for range sums; sums only whole nodes inside the
// range, so a huge weight elsewhere cannot swamp a small band.
class RangeSum {
 public:
  explicit RangeSum(const std::vector<double>& w) : n_(w.size()), t_(2 * w.size(), 0.0) {
    std::copy(w.begin(), w.end(), t_.begin() + static_cast<std::ptrdiff_t>(n_));
    for (std::size_t i = n_; i-- > 1;) t_[i] = t_[2 * i] + t_[2 * i + 1];
  }
  double sum(std::size_t l, std::size_t r) const noexcept {
    double s = 0.0;
    for (l += n_, r += n_; l < r; l >>= 1U, r >>= 1U) {
      if (l & 1U) s += t_[l++];
      if (r & 1U) s += t_[--r];
    }
    return s;
  }

 private:
  std::size_t n_;
  std::vector<double> t_;
};

}  // namespace

// ---------------------------------------------------------------- points

MarkedPointSet sample_points(double W, double v_floor, Rng& rng) {
  if (!(W > 0.0) || !(v_floor > 0.0)) throw std::invalid_argument("sample_points: W and v_floor must be positive");
  MarkedPointSet pts;
  pts.W = W;
  pts.v_floor = v_floor;
  add_strip(pts, -W, W, v_floor, rng);
  sort_by_position(pts);
  return pts;
}

void extend_window(MarkedPointSet& pts, double new_W, Rng& rng) {
  if (new_W <= pts.W) return;
  add_strip(pts, -new_W, -pts.W, pts.v_floor, rng);
  add_strip(pts, pts.W, new_W, pts.v_floor, rng);
  pts.W = new_W;
  sort_by_position(pts);
}

void lower_floor(MarkedPointSet& pts, double new_floor, Rng& rng) {
  if (!(new_floor > 0.0)) throw std::invalid_argument("lower_floor: floor must be positive");
  if (new_floor >= pts.v_floor) return;
  const double a = 1.0 / pts.v_floor, b = 1.0 / new_floor;
  const std::size_t n = poisson(2.0 * pts.W * (b - a), rng);
  for (std::size_t k = 0; k < n; ++k) {
    pts.x.push_back(-pts.W + 2.0 * pts.W * uniform_open(rng));
    // 1/v is uniform on [a, b) under the v^-2 intensity
    pts.v.push_back(1.0 / (a + (b - a) * (1.0 - uniform_open(rng))));
  }
  pts.v_floor = new_floor;
  sort_by_position(pts);
}

MarkedPointSet make_points(std::vector<double> x, std::vector<double> v, double W, double v_floor) {
  if (x.size() != v.size()) throw std::invalid_argument("make_points: length mismatch");
  MarkedPointSet pts;
  pts.x = std::move(x);
  pts.v = std::move(v);
  pts.W = W;
  pts.v_floor = v_floor;
  for (std::size_t k = 0; k < pts.size(); ++k)
    if (std::fabs(pts.x[k]) > W || !(pts.v[k] > v_floor)) throw std::invalid_argument("make_points: point outside window");
  sort_by_position(pts);
  return pts;
}

// ---------------------------------------------------------------- Brownian motion

GridPath sample_bm(double T, double dt, Rng& rng) {
  if (!(dt > 0.0) || !(T >= 0.0)) throw std::invalid_argument("sample_bm: need dt > 0 and T >= 0");
  const auto n = static_cast<std::size_t>(std::llround(T / dt));
  std::vector<double> inc(n);
  const double sd = std::sqrt(dt);
  std::normal_distribution<double> N(0.0, 1.0);
  for (double& z : inc) z = sd * N(rng);
  GridPath g;
  g.dt = dt;
  g.values.assign(n + 1, 0.0);
  simd::cumulative_sum(inc, 0.0, std::span<double>(g.values).subspan(1));
  return g;
}

double bridge_max(double a, double b, double dt, double u) noexcept {
  const double d = b - a;
  return 0.5 * (a + b + std::sqrt(d * d - 2.0 * dt * std::log(u)));
}

namespace {

void fill_envelope(BmPath& bm, std::size_t from, Rng& rng) {
  const auto& y = bm.grid.values;
  const std::size_t cells = y.size() - 1;
  bm.cell_max.resize(cells);
  bm.cell_min.resize(cells);
  for (std::size_t k = from; k < cells; ++k) {
    bm.cell_max[k] = bridge_max(y[k], y[k + 1], bm.grid.dt, uniform_open(rng));
    bm.cell_min[k] = -bridge_max(-y[k], -y[k + 1], bm.grid.dt, uniform_open(rng));
  }
}

}  // namespace

BmPath sample_bm_path(double T, double dt, Rng& rng) {
  BmPath bm;
  bm.grid = sample_bm(T, dt, rng);
  fill_envelope(bm, 0, rng);
  return bm;
}

void extend_bm(BmPath& bm, double new_T, Rng& rng) {
  const double dt = bm.grid.dt;
  const auto target = static_cast<std::size_t>(std::llround(new_T / dt));
  const std::size_t cells = bm.grid.values.size() - 1;
  if (target <= cells) return;
  const double sd = std::sqrt(dt);
  std::normal_distribution<double> N(0.0, 1.0);
  for (std::size_t k = cells; k < target; ++k) bm.grid.values.push_back(bm.grid.values.back() + sd * N(rng));
  fill_envelope(bm, cells, rng);
}

double bm_range(const BmPath& bm, double t) {
  const auto cells = std::min(bm.cell_max.size(), static_cast<std::size_t>(std::ceil(t / bm.grid.dt - 1e-9)));
  if (cells == 0) return 0.0;
  const auto mx = *std::max_element(bm.cell_max.begin(), bm.cell_max.begin() + static_cast<std::ptrdiff_t>(cells));
  const auto mn = *std::min_element(bm.cell_min.begin(), bm.cell_min.begin() + static_cast<std::ptrdiff_t>(cells));
  return std::max(mx, 0.0) - std::min(mn, 0.0);
}

namespace {

double crossing_time(const BmPath& bm, std::size_t k, double x) {
  const double a = bm.grid.values[k], b = bm.grid.values[k + 1];
  const double dt = bm.grid.dt;
  const bool chord_crosses = x > 0.0 ? b >= x : b <= x;
  if (chord_crosses && a != b) return dt * (static_cast<double>(k) + std::clamp((x - a) / (b - a), 0.0, 1.0));
  // levels reached only by the bridge excursion: the midpoint, unless the
  // chord moves toward x, in which case the cell end keeps times monotone in |x|
  const bool toward = x > 0.0 ? b > a : b < a;
  return dt * (static_cast<double>(k) + (toward ? 1.0 : 0.5));
}

}  // namespace

double hitting_time(const BmPath& bm, double x) {
  if (x == 0.0) return 0.0;
  for (std::size_t k = 0; k < bm.cell_max.size(); ++k) {
    if ((x > 0.0 && bm.cell_max[k] >= x) || (x < 0.0 && bm.cell_min[k] <= x)) return crossing_time(bm, k, x);
  }
  return kInf;
}

std::vector<Cover> record_covers(const MarkedPointSet& pts, const BmPath& bm) {
  const std::size_t cells = bm.cell_max.size();
  double hi = 0.0, lo = 0.0;
  for (std::size_t k = 0; k < cells; ++k) {
    hi = std::max(hi, bm.cell_max[k]);
    lo = std::min(lo, bm.cell_min[k]);
  }
  if (hi > pts.W || lo < -pts.W) throw WindowExhausted();

  std::vector<Cover> covers;
  const auto first_pos = static_cast<std::size_t>(std::lower_bound(pts.x.begin(), pts.x.end(), 0.0) - pts.x.begin());
  // positive side in increasing x, negative side in decreasing x; both are
  // hit in that order, so one sweep over the cells suffices per side
  std::size_t ip = first_pos;
  std::size_t in = first_pos;  // next negative point is in - 1
  while (ip < pts.size() && pts.x[ip] == 0.0) {
    covers.push_back({0.0, 0.0, pts.v[ip]});
    ++ip;
  }
  double run_hi = 0.0, run_lo = 0.0;
  for (std::size_t k = 0; k < cells && (ip < pts.size() || in > 0); ++k) {
    if (bm.cell_max[k] > run_hi) {
      run_hi = bm.cell_max[k];
      while (ip < pts.size() && pts.x[ip] <= run_hi) {
        covers.push_back({crossing_time(bm, k, pts.x[ip]), pts.x[ip], pts.v[ip]});
        ++ip;
      }
    }
    if (bm.cell_min[k] < run_lo) {
      run_lo = bm.cell_min[k];
      while (in > 0 && pts.x[in - 1] >= run_lo) {
        covers.push_back({crossing_time(bm, k, pts.x[in - 1]), pts.x[in - 1], pts.v[in - 1]});
        --in;
      }
    }
  }
  std::stable_sort(covers.begin(), covers.end(), [](const Cover& a, const Cover& b) { return a.time < b.time; });
  std::vector<Cover> records;
  double best = 0.0;
  for (const auto& c : covers) {
    if (c.v > best) {
      best = c.v;
      records.push_back(c);
    }
  }
  return records;
}

StepPath explored_extremal_process(const MarkedPointSet& pts, const BmPath& bm) {
  const double T = bm.horizon();
  StepPath m(0.0, T);
  for (const auto& c : record_covers(pts, bm)) m.push_jump(c.time, c.v);
  m.horizon = T;
  return m;
}

StepPath extremal_fin_path(const MarkedPointSet& pts, const BmPath& bm, double level_horizon) {
  const auto rec = record_covers(pts, bm);
  if (rec.empty() || !(rec.back().v > level_horizon)) throw std::runtime_error("bm too short");
  // I^B_t = time of the first record with mark > t, where B sits on that point
  StepPath f(rec[0].x, level_horizon);
  for (std::size_t j = 1; j < rec.size() && rec[j - 1].v <= level_horizon; ++j) f.push_jump(rec[j - 1].v, rec[j].x);
  f.horizon = level_horizon;
  return f;
}

Localization localization_sites(const MarkedPointSet& pts, double t) {
  if (t < pts.v_floor) throw std::invalid_argument("localization_sites: level below the mark floor");
  const auto first_pos = static_cast<std::size_t>(std::lower_bound(pts.x.begin(), pts.x.end(), 0.0) - pts.x.begin());
  double z1 = kInf, z2 = -kInf;
  for (std::size_t k = first_pos; k < pts.size(); ++k)
    if (pts.v[k] > t) {
      z1 = pts.x[k];
      break;
    }
  for (std::size_t k = std::min(first_pos + 1, pts.size()); k-- > 0;)
    if (pts.x[k] <= 0.0 && pts.v[k] > t) {
      z2 = pts.x[k];
      break;
    }
  if (!std::isfinite(z1) || !std::isfinite(z2)) throw WindowExhausted();
  Localization loc{z1, z2, 1.0, 0.0};
  if (z1 > z2) {
    loc.p1 = -z2 / (z1 - z2);
    loc.p2 = z1 / (z1 - z2);
  }
  return loc;
}

// ---------------------------------------------------------------- local time and FIN clock

double bm_local_time(const GridPath& bm, double x, double t, double h) {
  if (!(h > 0.0)) throw std::invalid_argument("bm_local_time: bandwidth must be positive");
  const auto k = std::min(bm.values.size() - 1, static_cast<std::size_t>(std::floor(t / bm.dt + 1e-9)));
  const auto c = simd::band_count(std::span<const double>(bm.values.data(), k), x - 0.5 * h, x + 0.5 * h);
  return static_cast<double>(c) * bm.dt / h;
}

double small_mark_compensator(double alpha, double v_floor, double t) {
  const double e = 1.0 / alpha - 1.0;
  return t * std::pow(v_floor, e) / e;
}

double floor_for_bias(double alpha, double rel) {
  const double e = 1.0 / alpha - 1.0;
  return std::pow(rel * e, 1.0 / e);
}

double fin_clock(const MarkedPointSet& pts, const GridPath& bm, double alpha, double t, const FinClockOptions& opt) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("fin_clock: alpha must lie in (0, 1)");
  const double h = resolve_bandwidth(bm, opt);
  const auto k = std::min(bm.values.size(), static_cast<std::size_t>(std::floor(t / bm.dt + 1e-9)) + 1);
  const auto [lo, hi] = simd::min_max(std::span<const double>(bm.values.data(), k));
  double total = 0.0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (pts.x[i] <= lo - h || pts.x[i] >= hi + h) continue;
    const double l = bm_local_time(bm, pts.x[i], t, h);
    if (l > 0.0) total += l * std::pow(pts.v[i], 1.0 / alpha);
  }
  if (opt.compensate) total += small_mark_compensator(alpha, pts.v_floor, t);
  return total;
}

GridPath fin_clock_path(const MarkedPointSet& pts, const GridPath& bm, double alpha, const FinClockOptions& opt) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("fin_clock_path: alpha must lie in (0, 1)");
  const double h = resolve_bandwidth(bm, opt);
  std::vector<double> w(pts.size());
  for (std::size_t i = 0; i < w.size(); ++i) w[i] = std::pow(pts.v[i], 1.0 / alpha);
  const RangeSum tree(w);
  const std::size_t n = bm.values.size() - 1;
  const double scale = bm.dt / h;
  const double comp = opt.compensate ? small_mark_compensator(alpha, pts.v_floor, bm.dt) : 0.0;
  std::vector<double> inc(n);
  for (std::size_t s = 0; s < n; ++s) {
    const double y = bm.values[s];
    const auto l = std::upper_bound(pts.x.begin(), pts.x.end(), y - 0.5 * h) - pts.x.begin();
    const auto r = std::lower_bound(pts.x.begin(), pts.x.end(), y + 0.5 * h) - pts.x.begin();
    inc[s] = (r > l ? scale * tree.sum(static_cast<std::size_t>(l), static_cast<std::size_t>(r)) : 0.0) + comp;
  }
  GridPath clock;
  clock.dt = bm.dt;
  clock.values.assign(n + 1, 0.0);
  simd::cumulative_sum(inc, 0.0, std::span<double>(clock.values).subspan(1));
  return clock;
}

StepPath fin_path(const GridPath& clock, const GridPath& bm, double level_horizon, std::size_t levels, double power) {
  if (levels == 0) throw std::invalid_argument("fin_path: need at least one level");
  auto value_at = [&](double t) {
    const double target = power == 1.0 ? t : std::pow(t, 1.0 / power);
    const double s = first_exceed_time(clock, target);
    if (!std::isfinite(s)) throw std::runtime_error("bm too short");
    return bm.at(s);
  };
  StepPath f(value_at(0.0), level_horizon);
  for (std::size_t j = 1; j < levels; ++j) {
    const double t = level_horizon * static_cast<double>(j) / static_cast<double>(levels);
    f.push_jump(t, value_at(t));
  }
  f.horizon = level_horizon;
  return f;
}

// ---------------------------------------------------------------- fractional kinetics

double stable_subordinator_unit(double beta, Rng& rng) {
  if (!(beta > 0.0 && beta < 1.0)) throw std::invalid_argument("stable_subordinator_unit: beta must lie in (0, 1)");
  const double u = std::numbers::pi * uniform_open(rng);
  const double e = unit_exponential(rng);
  const double a = std::pow(std::sin(beta * u) / std::sin(u), 1.0 / (1.0 - beta)) * std::sin((1.0 - beta) * u) /
                   std::sin(beta * u);
  return std::pow(a / e, (1.0 - beta) / beta);
}

double fk_marginal(double beta, double t, Rng& rng) {
  if (!(t >= 0.0)) throw std::invalid_argument("fk_marginal: t must be >= 0");
  if (t == 0.0) return 0.0;
  const double ds = 1e-3 * std::pow(t, beta);
  const double jump_scale = std::pow(ds, 1.0 / beta);
  double d = 0.0;
  std::size_t k = 0;
  while (d <= t) {
    d += jump_scale * stable_subordinator_unit(beta, rng);
    ++k;
  }
  const double e = ds * static_cast<double>(k);
  return std::sqrt(e) * standard_normal(rng);
}

double fk_marginal_exact(double beta, double t, Rng& rng) {
  if (t == 0.0) return 0.0;
  const double e = std::pow(t / stable_subordinator_unit(beta, rng), beta);
  return std::sqrt(e) * standard_normal(rng);
}

}  // namespace slowtrap
