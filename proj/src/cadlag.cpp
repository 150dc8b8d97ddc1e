#include "slowtrap/cadlag.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace slowtrap {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// |a - b| with inf - inf treated as equal.
double absdiff(double a, double b) noexcept { return a == b ? 0.0 : std::fabs(a - b); }

void require_finite_path(const StepPath& f, const char* who) {
  auto bad = [](double v) { return !std::isfinite(v); };
  if (bad(f.initial_value) || std::any_of(f.values.begin(), f.values.end(), bad))
    throw std::invalid_argument(std::string(who) + ": path values must be finite");
}

void require_horizon(const StepPath& f, double T, const char* who) {
  if (!(T >= 0.0) || f.horizon < T * (1.0 - 1e-12))
    throw std::invalid_argument(std::string(who) + ": path horizon shorter than T");
}

// Breakpoints of f and g in (0, T), merged and deduplicated, bracketed by 0 and T.
std::vector<double> merged_breaks(const StepPath& f, const StepPath& g, double T) {
  std::vector<double> b;
  b.reserve(f.jump_count() + g.jump_count() + 2);
  b.push_back(0.0);
  std::size_t i = 0;
  std::size_t j = 0;
  while (i < f.jump_count() || j < g.jump_count()) {
    double next;
    if (j >= g.jump_count() || (i < f.jump_count() && f.jump_times[i] <= g.jump_times[j])) {
      next = f.jump_times[i++];
    } else {
      next = g.jump_times[j++];
    }
    if (next >= T) break;
    if (next > b.back()) b.push_back(next);
  }
  b.push_back(T);
  return b;
}

struct Interval {
  double lo = 1.0;
  double hi = 0.0;
  bool empty() const noexcept { return lo > hi; }
};

// Parameters t in [0, 1] with ||p - (q0 + t (q1 - q0))||_inf <= eps.
Interval free_interval(double pt, double px, double q0t, double q0x, double q1t, double q1x, double eps) noexcept {
  Interval iv{0.0, 1.0};
  auto clip = [&](double c, double d) {
    if (d == 0.0) {
      if (std::fabs(c) > eps) iv = Interval{};
      return;
    }
    double a = (c - eps) / d;
    double b = (c + eps) / d;
    if (d < 0.0) std::swap(a, b);
    iv.lo = std::max(iv.lo, a);
    iv.hi = std::min(iv.hi, b);
  };
  clip(pt - q0t, q1t - q0t);
  if (!iv.empty()) clip(px - q0x, q1x - q0x);
  return iv;
}

double point_dist(const ParamGraph& p, std::size_t i, const ParamGraph& q, std::size_t j) noexcept {
  return std::max(std::fabs(p.t[i] - q.t[j]), std::fabs(p.x[i] - q.x[j]));
}

void add_ramp(StepPath& f, double t0, double t1, double v0, double v1, int steps) {
  const double h = (t1 - t0) / steps;
  for (int k = 0; k < steps; ++k) {
    const double mid = v0 + (k + 0.5) * (v1 - v0) / steps;
    f.push_jump(t0 + k * h, mid);
  }
}

}  // namespace

// ---------------------------------------------------------------- StepPath

double StepPath::at(double t) const noexcept {
  if (jump_times.empty() || t < jump_times.front()) return initial_value;
  const auto it = std::upper_bound(jump_times.begin(), jump_times.end(), t);
  return values[static_cast<std::size_t>(it - jump_times.begin()) - 1];
}

double StepPath::left_limit(double t) const noexcept {
  if (jump_times.empty() || t <= jump_times.front()) return initial_value;
  const auto it = std::lower_bound(jump_times.begin(), jump_times.end(), t);
  return values[static_cast<std::size_t>(it - jump_times.begin()) - 1];
}

void StepPath::push_jump(double t, double v) {
  if (!(t >= 0.0)) throw std::invalid_argument("push_jump: negative or NaN time");
  if (t == 0.0 && jump_times.empty()) {
    initial_value = v;
    return;
  }
  if (!jump_times.empty() && t < jump_times.back()) throw std::invalid_argument("push_jump: times must be non-decreasing");
  if (!jump_times.empty() && t == jump_times.back()) {
    values.back() = v;
    const double before = values.size() >= 2 ? values[values.size() - 2] : initial_value;
    if (before == v) {
      values.pop_back();
      jump_times.pop_back();
    }
    return;
  }
  if (v == final_value()) return;
  jump_times.push_back(t);
  values.push_back(v);
  if (t > horizon) horizon = t;
}

void StepPath::validate() const {
  if (jump_times.size() != values.size()) throw std::invalid_argument("StepPath: times/values length mismatch");
  if (!std::isfinite(horizon) || horizon < 0.0) throw std::invalid_argument("StepPath: horizon must be finite and >= 0");
  for (std::size_t k = 0; k < jump_times.size(); ++k) {
    if (!(jump_times[k] > 0.0) || jump_times[k] > horizon) throw std::invalid_argument("StepPath: jump outside (0, T]");
    if (k > 0 && !(jump_times[k] > jump_times[k - 1])) throw std::invalid_argument("StepPath: jump times not increasing");
  }
}

StepPath StepPath::truncated(double T) const {
  StepPath out(initial_value, T);
  for (std::size_t k = 0; k < jump_times.size() && jump_times[k] <= T; ++k) {
    out.jump_times.push_back(jump_times[k]);
    out.values.push_back(values[k]);
  }
  return out;
}

StepPath StepPath::indicator_from(double s, double T) {
  StepPath f(0.0, T);
  f.push_jump(s, 1.0);
  f.horizon = T;
  return f;
}

double GridPath::at(double t) const noexcept {
  if (values.empty()) return 0.0;
  if (t <= 0.0) return values.front();
  const double pos = t / dt;
  const auto last = static_cast<double>(values.size() - 1);
  if (pos >= last) return values.back();
  const auto k = static_cast<std::size_t>(pos);
  const double w = pos - static_cast<double>(k);
  return values[k] + w * (values[k + 1] - values[k]);
}

// ---------------------------------------------------------------- graphs

ParamGraph completed_graph(const StepPath& f, double T) {
  require_finite_path(f, "completed_graph");
  ParamGraph g;
  g.t.push_back(0.0);
  g.x.push_back(f.initial_value);
  double cur = f.initial_value;
  for (std::size_t k = 0; k < f.jump_count() && f.jump_times[k] <= T; ++k) {
    const double s = f.jump_times[k];
    if (s > g.t.back()) {
      g.t.push_back(s);
      g.x.push_back(cur);
    }
    cur = f.values[k];
    g.t.push_back(s);
    g.x.push_back(cur);
  }
  if (T > g.t.back()) {
    g.t.push_back(T);
    g.x.push_back(cur);
  }
  return g;
}

ParamGraph completed_graph(const GridPath& f, double T) {
  if (f.values.empty()) throw std::invalid_argument("completed_graph: empty grid path");
  if (T > f.horizon() * (1.0 + 1e-12) + 1e-300) throw std::invalid_argument("completed_graph: grid path shorter than T");
  ParamGraph g;
  for (std::size_t k = 0; k < f.values.size(); ++k) {
    const double t = f.dt * static_cast<double>(k);
    if (t >= T && k > 0) break;
    g.t.push_back(t);
    g.x.push_back(f.values[k]);
  }
  if (T > g.t.back()) {
    g.t.push_back(T);
    g.x.push_back(f.at(T));
  }
  return g;
}

// ---------------------------------------------------------------- L1 / sup

double d_L1(const StepPath& f, const StepPath& g, double T) {
  require_horizon(f, T, "d_L1");
  require_horizon(g, T, "d_L1");
  const auto b = merged_breaks(f, g, T);
  double total = 0.0;
  for (std::size_t k = 0; k + 1 < b.size(); ++k) {
    const double d = absdiff(f.at(b[k]), g.at(b[k]));
    if (d != 0.0) total += d * (b[k + 1] - b[k]);
  }
  return total;
}

double d_sup(const StepPath& f, const StepPath& g, double T) {
  require_horizon(f, T, "d_sup");
  require_horizon(g, T, "d_sup");
  const auto b = merged_breaks(f, g, T);
  double best = 0.0;
  for (double t : b) best = std::max(best, absdiff(f.at(t), g.at(t)));
  return best;
}

// ---------------------------------------------------------------- J1

namespace {

struct Jumps {
  std::vector<double> s;  // s[k] for k >= 1 is the time of the jump into a[k]; s[0] unused
  std::vector<double> a;  // a[0] is the initial value
};

Jumps interior_jumps(const StepPath& f, double T) {
  Jumps j;
  j.s.push_back(0.0);
  j.a.push_back(f.initial_value);
  for (std::size_t k = 0; k < f.jump_count() && f.jump_times[k] < T; ++k) {
    j.s.push_back(f.jump_times[k]);
    j.a.push_back(f.values[k]);
  }
  return j;
}

bool j1_feasible(const Jumps& f, const Jumps& g, double T, double eps) {
  const std::size_t p = f.a.size() - 1;
  const std::size_t q = g.a.size() - 1;
  if (std::fabs(f.a[0] - g.a[0]) > eps) return false;
  std::vector<double> E((p + 1) * (q + 1), kInf);
  auto at = [&](std::size_t i, std::size_t j) -> double& { return E[i * (q + 1) + j]; };
  at(0, 0) = 0.0;
  for (std::size_t i = 0; i <= p; ++i) {
    for (std::size_t j = 0; j <= q; ++j) {
      const double e = at(i, j);
      if (e == kInf) continue;
      if (i < p && std::fabs(f.a[i + 1] - g.a[j]) <= eps) {
        const double u = std::max({e, f.s[i + 1] - eps, 0.0});
        if (u <= f.s[i + 1] + eps && u <= T && (j == q || u <= g.s[j + 1])) at(i + 1, j) = std::min(at(i + 1, j), u);
      }
      if (j < q) {
        const double t = g.s[j + 1];
        if (t >= e) {
          if (std::fabs(f.a[i] - g.a[j + 1]) <= eps && (i == p || t <= f.s[i + 1] + eps))
            at(i, j + 1) = std::min(at(i, j + 1), t);
          if (i < p && std::fabs(t - f.s[i + 1]) <= eps && std::fabs(f.a[i + 1] - g.a[j + 1]) <= eps)
            at(i + 1, j + 1) = std::min(at(i + 1, j + 1), t);
        }
      }
    }
  }
  return at(p, q) < kInf;
}

}  // namespace

double d_J1(const StepPath& f, const StepPath& g, double T) {
  require_horizon(f, T, "d_J1");
  require_horizon(g, T, "d_J1");
  require_finite_path(f, "d_J1");
  require_finite_path(g, "d_J1");
  const Jumps jf = interior_jumps(f, T);
  const Jumps jg = interior_jumps(g, T);
  std::vector<double> cand{0.0};
  for (double a : jf.a)
    for (double b : jg.a) cand.push_back(std::fabs(a - b));
  for (std::size_t k = 1; k < jf.s.size(); ++k)
    for (std::size_t l = 1; l < jg.s.size(); ++l) cand.push_back(std::fabs(jf.s[k] - jg.s[l]));
  std::sort(cand.begin(), cand.end());
  cand.erase(std::unique(cand.begin(), cand.end()), cand.end());
  // Comparisons inside the DP are evaluated in floating point; a relative
  // slack keeps a critical value feasible when it is computed as a difference.
  double scale = std::max(1.0, T);
  for (double a : jf.a) scale = std::max(scale, std::fabs(a));
  for (double b : jg.a) scale = std::max(scale, std::fabs(b));
  const double slack = 64.0 * std::numeric_limits<double>::epsilon() * scale;
  std::size_t lo = 0;
  std::size_t hi = cand.size() - 1;
  if (!j1_feasible(jf, jg, T, cand[hi] + slack)) {
    // Only reachable when no warp can match the jump counts within [0, T];
    // with every value pair admissible a warp always exists, so this is a bug guard.
    throw std::logic_error("d_J1: largest critical value infeasible");
  }
  while (lo < hi) {
    const std::size_t mid = lo + (hi - lo) / 2;
    if (j1_feasible(jf, jg, T, cand[mid] + slack)) {
      hi = mid;
    } else {
      lo = mid + 1;
    }
  }
  return cand[lo];
}

// ---------------------------------------------------------------- M1

bool frechet_at_most(const ParamGraph& p, const ParamGraph& q, double eps) {
  const std::size_t n = p.size();
  const std::size_t m = q.size();
  if (n == 0 || m == 0) throw std::invalid_argument("frechet: empty polyline");
  if (point_dist(p, 0, q, 0) > eps || point_dist(p, n - 1, q, m - 1) > eps) return false;
  if (n == 1 || m == 1) {
    // A single point against a polyline: the max norm is convex along each
    // segment, so checking vertices suffices.
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < m; ++j)
        if (point_dist(p, i, q, j) > eps) return false;
    return true;
  }
  // left[j]: reachable part of the left edge of cell (i, j), i.e. the point
  // p_i against segment q_j q_{j+1}. Initialised for i = 0 along s = 0.
  std::vector<Interval> left(m - 1);
  bool open = true;
  for (std::size_t j = 0; j + 1 < m; ++j) {
    Interval iv = free_interval(p.t[0], p.x[0], q.t[j], q.x[j], q.t[j + 1], q.x[j + 1], eps);
    if (!open || iv.empty() || iv.lo > 0.0) {
      open = false;
      left[j] = Interval{};
      continue;
    }
    left[j] = iv;
    open = iv.hi >= 1.0;
  }
  bool bottom_open = true;  // continuity of the reachable strip along t = 0
  std::vector<Interval> right(m - 1);
  Interval top_last{};
  for (std::size_t i = 0; i + 1 < n; ++i) {
    // bottom edge of cell (i, 0): q_0 against segment p_i p_{i+1}
    Interval bottom;
    {
      Interval iv = free_interval(q.t[0], q.x[0], p.t[i], p.x[i], p.t[i + 1], p.x[i + 1], eps);
      if (bottom_open && !iv.empty() && iv.lo <= 0.0) {
        bottom = iv;
        bottom_open = iv.hi >= 1.0;
      } else {
        bottom = Interval{};
        bottom_open = false;
      }
    }
    for (std::size_t j = 0; j + 1 < m; ++j) {
      const Interval rfree = free_interval(p.t[i + 1], p.x[i + 1], q.t[j], q.x[j], q.t[j + 1], q.x[j + 1], eps);
      const Interval tfree = free_interval(q.t[j + 1], q.x[j + 1], p.t[i], p.x[i], p.t[i + 1], p.x[i + 1], eps);
      const Interval& l = left[j];
      Interval r{};
      Interval t{};
      if (!bottom.empty()) {
        r = rfree;
      } else if (!l.empty()) {
        r = Interval{std::max(rfree.lo, l.lo), rfree.hi};
      }
      if (!l.empty()) {
        t = tfree;
      } else if (!bottom.empty()) {
        t = Interval{std::max(tfree.lo, bottom.lo), tfree.hi};
      }
      right[j] = r;
      bottom = t;
    }
    top_last = bottom;
    std::swap(left, right);
  }
  const Interval& r_last = left[m - 2];
  return (!r_last.empty() && r_last.hi >= 1.0) || (!top_last.empty() && top_last.hi >= 1.0);
}

M1Result frechet_max_norm(const ParamGraph& p, const ParamGraph& q, double tol) {
  M1Result res;
  double lo = std::max(point_dist(p, 0, q, 0), point_dist(p, p.size() - 1, q, q.size() - 1));
  if (frechet_at_most(p, q, lo)) {
    res.distance = lo;
    return res;
  }
  double tmin = kInf, tmax = -kInf, xmin = kInf, xmax = -kInf;
  for (const ParamGraph* g : {&p, &q}) {
    for (std::size_t k = 0; k < g->size(); ++k) {
      tmin = std::min(tmin, g->t[k]);
      tmax = std::max(tmax, g->t[k]);
      xmin = std::min(xmin, g->x[k]);
      xmax = std::max(xmax, g->x[k]);
    }
  }
  double hi = std::max(tmax - tmin, xmax - xmin);
  while (hi - lo > tol && res.iterations < 200) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (frechet_at_most(p, q, mid)) {
      hi = mid;
    } else {
      lo = mid;
    }
    ++res.iterations;
  }
  res.distance = hi;
  res.resolution = hi - lo;
  return res;
}

M1Result d_M1(const StepPath& f, const StepPath& g, double T, double tol) {
  require_horizon(f, T, "d_M1");
  require_horizon(g, T, "d_M1");
  return frechet_max_norm(completed_graph(f, T), completed_graph(g, T), tol);
}

M1Result d_M1(const GridPath& f, const StepPath& g, double T, double tol) {
  require_horizon(g, T, "d_M1");
  return frechet_max_norm(completed_graph(f, T), completed_graph(g, T), tol);
}

M1Result d_M1(const GridPath& f, const GridPath& g, double T, double tol) {
  return frechet_max_norm(completed_graph(f, T), completed_graph(g, T), tol);
}

namespace {

// k points spaced uniformly in L1 arclength along the polyline.
ParamGraph resample(const ParamGraph& g, std::size_t k) {
  std::vector<double> cum(g.size(), 0.0);
  for (std::size_t i = 1; i < g.size(); ++i)
    cum[i] = cum[i - 1] + std::fabs(g.t[i] - g.t[i - 1]) + std::fabs(g.x[i] - g.x[i - 1]);
  ParamGraph out;
  out.t.reserve(k);
  out.x.reserve(k);
  const double total = cum.back();
  std::size_t seg = 0;
  for (std::size_t s = 0; s < k; ++s) {
    const double target = k == 1 ? 0.0 : total * static_cast<double>(s) / static_cast<double>(k - 1);
    while (seg + 2 < g.size() && cum[seg + 1] < target) ++seg;
    if (g.size() == 1 || total == 0.0) {
      out.t.push_back(g.t[0]);
      out.x.push_back(g.x[0]);
      continue;
    }
    const double len = cum[seg + 1] - cum[seg];
    const double w = len > 0.0 ? std::clamp((target - cum[seg]) / len, 0.0, 1.0) : 0.0;
    out.t.push_back(g.t[seg] + w * (g.t[seg + 1] - g.t[seg]));
    out.x.push_back(g.x[seg] + w * (g.x[seg + 1] - g.x[seg]));
  }
  return out;
}

double discrete_frechet(const ParamGraph& p, const ParamGraph& q) {
  const std::size_t n = p.size();
  const std::size_t m = q.size();
  std::vector<double> prev(m), cur(m);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      const double d = point_dist(p, i, q, j);
      double best;
      if (i == 0 && j == 0) {
        best = d;
      } else if (i == 0) {
        best = std::max(cur[j - 1], d);
      } else if (j == 0) {
        best = std::max(prev[j], d);
      } else {
        best = std::max(std::min({prev[j], cur[j - 1], prev[j - 1]}), d);
      }
      cur[j] = best;
    }
    std::swap(prev, cur);
  }
  return prev[m - 1];
}

}  // namespace

DiscreteM1Result d_M1_discrete(const StepPath& f, const StepPath& g, double T, double rel_change,
                               std::size_t max_samples) {
  require_horizon(f, T, "d_M1_discrete");
  require_horizon(g, T, "d_M1_discrete");
  const ParamGraph gf = completed_graph(f, T);
  const ParamGraph gg = completed_graph(g, T);
  std::size_t k = 16 * (std::max(f.jump_count(), g.jump_count()) + 1);
  DiscreteM1Result res;
  double last = discrete_frechet(resample(gf, k), resample(gg, k));
  res.distance = last;
  res.samples = k;
  res.change = kInf;
  while (2 * k <= max_samples) {
    k *= 2;
    const double next = discrete_frechet(resample(gf, k), resample(gg, k));
    const double change = std::fabs(next - last) / std::max(std::fabs(next), 1e-300);
    res.distance = next;
    res.samples = k;
    res.change = change;
    if (change < rel_change) break;
    last = next;
  }
  return res;
}

// ---------------------------------------------------------------- inverse / compose

StepPath right_cont_inverse(const StepPath& f, double domain_end) {
  // levels v_k on [s_k, s_{k+1}) with s_0 = 0
  std::vector<double> s{0.0};
  std::vector<double> v{f.initial_value};
  for (std::size_t k = 0; k < f.jump_count(); ++k) {
    if (f.values[k] < v.back()) throw std::invalid_argument("right_cont_inverse: path must be non-decreasing");
    s.push_back(f.jump_times[k]);
    v.push_back(f.values[k]);
  }
  const std::size_t p = v.size();
  auto next_above = [&](std::size_t from, double level) {
    std::size_t k = from;
    while (k < p && !(v[k] > level)) ++k;
    return k;
  };
  std::size_t k = next_above(0, 0.0);
  StepPath inv(k < p ? s[k] : kPathSentinel, domain_end);
  while (k < p) {
    const double t_jump = v[k];
    if (t_jump > domain_end) break;
    const std::size_t nk = next_above(k, t_jump);
    inv.push_jump(t_jump, nk < p ? s[nk] : kPathSentinel);
    k = nk;
  }
  inv.horizon = domain_end;
  return inv;
}

StepPath invert(const StepPath& f, double domain_end) { return right_cont_inverse(f, domain_end); }

double first_exceed_time(const GridPath& f, double level) {
  const auto& y = f.values;
  const auto it = std::upper_bound(y.begin(), y.end(), level);
  if (it == y.end()) return kInf;
  const auto k = static_cast<std::size_t>(it - y.begin());
  if (k == 0) return 0.0;
  const double w = (level - y[k - 1]) / (y[k] - y[k - 1]);
  return f.dt * (static_cast<double>(k - 1) + std::clamp(w, 0.0, 1.0));
}

namespace {

template <class Outer>
StepPath compose_impl(const Outer& outer, double outer_end, const StepPath& inner) {
  const double slack = 1e-12 * std::max(1.0, outer_end);
  auto eval = [&](double s) {
    if (!(s >= -slack && s <= outer_end + slack)) throw std::domain_error("compose: inner value outside outer domain");
    return outer.at(std::clamp(s, 0.0, outer_end));
  };
  StepPath out(eval(inner.initial_value), inner.horizon);
  for (std::size_t k = 0; k < inner.jump_count(); ++k) out.push_jump(inner.jump_times[k], eval(inner.values[k]));
  out.horizon = inner.horizon;
  return out;
}

}  // namespace

StepPath compose(const GridPath& outer, const StepPath& inner) { return compose_impl(outer, outer.horizon(), inner); }

StepPath compose(const StepPath& outer, const StepPath& inner) { return compose_impl(outer, outer.horizon, inner); }

SampledPath to_step_path(const GridPath& f, double h) {
  if (!(h > 0.0)) throw std::invalid_argument("to_step_path: cell width must be positive");
  SampledPath out;
  const double T = f.horizon();
  out.path = StepPath(f.at(0.0), T);
  double err = 0.0;
  const auto cells = static_cast<std::size_t>(std::ceil(T / h - 1e-12));
  for (std::size_t c = 0; c < cells; ++c) {
    const double t0 = h * static_cast<double>(c);
    const double t1 = std::min(T, t0 + h);
    const double v0 = f.at(t0);
    if (c > 0) out.path.push_jump(t0, v0);
    err = std::max(err, std::fabs(f.at(t1) - v0));
    // interior grid vertices of the cell
    auto k = static_cast<std::size_t>(std::floor(t0 / f.dt)) + 1;
    for (; k < f.values.size() && f.dt * static_cast<double>(k) < t1; ++k) err = std::max(err, std::fabs(f.values[k] - v0));
  }
  out.path.horizon = T;
  out.error_bound = err;
  return out;
}

// ---------------------------------------------------------------- CSV

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

void write_csv(std::ostream& out, const StepPath& f) {
  out << "t,value\n";
  out << "0," << format_double(f.initial_value) << '\n';
  for (std::size_t k = 0; k < f.jump_count(); ++k)
    out << format_double(f.jump_times[k]) << ',' << format_double(f.values[k]) << '\n';
  out << format_double(f.horizon) << ',' << format_double(f.final_value()) << '\n';
}

namespace {

double parse_double(std::string_view s, std::size_t line) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size())
    throw std::invalid_argument("read_csv: bad number on line " + std::to_string(line));
  return v;
}

}  // namespace

StepPath read_csv(std::istream& in) {
  std::string line;
  std::size_t lineno = 0;
  bool have_first = false;
  StepPath f;
  double last_t = 0.0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line == "\r") continue;
    if (!have_first && (line[0] == 't' || line[0] == 'T')) continue;  // header
    const auto comma = line.find(',');
    if (comma == std::string::npos) throw std::invalid_argument("read_csv: expected 't,value' on line " + std::to_string(lineno));
    const std::string_view sv(line);
    const double t = parse_double(sv.substr(0, comma), lineno);
    const double v = parse_double(sv.substr(comma + 1), lineno);
    if (!have_first) {
      if (t != 0.0) throw std::invalid_argument("read_csv: first row must be at t = 0");
      f.initial_value = v;
      have_first = true;
      continue;
    }
    if (t < last_t) throw std::invalid_argument("read_csv: times must be non-decreasing");
    if (!(t == last_t && v == f.final_value())) f.push_jump(t, v);
    last_t = t;
  }
  if (!have_first) throw std::invalid_argument("read_csv: no data rows");
  f.horizon = last_t;
  f.validate();
  return f;
}

void write_csv_file(const std::string& path, const StepPath& f) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  write_csv(out, f);
}

StepPath read_csv_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return read_csv(in);
}

// ---------------------------------------------------------------- golden families

StepPath figure_example1(int n, double T) { return StepPath::indicator_from(1.0 - 1.0 / n, T); }

StepPath figure_example2(int n, int steps, double T) {
  const double a = 1.0 - 1.0 / n;
  const double c = 0.5 * (a + 1.0);
  StepPath f(0.0, T);
  add_ramp(f, a, c, 0.5, 1.0, steps);
  f.push_jump(c, 1.0);
  f.horizon = T;
  return f;
}

StepPath figure_example3(int n, int steps, double T) {
  const double a = 1.0 - 1.0 / n;
  const double b = 2.0 + 1.0 / n;
  const double c = 0.5 * (a + 1.0);
  StepPath f(0.0, T);
  add_ramp(f, a, c, 0.5, 1.5, steps);
  add_ramp(f, c, 1.0, 1.5, 1.0, steps);
  f.push_jump(1.0, 1.0);
  add_ramp(f, 2.0, b, 1.0, 0.0, steps);
  f.push_jump(b, 1.0);
  f.horizon = T;
  return f;
}

}  // namespace slowtrap
