#include "slowtrap/lattice.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <stdexcept>

namespace slowtrap {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

[[noreturn]] void walk_too_short() { throw std::runtime_error("walk too short"); }

}  // namespace

// ---------------------------------------------------------------- LogSum

void LogSum::add_log(double log_term) noexcept {
  if (log_term == -kInf) return;
  double term;
  if (log_term > max_) {
    if (max_ == -kInf) {
      max_ = log_term;
      sum_ = 1.0;
      comp_ = 0.0;
      return;
    }
    const double scale = std::exp(max_ - log_term);
    sum_ *= scale;
    comp_ *= scale;
    max_ = log_term;
    term = 1.0;
  } else {
    term = std::exp(log_term - max_);
  }
  const double y = term - comp_;
  const double t = sum_ + y;
  comp_ = (t - sum_) - y;
  sum_ = t;
}

double LogSum::log_value() const noexcept { return empty() ? -kInf : max_ + std::log(sum_); }

double log_add(double a, double b) noexcept {
  const double hi = std::max(a, b);
  if (hi == -kInf) return -kInf;
  return hi + std::log1p(std::exp(std::min(a, b) - hi));
}

// ---------------------------------------------------------------- walks

void extend_srw(LatticeWalk& walk, std::size_t steps, Rng& rng) {
  if (walk.sites.empty()) walk.sites.push_back(0);
  walk.sites.reserve(walk.sites.size() + steps);
  std::int32_t x = walk.sites.back();
  std::uint64_t bits = 0;
  int left = 0;
  for (std::size_t k = 0; k < steps; ++k) {
    if (left == 0) {
      bits = rng();
      left = 64;
    }
    x += (bits & 1U) ? 1 : -1;
    bits >>= 1U;
    --left;
    walk.sites.push_back(x);
  }
}

LatticeWalk simulate_srw(std::size_t length, Rng& rng) {
  LatticeWalk w;
  w.sites.push_back(0);
  extend_srw(w, length, rng);
  return w;
}

// ---------------------------------------------------------------- depths

DepthField::DepthField(const TrapLandscape& landscape)
    : gen_([land = landscape](std::int64_t x) { return land.log_trap_at(x); }) {}

DepthField DepthField::constant(double tau) {
  if (!(tau > 0.0)) throw std::invalid_argument("DepthField::constant: depth must be positive");
  const double l = std::log(tau);
  return DepthField([l](std::int64_t) { return l; });
}

DepthField DepthField::explicit_sites(std::int64_t first_site, const std::vector<double>& taus) {
  std::vector<double> logs(taus.size());
  for (std::size_t k = 0; k < taus.size(); ++k) {
    if (!(taus[k] > 0.0)) throw std::invalid_argument("DepthField::explicit_sites: depths must be positive");
    logs[k] = std::log(taus[k]);
  }
  return DepthField([first_site, logs](std::int64_t x) {
    const std::int64_t k = x - first_site;
    if (k < 0 || k >= static_cast<std::int64_t>(logs.size())) throw std::out_of_range("DepthField: site without depth");
    return logs[static_cast<std::size_t>(k)];
  });
}

void DepthField::grow_to(std::int64_t site) {
  if (cache_.empty()) {
    lo_ = site - 256;
    cache_.assign(513, kNaN);
    return;
  }
  const std::int64_t hi = lo_ + static_cast<std::int64_t>(cache_.size());
  const auto span = static_cast<std::int64_t>(cache_.size());
  if (site < lo_) {
    const std::int64_t new_lo = std::min(site, lo_ - span);
    cache_.insert(cache_.begin(), static_cast<std::size_t>(lo_ - new_lo), kNaN);
    lo_ = new_lo;
  } else if (site >= hi) {
    const std::int64_t new_hi = std::max(site + 1, hi + span);
    cache_.resize(static_cast<std::size_t>(new_hi - lo_), kNaN);
  }
}

double DepthField::log_depth(std::int64_t site) {
  if (cache_.empty() || site < lo_ || site >= lo_ + static_cast<std::int64_t>(cache_.size())) grow_to(site);
  double& slot = cache_[static_cast<std::size_t>(site - lo_)];
  if (std::isnan(slot)) slot = gen_(site);
  return slot;
}

double DepthField::depth(std::int64_t site) {
  const double l = log_depth(site);
  return l > 709.0 ? kInf : std::exp(l);
}

// ---------------------------------------------------------------- clock

namespace {

struct ClockAcc {
  LogSum log;
  double sum = 0.0;
  double comp = 0.0;

  void add(double log_depth, double xi) {
    log.add_log(log_depth + std::log(xi));
    const double term = log_depth > 709.0 ? kInf : std::exp(log_depth) * xi;
    if (!std::isfinite(sum) || !std::isfinite(term)) {
      sum = kInf;
      return;
    }
    const double y = term - comp;
    const double t = sum + y;
    comp = (t - sum) - y;
    sum = t;
  }
};

void append_clock(ClockRecord& clock, DepthField& depths, const LatticeWalk& walk, std::size_t from, ClockAcc& acc) {
  for (std::size_t k = from; k < walk.sites.size(); ++k) {
    acc.add(depths.log_depth(walk.sites[k]), clock.xi[k]);
    clock.log_times.push_back(acc.log.log_value());
    clock.linear.push_back(acc.sum);
  }
}

ClockAcc rebuild(const ClockRecord& clock, DepthField& depths, const LatticeWalk& walk) {
  ClockAcc acc;
  for (std::size_t k = 0; k < clock.log_times.size(); ++k) acc.add(depths.log_depth(walk.sites[k]), clock.xi[k]);
  return acc;
}

}  // namespace

ClockRecord clock_from_draws(DepthField& depths, const LatticeWalk& walk, const std::vector<double>& xi) {
  if (xi.size() < walk.sites.size()) throw std::invalid_argument("clock_from_draws: one draw per step required");
  ClockRecord c;
  c.xi.assign(xi.begin(), xi.begin() + static_cast<std::ptrdiff_t>(walk.sites.size()));
  c.log_times.reserve(walk.sites.size());
  c.linear.reserve(walk.sites.size());
  ClockAcc acc;
  append_clock(c, depths, walk, 0, acc);
  return c;
}

ClockRecord clock_process(DepthField& depths, const LatticeWalk& walk, Rng& rng) {
  std::vector<double> xi(walk.sites.size());
  for (double& x : xi) x = unit_exponential(rng);
  return clock_from_draws(depths, walk, xi);
}

void extend_clock(ClockRecord& clock, DepthField& depths, const LatticeWalk& walk, Rng& rng) {
  const std::size_t from = clock.log_times.size();
  if (from >= walk.sites.size()) return;
  ClockAcc acc = rebuild(clock, depths, walk);
  for (std::size_t k = from; k < walk.sites.size(); ++k) clock.xi.push_back(unit_exponential(rng));
  append_clock(clock, depths, walk, from, acc);
}

std::size_t clock_inverse_index(const ClockRecord& clock, double log_t) {
  const auto it = std::upper_bound(clock.log_times.begin(), clock.log_times.end(), log_t);
  if (it == clock.log_times.end()) walk_too_short();
  return static_cast<std::size_t>(it - clock.log_times.begin());
}

std::int32_t btm_position_at_log_time(const LatticeWalk& walk, const ClockRecord& clock, double log_t) {
  return walk.sites[clock_inverse_index(clock, log_t)];
}

StepPath btm_path(const LatticeWalk& walk, const ClockRecord& clock, double horizon) {
  if (clock.log_times.empty() || !(clock.log_times.back() > std::log(horizon))) walk_too_short();
  const auto& A = clock.linear;
  StepPath path(walk.sites[0], horizon);
  for (std::size_t k = 0; k + 1 < walk.sites.size(); ++k) {
    if (!std::isfinite(A[k])) throw std::overflow_error("btm_path: clock value not representable");
    if (A[k] > horizon) break;
    path.push_jump(A[k], walk.sites[k + 1]);
  }
  path.horizon = horizon;
  return path;
}

StepPath walk_as_path(const LatticeWalk& walk) {
  StepPath p(walk.sites.at(0), static_cast<double>(walk.length()));
  for (std::size_t k = 1; k < walk.sites.size(); ++k) p.push_jump(static_cast<double>(k), walk.sites[k]);
  p.horizon = static_cast<double>(walk.length());
  return p;
}

StepPath clock_as_path(const ClockRecord& clock) {
  const auto& A = clock.linear;
  StepPath p(A.at(0), static_cast<double>(A.size() - 1));
  for (std::size_t k = 1; k < A.size(); ++k) p.push_jump(static_cast<double>(k), A[k]);
  p.horizon = static_cast<double>(A.size() - 1);
  return p;
}

// ---------------------------------------------------------------- transparent traps

double transparent_log_holding(double log_tau, double beta, Rng& rng) {
  if (beta < 0.0) throw std::invalid_argument("transparent_holding: beta must be >= 0");
  const double u = uniform_open(rng);
  const double xi = unit_exponential(rng);
  const bool trapped = std::log(u) <= -beta * std::max(log_tau, 0.0);
  return trapped ? log_tau + std::log(xi) : std::log(xi);
}

double transparent_holding(double tau, double beta, Rng& rng) {
  return std::exp(transparent_log_holding(std::log(tau), beta, rng));
}

double transparent_mean_given_depth(double tau, double beta) {
  if (tau < 1.0) return tau;
  const double p = std::pow(tau, -beta);
  return p * tau + (1.0 - p);
}

double mu_beta(const TailFamily& family, double beta) {
  if (beta < 1.0) throw std::domain_error("mean may be infinite");
  auto integrand = [&](double psi) {
    const double lt = family.log_inv_L(psi);
    double h;
    if (lt < 0.0) {
      h = std::exp(lt);
    } else {
      // beta = 1 written out so that an infinite log depth gives 2, not NaN
      const double kept = beta == 1.0 ? 1.0 : std::exp((1.0 - beta) * lt);
      h = -std::expm1(-beta * lt) + kept;
    }
    return std::exp(-psi) * h;
  };
  double err = 0.0;
  const double v = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(integrand, 0.0, kInf, 15, 1e-12, &err);
  return v;
}

WalkStepper::WalkStepper(DepthField& depths, Rng& rng, bool transparent, double beta)
    : depths_(depths), rng_(rng), transparent_(transparent), beta_(beta) {
  deepest_log_ = depths_.log_depth(0);
  hold();
}

void WalkStepper::hold() {
  const double lt = depths_.log_depth(site_);
  const double lh = transparent_ ? transparent_log_holding(lt, beta_, rng_) : lt + std::log(unit_exponential(rng_));
  log_clock_.add_log(lh);
}

void WalkStepper::step() {
  if (bits_left_ == 0) {
    bits_ = rng_();
    bits_left_ = 64;
  }
  site_ += (bits_ & 1U) ? 1 : -1;
  bits_ >>= 1U;
  --bits_left_;
  ++steps_;
  if (site_ > range_max_ || site_ < range_min_) {
    range_max_ = std::max(range_max_, site_);
    range_min_ = std::min(range_min_, site_);
    const double l = depths_.log_depth(site_);
    if (l > deepest_log_) {
      deepest_log_ = l;
      deepest_site_ = site_;
    }
  }
}

std::int32_t WalkStepper::advance_one() {
  step();
  hold();
  return site_;
}

std::int32_t WalkStepper::advance_to(double log_t, std::size_t max_steps) {
  while (!(log_clock_.log_value() > log_t)) {
    if (steps_ >= max_steps) walk_too_short();
    step();
    hold();
  }
  return site_;
}

StepPath transparent_btm(const TrapLandscape& landscape, double beta, double horizon, Rng& rng, std::size_t max_steps) {
  DepthField depths(landscape);
  return transparent_btm(depths, beta, horizon, rng, max_steps);
}

StepPath transparent_btm(DepthField& depths, double beta, double horizon, Rng& rng, std::size_t max_steps) {
  if (beta < 0.0) throw std::invalid_argument("transparent_btm: beta must be >= 0");
  WalkStepper w(depths, rng, true, beta);
  StepPath path(0.0, horizon);
  const double lh = std::log(horizon);
  while (!(w.log_clock() > lh)) {
    if (w.steps() >= max_steps) walk_too_short();
    const double t = std::exp(w.log_clock());
    path.push_jump(t, w.advance_one());
  }
  path.horizon = horizon;
  return path;
}

// ---------------------------------------------------------------- explored processes

std::vector<double> explored_extremal_log_path(DepthField& depths, const LatticeWalk& walk) {
  std::vector<double> out(walk.sites.size());
  std::int32_t lo = walk.sites.at(0), hi = walk.sites[0];
  double m = depths.log_depth(lo);
  for (std::size_t k = 0; k < walk.sites.size(); ++k) {
    const std::int32_t x = walk.sites[k];
    if (x > hi || x < lo) {
      // nearest-neighbour steps extend the range by exactly one site
      m = std::max(m, depths.log_depth(x));
      hi = std::max(hi, x);
      lo = std::min(lo, x);
    }
    out[k] = m;
  }
  return out;
}

double explored_extremal_log(DepthField& depths, const LatticeWalk& walk, std::size_t n) {
  if (n > walk.length()) throw std::out_of_range("explored_extremal: n beyond walk length");
  std::int32_t lo = walk.sites[0], hi = walk.sites[0];
  for (std::size_t k = 0; k <= n; ++k) {
    lo = std::min(lo, walk.sites[k]);
    hi = std::max(hi, walk.sites[k]);
  }
  double m = -kInf;
  for (std::int64_t x = lo; x <= hi; ++x) m = std::max(m, depths.log_depth(x));
  return m;
}

double explored_extremal(DepthField& depths, const LatticeWalk& walk, std::size_t n) {
  return std::exp(explored_extremal_log(depths, walk, n));
}

std::vector<double> explored_sum_log_path(DepthField& depths, const LatticeWalk& walk) {
  std::vector<double> out(walk.sites.size());
  std::int32_t lo = walk.sites.at(0), hi = walk.sites[0];
  LogSum acc;
  acc.add_log(depths.log_depth(lo));
  for (std::size_t k = 0; k < walk.sites.size(); ++k) {
    const std::int32_t x = walk.sites[k];
    if (x > hi || x < lo) {
      acc.add_log(depths.log_depth(x));
      hi = std::max(hi, x);
      lo = std::min(lo, x);
    }
    out[k] = acc.log_value();
  }
  return out;
}

double explored_sum_log(DepthField& depths, const LatticeWalk& walk, std::size_t n) {
  if (n > walk.length()) throw std::out_of_range("explored_sum: n beyond walk length");
  std::int32_t lo = walk.sites[0], hi = walk.sites[0];
  for (std::size_t k = 0; k <= n; ++k) {
    lo = std::min(lo, walk.sites[k]);
    hi = std::max(hi, walk.sites[k]);
  }
  LogSum acc;
  for (std::int64_t x = lo; x <= hi; ++x) acc.add_log(depths.log_depth(x));
  return acc.log_value();
}

double explored_sum(DepthField& depths, const LatticeWalk& walk, std::size_t n) {
  return std::exp(explored_sum_log(depths, walk, n));
}

// ---------------------------------------------------------------- local times

double local_time(const LatticeWalk& walk, const std::vector<double>& xi, std::size_t n, std::int64_t x) {
  if (n > walk.length() || xi.size() <= n) throw std::out_of_range("local_time: n beyond walk length");
  double total = 0.0;
  for (std::size_t i = 0; i <= n; ++i)
    if (walk.sites[i] == x) total += xi[i];
  return total;
}

namespace {

std::vector<double> site_totals(const LatticeWalk& walk, const std::vector<double>& xi, std::size_t n,
                                std::int32_t& lo) {
  if (n > walk.length() || xi.size() <= n) throw std::out_of_range("local time: n beyond walk length");
  lo = *std::min_element(walk.sites.begin(), walk.sites.begin() + static_cast<std::ptrdiff_t>(n + 1));
  const std::int32_t hi = *std::max_element(walk.sites.begin(), walk.sites.begin() + static_cast<std::ptrdiff_t>(n + 1));
  std::vector<double> nu(static_cast<std::size_t>(hi - lo + 1), 0.0);
  for (std::size_t i = 0; i <= n; ++i) nu[static_cast<std::size_t>(walk.sites[i] - lo)] += xi[i];
  return nu;
}

}  // namespace

double nu_max(const LatticeWalk& walk, const std::vector<double>& xi, std::size_t n) {
  std::int32_t lo = 0;
  const auto nu = site_totals(walk, xi, n, lo);
  return *std::max_element(nu.begin(), nu.end());
}

double nu_min(const LatticeWalk& walk, const std::vector<double>& xi, std::size_t n) {
  // every site between the extremes of a nearest-neighbour walk is visited
  std::int32_t lo = 0;
  const auto nu = site_totals(walk, xi, n, lo);
  return *std::min_element(nu.begin(), nu.end());
}

LocalTimeExtremes local_time_extremes(const LatticeWalk& walk, const std::vector<double>& xi) {
  const std::size_t N = walk.sites.size();
  if (xi.size() < N) throw std::invalid_argument("local_time_extremes: one draw per step required");
  const auto [mn, mx] = std::minmax_element(walk.sites.begin(), walk.sites.end());
  const std::int32_t lo = *mn;
  std::vector<double> nu(static_cast<std::size_t>(*mx - lo + 1), 0.0);
  std::multiset<double> live;
  LocalTimeExtremes out;
  out.nu_max.resize(N);
  out.nu_min.resize(N);
  double running_max = 0.0;
  for (std::size_t k = 0; k < N; ++k) {
    double& slot = nu[static_cast<std::size_t>(walk.sites[k] - lo)];
    if (slot > 0.0) live.erase(live.find(slot));
    slot += xi[k];
    live.insert(slot);
    running_max = std::max(running_max, slot);
    out.nu_max[k] = running_max;
    out.nu_min[k] = *live.begin();
  }
  return out;
}

// ---------------------------------------------------------------- records

RecordSet record_set(const std::vector<double>& values) {
  if (values.empty()) throw std::invalid_argument("record_set: empty sequence");
  RecordSet r;
  double m = -kInf;
  for (std::size_t k = 0; k < values.size(); ++k) {
    if (values[k] > m) {
      r.indices.push_back(k);
      m = values[k];
    }
  }
  return r;
}

double sep(const std::vector<std::size_t>& idx) {
  if (idx.size() < 2) return kInf;
  std::size_t best = idx[1] - idx[0];
  for (std::size_t k = 2; k < idx.size(); ++k) best = std::min(best, idx[k] - idx[k - 1]);
  return static_cast<double>(best);
}

double sep(const RecordSet& set) { return sep(set.indices); }

std::vector<RecordDraw> sample_exponential_records(std::size_t last_index, Rng& rng) {
  std::vector<RecordDraw> out;
  std::size_t idx = 0;
  double level = unit_exponential(rng);
  out.push_back({idx, level});
  for (;;) {
    const double p = std::exp(-level);
    // gap - 1 ~ failures before the first success, P(success) = p
    const double failures = std::floor(std::log(uniform_open(rng)) / std::log1p(-p));
    if (!(failures < static_cast<double>(last_index - idx))) break;
    idx += static_cast<std::size_t>(failures) + 1;
    level += unit_exponential(rng);
    out.push_back({idx, level});
  }
  return out;
}

std::int64_t diffusion_distance(const LatticeWalk& walk, std::size_t n) {
  if (n > walk.length()) throw std::out_of_range("diffusion_distance: n beyond walk length");
  const auto first = walk.sites.begin();
  const auto last = first + static_cast<std::ptrdiff_t>(n + 1);
  const auto [mn, mx] = std::minmax_element(first, last);
  return static_cast<std::int64_t>(*mx) - *mn;
}

}  // namespace slowtrap
