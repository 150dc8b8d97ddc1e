#pragma once

// Discrete objects: simple random walk, the clock A, the trap model X = S o I^S,
// explored extremal and sum processes, local times, record sets, and the
// beta-transparent walk.
//
// Depths of slowly varying families do not fit in a double, so clocks and
// depths are carried as logarithms throughout. Linear-valued helpers exist
// for tests and for families where the numbers stay finite.

#include <cstdint>
#include <functional>
#include <limits>
#include <set>
#include <vector>

#include "slowtrap/cadlag.hpp"
#include "slowtrap/landscape.hpp"
#include "slowtrap/rng.hpp"

namespace slowtrap {

/// Compensated log-sum-exp accumulator: log of a running sum of positive
/// terms given by their logs. Stores the largest log seen and a Kahan-summed
/// mantissa relative to it, so one huge term plus many tiny ones keeps full
/// precision.
class LogSum {
 public:
  void add_log(double log_term) noexcept;
  double log_value() const noexcept;
  bool empty() const noexcept { return max_ == -std::numeric_limits<double>::infinity(); }

 private:
  double max_ = -std::numeric_limits<double>::infinity();
  double sum_ = 0.0;
  double comp_ = 0.0;
};

/// log(exp(a) + exp(b)).
double log_add(double a, double b) noexcept;

struct LatticeWalk {
  std::vector<std::int32_t> sites;  ///< S_0 = 0, S_1, ...
  std::size_t length() const noexcept { return sites.empty() ? 0 : sites.size() - 1; }
};

/// i.i.d. +-1 steps with probability 1/2 each.
LatticeWalk simulate_srw(std::size_t length, Rng& rng);
/// Appends `steps` further steps to an existing walk.
void extend_srw(LatticeWalk& walk, std::size_t steps, Rng& rng);

/// Lazily realised log-depth lookup over a contiguous window of sites.
class DepthField {
 public:
  explicit DepthField(const TrapLandscape& landscape);
  /// tau_x = tau for every site.
  static DepthField constant(double tau);
  /// Explicit depths for sites first_site, first_site + 1, ...; other sites
  /// throw std::out_of_range.
  static DepthField explicit_sites(std::int64_t first_site, const std::vector<double>& taus);

  double log_depth(std::int64_t site);
  double depth(std::int64_t site);

 private:
  explicit DepthField(std::function<double(std::int64_t)> gen) : gen_(std::move(gen)) {}
  void grow_to(std::int64_t site);
  std::function<double(std::int64_t)> gen_;
  std::int64_t lo_ = 0;  // cache covers [lo_, lo_ + cache_.size())
  std::vector<double> cache_;
};

/// Clock A_n = sum_{i <= n} xi_i tau_{S_i}, one fresh exponential per step.
struct ClockRecord {
  std::vector<double> log_times;  ///< log A_0 <= log A_1 <= ...
  std::vector<double> xi;         ///< holding draws
  /// A_n summed directly in linear scale (Kahan), +inf once it overflows.
  /// Exact for small integer clocks, which log-domain round trips are not.
  std::vector<double> linear;
  std::vector<double> times() const { return linear; }
};

ClockRecord clock_process(DepthField& depths, const LatticeWalk& walk, Rng& rng);
/// Clock from given holding draws (deterministic).
ClockRecord clock_from_draws(DepthField& depths, const LatticeWalk& walk, const std::vector<double>& xi);
/// Appends clock entries for walk steps not yet covered, drawing new xi.
void extend_clock(ClockRecord& clock, DepthField& depths, const LatticeWalk& walk, Rng& rng);

/// t -> S_{I_t}, I_t = inf{n : A_n > t}, on [0, horizon]. Throws
/// std::runtime_error("walk too short") when A_length <= horizon and
/// std::overflow_error when a needed clock value is not representable.
StepPath btm_path(const LatticeWalk& walk, const ClockRecord& clock, double horizon);
/// S_{I_t} with t given by its logarithm.
std::int32_t btm_position_at_log_time(const LatticeWalk& walk, const ClockRecord& clock, double log_t);
/// Index I_t = inf{n : A_n > t}; throws "walk too short" if none.
std::size_t clock_inverse_index(const ClockRecord& clock, double log_t);

/// Walk as a step path in index time: S_k on [k, k + 1), horizon = length.
StepPath walk_as_path(const LatticeWalk& walk);
/// Clock as a step path in index time: A_k on [k, k + 1), horizon = length.
StepPath clock_as_path(const ClockRecord& clock);

/// Holding time of one visit in the transparent model, in log form:
/// log(tau xi) with probability min(tau^-beta, 1), otherwise log(xi).
double transparent_log_holding(double log_tau, double beta, Rng& rng);
double transparent_holding(double tau, double beta, Rng& rng);

/// Mean holding time given the depth, min(tau^-beta,1) tau + max(1 - tau^-beta, 0).
double transparent_mean_given_depth(double tau, double beta);
/// Annealed mean holding time by quadrature over the family's law. Throws
/// std::domain_error("mean may be infinite") for beta < 1.
double mu_beta(const TailFamily& family, double beta);

/// Steps a continuous-time walk on the fly, without storing the path.
/// With transparent = false the holding at each visit is xi tau (the trap
/// model); otherwise it follows transparent_log_holding.
class WalkStepper {
 public:
  WalkStepper(DepthField& depths, Rng& rng, bool transparent = false, double beta = 0.0);

  /// Advances until the clock exceeds exp(log_t) and returns the position
  /// there, i.e. S_{I_t}. Throws std::runtime_error("walk too short") if
  /// max_steps would be exceeded.
  std::int32_t advance_to(double log_t, std::size_t max_steps);
  /// One jump followed by the holding at the new site.
  std::int32_t advance_one();

  std::int32_t site() const noexcept { return site_; }
  std::size_t steps() const noexcept { return steps_; }
  double log_clock() const noexcept { return log_clock_.log_value(); }
  std::int32_t range_min() const noexcept { return range_min_; }
  std::int32_t range_max() const noexcept { return range_max_; }
  /// Deepest site in the explored range and its log depth.
  std::int32_t deepest_site() const noexcept { return deepest_site_; }
  double deepest_log_depth() const noexcept { return deepest_log_; }

 private:
  void hold();
  void step();
  DepthField& depths_;
  Rng& rng_;
  bool transparent_;
  double beta_;
  std::int32_t site_ = 0;
  std::size_t steps_ = 0;
  LogSum log_clock_;
  std::int32_t range_min_ = 0;
  std::int32_t range_max_ = 0;
  std::int32_t deepest_site_ = 0;
  double deepest_log_ = 0.0;
  std::uint64_t bits_ = 0;
  int bits_left_ = 0;
};

/// Transparent walk on [0, horizon] as a step path.
StepPath transparent_btm(const TrapLandscape& landscape, double beta, double horizon, Rng& rng,
                         std::size_t max_steps = 100'000'000);
StepPath transparent_btm(DepthField& depths, double beta, double horizon, Rng& rng,
                         std::size_t max_steps = 100'000'000);

/// log M^X_n: largest log depth over the range visited by step n.
double explored_extremal_log(DepthField& depths, const LatticeWalk& walk, std::size_t n);
double explored_extremal(DepthField& depths, const LatticeWalk& walk, std::size_t n);
/// Path version, entry n holds log M^X_n.
std::vector<double> explored_extremal_log_path(DepthField& depths, const LatticeWalk& walk);
/// log Sigma^X_n: log of the summed depths over the visited range.
double explored_sum_log(DepthField& depths, const LatticeWalk& walk, std::size_t n);
double explored_sum(DepthField& depths, const LatticeWalk& walk, std::size_t n);
std::vector<double> explored_sum_log_path(DepthField& depths, const LatticeWalk& walk);

/// nu(n, x) = sum of xi_i over i <= n with S_i = x.
double local_time(const LatticeWalk& walk, const std::vector<double>& xi, std::size_t n, std::int64_t x);
/// Extremes of nu(n, .) over sites visited by step n.
double nu_max(const LatticeWalk& walk, const std::vector<double>& xi, std::size_t n);
double nu_min(const LatticeWalk& walk, const std::vector<double>& xi, std::size_t n);

/// Running local-time extremes along the whole walk.
struct LocalTimeExtremes {
  std::vector<double> nu_max;
  std::vector<double> nu_min;
};
LocalTimeExtremes local_time_extremes(const LatticeWalk& walk, const std::vector<double>& xi);

struct RecordSet {
  std::vector<std::size_t> indices;  ///< n with M_n != M_{n-1}, M_{-1} = -inf
};

RecordSet record_set(const std::vector<double>& values);
/// Minimal gap between distinct members; +inf for fewer than two.
double sep(const RecordSet& set);
double sep(const std::vector<std::size_t>& sorted_indices);

/// Records of an i.i.d. Exp(1) sequence psi_0, ..., psi_N, sampled by
/// jumping from record to record: given the current maximum m, the next
/// record is Geometric(e^-m) steps away and exceeds m by a fresh Exp(1).
struct RecordDraw {
  std::size_t index;
  double level;
};
std::vector<RecordDraw> sample_exponential_records(std::size_t last_index, Rng& rng);

/// max_{i <= n} S_i - min_{i <= n} S_i.
std::int64_t diffusion_distance(const LatticeWalk& walk, std::size_t n);

}  // namespace slowtrap
