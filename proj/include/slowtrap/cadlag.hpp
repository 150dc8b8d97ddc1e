#pragma once

// Cadlag step paths, piecewise-linear grid paths, and distances for the J1,
// M1 and L1 modes of convergence on [0, T].

#include <cstddef>
#include <iosfwd>
#include <limits>
#include <string>
#include <utility>
#include <vector>

namespace slowtrap {

inline constexpr double kPathSentinel = std::numeric_limits<double>::infinity();

/// Right-continuous piecewise-constant path on [0, horizon].
/// f(t) = initial_value for t < jump_times[0], values[k] on [jump_times[k], jump_times[k+1]).
/// Jump times are strictly increasing and lie in (0, horizon]. Values may be
/// +inf (the sentinel used by right-continuous inverses).
struct StepPath {
  double initial_value = 0.0;
  std::vector<double> jump_times;
  std::vector<double> values;
  double horizon = 0.0;

  StepPath() = default;
  StepPath(double initial, double T) : initial_value(initial), horizon(T) {}

  std::size_t jump_count() const noexcept { return jump_times.size(); }
  double final_value() const noexcept { return values.empty() ? initial_value : values.back(); }
  /// f(t), right-continuous. t is clamped to [0, horizon].
  double at(double t) const noexcept;
  /// f(t-); equals initial_value at 0.
  double left_limit(double t) const noexcept;
  /// Appends a jump at t to value v. A jump at t = 0 overwrites the initial
  /// value; a jump to the current value is dropped. t must not precede the
  /// last jump; a jump at the same time as the last one replaces its value.
  void push_jump(double t, double v);
  /// Throws std::invalid_argument when the representation invariants fail.
  void validate() const;
  /// Restriction to [0, T] for T <= horizon.
  StepPath truncated(double T) const;

  static StepPath constant(double v, double T) { return StepPath(v, T); }
  /// 1 on [s, inf), 0 before, on [0, T].
  static StepPath indicator_from(double s, double T);
};

/// Piecewise-linear path through (k dt, values[k]).
struct GridPath {
  double dt = 1.0;
  std::vector<double> values;

  double horizon() const noexcept { return values.empty() ? 0.0 : dt * static_cast<double>(values.size() - 1); }
  /// Linear interpolation; clamps to the end points outside the grid.
  double at(double t) const noexcept;
};

/// Polyline through the completed graph of a path, as (time, value) vertices.
struct ParamGraph {
  std::vector<double> t;
  std::vector<double> x;
  std::size_t size() const noexcept { return t.size(); }
};

ParamGraph completed_graph(const StepPath& f, double T);
ParamGraph completed_graph(const GridPath& f, double T);

/// Exact integral of |f - g| over [0, T].
double d_L1(const StepPath& f, const StepPath& g, double T);
/// sup over [0, T] of |f - g|.
double d_sup(const StepPath& f, const StepPath& g, double T);

/// Exact J1 distance on [0, T]: inf over increasing homeomorphisms lambda of
/// max(sup|lambda - id|, sup|f o lambda - g|). Computed by a feasibility DP
/// over the two jump sequences and a binary search over the finite set of
/// critical values. Jumps at exactly T are ignored (lambda fixes T).
double d_J1(const StepPath& f, const StepPath& g, double T);

struct M1Result {
  double distance = 0.0;
  /// Width of the final bisection bracket; the true value lies in
  /// [distance - resolution, distance].
  double resolution = 0.0;
  std::size_t iterations = 0;
};

/// Continuous Frechet distance under the max norm between two polylines,
/// bisected to `tol`.
M1Result frechet_max_norm(const ParamGraph& p, const ParamGraph& q, double tol = 1e-10);
/// Decision version: is the Frechet distance at most eps?
bool frechet_at_most(const ParamGraph& p, const ParamGraph& q, double eps);

/// M1 distance between completed graphs on [0, T].
M1Result d_M1(const StepPath& f, const StepPath& g, double T, double tol = 1e-10);
M1Result d_M1(const GridPath& f, const StepPath& g, double T, double tol = 1e-10);
M1Result d_M1(const GridPath& f, const GridPath& g, double T, double tol = 1e-10);

struct DiscreteM1Result {
  double distance = 0.0;
  std::size_t samples = 0;  ///< parameter samples per path at the last level
  double change = 0.0;      ///< relative change at the last doubling
};

/// Discrete Frechet DP over uniform-in-arclength samples of the completed
/// graphs, starting at 16 x (jumps + 1) samples and doubling until the value
/// changes by less than `rel_change`. Kept as a resolution-limited oracle
/// for `d_M1`.
DiscreteM1Result d_M1_discrete(const StepPath& f, const StepPath& g, double T, double rel_change = 0.01,
                               std::size_t max_samples = 4096);

/// Right-continuous inverse t -> inf{s in [0, T] : f(s) > t} of a
/// non-decreasing path, on [0, domain_end]; +inf once t reaches sup f.
/// Throws std::invalid_argument for decreasing input.
StepPath right_cont_inverse(const StepPath& f, double domain_end);
/// Same operator; both names refer to one implementation.
StepPath invert(const StepPath& f, double domain_end);

/// inf{s : f(s) > level} for a non-decreasing grid path, +inf if never.
double first_exceed_time(const GridPath& f, double level);

/// t -> outer(inner(t)). Throws std::domain_error when an inner value leaves
/// the outer path's domain.
StepPath compose(const GridPath& outer, const StepPath& inner);
StepPath compose(const StepPath& outer, const StepPath& inner);

struct SampledPath {
  StepPath path;
  double error_bound = 0.0;  ///< sup distance between the grid path and `path`
};

/// Left-end-point step approximation of a grid path on cells of width h.
SampledPath to_step_path(const GridPath& f, double h);

/// CSV with header "t,value", first row (0, initial value), one row per
/// jump, and a closing row at the horizon. Doubles use shortest round-trip
/// formatting.
void write_csv(std::ostream& out, const StepPath& f);
StepPath read_csv(std::istream& in);
void write_csv_file(const std::string& path, const StepPath& f);
StepPath read_csv_file(const std::string& path);
std::string format_double(double v);

/// Figure-style golden families on [0, T] converging to 1_[1, inf), with
/// a_n = 1 - 1/n and b_n = 2 + 1/n. Linear pieces are replaced by
/// `steps` midpoint steps each.
StepPath figure_example1(int n, double T = 3.0);
StepPath figure_example2(int n, int steps = 16, double T = 3.0);
StepPath figure_example3(int n, int steps = 16, double T = 3.0);

}  // namespace slowtrap
