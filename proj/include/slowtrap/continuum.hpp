#pragma once

// Limit objects: the Poisson field with intensity v^-2 dx dv, Brownian
// motion, the B-explored extremal process m^B, the extremal FIN process
// B(I^B), the FIN clock m^{B,alpha} and FIN diffusion, and a marginal
// sampler for the fractional-kinetics process.

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "slowtrap/cadlag.hpp"
#include "slowtrap/rng.hpp"

namespace slowtrap {

/// Thrown when the Brownian range, or a flanking deep site, leaves the
/// sampled window. Callers enlarge the window with extend_window.
struct WindowExhausted : std::runtime_error {
  WindowExhausted() : std::runtime_error("window exhausted") {}
};

/// Finite realisation of the field restricted to [-W, W] x (v_floor, inf).
/// Positions are sorted; marks are stored alongside.
struct MarkedPointSet {
  std::vector<double> x;
  std::vector<double> v;
  double W = 0.0;
  double v_floor = 1.0;
  std::size_t size() const noexcept { return x.size(); }
};

MarkedPointSet sample_points(double W, double v_floor, Rng& rng);
/// Adds independent strips so the window becomes [-new_W, new_W].
void extend_window(MarkedPointSet& pts, double new_W, Rng& rng);
/// Adds the points with marks in (new_floor, v_floor].
void lower_floor(MarkedPointSet& pts, double new_floor, Rng& rng);
/// Builds a set from explicit points (sorted on the way in).
MarkedPointSet make_points(std::vector<double> x, std::vector<double> v, double W, double v_floor);

/// Brownian motion on [0, T] with grid spacing dt, B_0 = 0.
GridPath sample_bm(double T, double dt, Rng& rng);

/// Grid path plus the maximum and minimum of the Brownian bridge inside each
/// cell. Cell k spans [k dt, (k + 1) dt]. The two extrema are drawn from
/// their exact marginal laws given the end points, independently of each
/// other.
struct BmPath {
  GridPath grid;
  std::vector<double> cell_max;
  std::vector<double> cell_min;
  double horizon() const noexcept { return grid.horizon(); }
};

BmPath sample_bm_path(double T, double dt, Rng& rng);
/// Continues the path to horizon new_T with fresh increments.
void extend_bm(BmPath& bm, double new_T, Rng& rng);

/// Maximum of a Brownian bridge from a to b over time dt, given U in (0, 1].
double bridge_max(double a, double b, double dt, double u) noexcept;

/// sup_{s <= t} B_s - inf_{s <= t} B_s, bridge extrema included.
double bm_range(const BmPath& bm, double t);

/// Time at which the path first reaches level x (x = 0 gives 0). Within the
/// crossing cell the chord is interpolated when it crosses. Otherwise the
/// cell midpoint is used, or the cell end when the chord moves toward x, so
/// that hit times stay monotone in |x|. +inf if the level is not reached.
double hitting_time(const BmPath& bm, double x);

/// A covered point: hit time, position, mark.
struct Cover {
  double time;
  double x;
  double v;
};

/// Points in order of first coverage by the Brownian range, keeping only
/// those whose mark is a new running maximum. Throws WindowExhausted if the
/// range leaves [-W, W] by the horizon.
std::vector<Cover> record_covers(const MarkedPointSet& pts, const BmPath& bm);

/// m^B on [0, horizon], value 0 until the first covered point.
StepPath explored_extremal_process(const MarkedPointSet& pts, const BmPath& bm);

/// t -> B(I^B_t) on [0, level_horizon], values taken at the exact point
/// positions. Throws std::runtime_error("bm too short") when
/// m^B at the Brownian horizon does not exceed level_horizon.
StepPath extremal_fin_path(const MarkedPointSet& pts, const BmPath& bm, double level_horizon);

struct Localization {
  double z1;  ///< nearest site >= 0 with mark > t
  double z2;  ///< nearest site <= 0 with mark > t
  double p1;  ///< probability that B hits z1 before z2
  double p2;
};

/// Flanking deep sites and gambler's-ruin weights. Throws WindowExhausted
/// if a side has no qualifying point inside the window.
Localization localization_sites(const MarkedPointSet& pts, double t);

/// Occupation of (x - h/2, x + h/2) by the grid path up to time t, over h.
double bm_local_time(const GridPath& bm, double x, double t, double h);

struct FinClockOptions {
  double bandwidth = 0.0;     ///< 0 selects sqrt(dt)
  bool compensate = false;    ///< add the mean contribution of marks below v_floor
};

/// Mean contribution t v_floor^{1/alpha - 1} / (1/alpha - 1) of the marks
/// below the floor up to time t.
double small_mark_compensator(double alpha, double v_floor, double t);
/// Largest floor whose compensator is below rel * t.
double floor_for_bias(double alpha, double rel);

/// m^{B,alpha}_t = sum_i L_t(x_i) v_i^{1/alpha}, each local time from
/// bm_local_time.
double fin_clock(const MarkedPointSet& pts, const GridPath& bm, double alpha, double t,
                 const FinClockOptions& opt = {});
/// Whole clock on the Brownian grid, summed per grid point over the band of
/// points around B_s with a segment tree (no prefix-sum cancellation).
GridPath fin_clock_path(const MarkedPointSet& pts, const GridPath& bm, double alpha, const FinClockOptions& opt = {});

/// t -> B(inf{s : clock_s > t^{1/power}}) sampled at `levels` equally spaced
/// t in [0, level_horizon]. power = 1 gives the FIN diffusion from its
/// clock; power = alpha runs it on the clock (m^{B,alpha})^alpha. Throws
/// std::runtime_error("bm too short") if the clock never reaches the top
/// level.
StepPath fin_path(const GridPath& clock, const GridPath& bm, double level_horizon, std::size_t levels,
                  double power = 1.0);

/// One-sided beta-stable variate with E exp(-l S) = exp(-l^beta) (Kanter).
double stable_subordinator_unit(double beta, Rng& rng);
/// B(E_t) with E the inverse of a beta-stable subordinator run on a grid of
/// spacing 1e-3 t^beta.
double fk_marginal(double beta, double t, Rng& rng);
/// Exact oracle: E_t has the law of (t / S)^beta.
double fk_marginal_exact(double beta, double t, Rng& rng);

}  // namespace slowtrap
