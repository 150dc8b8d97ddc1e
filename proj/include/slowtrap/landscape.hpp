#pragma once

// Trap-depth distributions and the lazily realised i.i.d. landscape.
//
// A family is described by its tail function L(u) = 1 / P(tau > u), capped so
// that L >= 1. Depths of slowly varying families overflow a double almost
// immediately (log tau is itself heavy tailed), so every family is primarily
// evaluated in log coordinates: log_L(log u) and log_inv_L(log y). The linear
// entry points are thin wrappers that may return +inf.

#include <cstdint>
#include <string>
#include <vector>

namespace slowtrap {

enum class FamilyKind { log_pareto, log_weibull, regular, custom };

class TailFamily {
 public:
  /// L(u) = (log u)^gamma, gamma > 0.
  static TailFamily log_pareto(double gamma);
  /// L(u) = exp((log u)^gamma), gamma in (0, 1).
  static TailFamily log_weibull(double gamma);
  /// L(u) = u^alpha, alpha in (0, 1).
  static TailFamily regular(double alpha);
  /// Tabulated (u, L(u)) pairs, interpolated linearly in (log u, log L).
  static TailFamily tabulated(const std::vector<double>& u, const std::vector<double>& L);
  /// Same as `tabulated`, with both columns already in log form. Lets the
  /// table reach depths that do not fit in a double.
  static TailFamily tabulated_log(std::vector<double> log_u, std::vector<double> log_L);

  FamilyKind kind() const noexcept { return kind_; }
  /// gamma or alpha for the parametric families, NaN for custom.
  double parameter() const noexcept { return param_; }
  /// inv_L(1): below this the tail probability is 1.
  double support_floor() const noexcept;
  double log_support_floor() const noexcept { return log_floor_; }

  /// log L(u) as a function of log u. Zero at and below the floor.
  double log_L(double log_u) const;
  /// log of L^{-1}(y) = inf{u : L(u) > y} as a function of log y, never
  /// below the floor. May be +inf for a table whose tail is flat.
  double log_inv_L(double log_y) const;

  double L(double u) const;
  double inv_L(double y) const;

  /// True for the families whose L is slowly varying.
  bool slowly_varying() const noexcept;
  /// Human-readable name such as "log_pareto(gamma=1)".
  std::string describe() const;

 private:
  TailFamily(FamilyKind kind, double param);
  FamilyKind kind_;
  double param_;
  double log_floor_ = 0.0;
  std::vector<double> tab_lu_;
  std::vector<double> tab_lL_;
};

/// L(u). Throws std::domain_error for non-finite u.
double tail_L(const TailFamily& family, double u);
double inv_L(const TailFamily& family, double y);

/// L^{-1}(exp(exp_draw)): a depth with the family's law when exp_draw ~ Exp(1).
double sample_trap(const TailFamily& family, double exp_draw);
/// log of sample_trap, finite whenever the family's inverse is.
double sample_log_trap(const TailFamily& family, double exp_draw);

/// L(uv) / L(u).
double slow_variation_ratio(const TailFamily& family, double u, double v);
double slow_variation_ratio_log(const TailFamily& family, double log_u, double log_v);

/// L(x / L(x)) / L(x). Throws std::domain_error when x / L(x) falls below
/// the support floor, or x does not exceed it.
double assumption_A_ratio(const TailFamily& family, double x);
double assumption_A_ratio_log(const TailFamily& family, double log_x);

/// Per-site unit exponential: -log of a uniform in (0, 1] obtained by
/// hashing (seed, site) with two SplitMix64 rounds.
double site_exponential(std::uint64_t seed, std::int64_t site) noexcept;

class TrapLandscape {
 public:
  TrapLandscape(TailFamily family, std::uint64_t seed) : family_(std::move(family)), seed_(seed) {}

  const TailFamily& family() const noexcept { return family_; }
  std::uint64_t seed() const noexcept { return seed_; }

  double exp_draw_at(std::int64_t site) const noexcept { return site_exponential(seed_, site); }
  double trap_at(std::int64_t site) const { return sample_trap(family_, exp_draw_at(site)); }
  double log_trap_at(std::int64_t site) const { return sample_log_trap(family_, exp_draw_at(site)); }

 private:
  TailFamily family_;
  std::uint64_t seed_;
};

double trap_at(const TrapLandscape& landscape, std::int64_t site);

}  // namespace slowtrap
