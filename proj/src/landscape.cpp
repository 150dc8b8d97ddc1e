#include "slowtrap/landscape.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "slowtrap/rng.hpp"

namespace slowtrap {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require(bool ok, const char* what) {
  if (!ok) throw std::invalid_argument(what);
}

double safe_exp(double x) { return x > 709.0 ? kInf : std::exp(x); }

double safe_log(double x) {
  if (x <= 0.0) return -kInf;
  return std::log(x);
}

}  // namespace

TailFamily::TailFamily(FamilyKind kind, double param) : kind_(kind), param_(param) {}

TailFamily TailFamily::log_pareto(double gamma) {
  require(std::isfinite(gamma) && gamma > 0.0, "log_pareto: gamma must be > 0");
  TailFamily f(FamilyKind::log_pareto, gamma);
  f.log_floor_ = 1.0;  // L(e) = 1
  return f;
}

TailFamily TailFamily::log_weibull(double gamma) {
  require(std::isfinite(gamma) && gamma > 0.0 && gamma < 1.0, "log_weibull: gamma must lie in (0, 1)");
  TailFamily f(FamilyKind::log_weibull, gamma);
  f.log_floor_ = 0.0;
  return f;
}

TailFamily TailFamily::regular(double alpha) {
  require(std::isfinite(alpha) && alpha > 0.0 && alpha < 1.0, "regular: alpha must lie in (0, 1)");
  TailFamily f(FamilyKind::regular, alpha);
  f.log_floor_ = 0.0;
  return f;
}

TailFamily TailFamily::tabulated(const std::vector<double>& u, const std::vector<double>& L) {
  require(u.size() == L.size(), "tabulated: column lengths differ");
  std::vector<double> lu(u.size());
  std::vector<double> lL(L.size());
  for (std::size_t k = 0; k < u.size(); ++k) {
    require(u[k] > 0.0 && std::isfinite(u[k]), "tabulated: u must be positive and finite");
    require(L[k] >= 1.0 && std::isfinite(L[k]), "tabulated: L must be finite and >= 1");
    lu[k] = std::log(u[k]);
    lL[k] = std::log(L[k]);
  }
  return tabulated_log(std::move(lu), std::move(lL));
}

TailFamily TailFamily::tabulated_log(std::vector<double> log_u, std::vector<double> log_L) {
  require(log_u.size() == log_L.size(), "tabulated: column lengths differ");
  require(log_u.size() >= 2, "tabulated: need at least two nodes");
  for (std::size_t k = 0; k < log_u.size(); ++k) {
    require(std::isfinite(log_u[k]) && std::isfinite(log_L[k]), "tabulated: non-finite node");
    require(log_L[k] >= 0.0, "tabulated: L must be >= 1");
    if (k > 0) {
      require(log_u[k] > log_u[k - 1], "tabulated: u must be strictly increasing");
      require(log_L[k] >= log_L[k - 1], "tabulated: L must be non-decreasing");
    }
  }
  require(log_L.back() > log_L[log_L.size() - 2], "tabulated: last segment must be increasing");
  TailFamily f(FamilyKind::custom, std::numeric_limits<double>::quiet_NaN());
  f.tab_lu_ = std::move(log_u);
  f.tab_lL_ = std::move(log_L);
  f.log_floor_ = -kInf;
  f.log_floor_ = f.log_inv_L(0.0);
  return f;
}

double TailFamily::support_floor() const noexcept { return safe_exp(log_floor_); }

double TailFamily::log_L(double log_u) const {
  if (std::isnan(log_u)) throw std::domain_error("log_L: NaN argument");
  switch (kind_) {
    case FamilyKind::log_pareto:
      return log_u <= 1.0 ? 0.0 : param_ * std::log(log_u);
    case FamilyKind::log_weibull:
      return log_u <= 0.0 ? 0.0 : std::pow(log_u, param_);
    case FamilyKind::regular:
      return log_u <= 0.0 ? 0.0 : param_ * log_u;
    case FamilyKind::custom: {
      const auto& x = tab_lu_;
      const auto& y = tab_lL_;
      if (log_u < x.front()) return 0.0;
      if (log_u == kInf) return kInf;
      std::size_t k = static_cast<std::size_t>(std::upper_bound(x.begin(), x.end(), log_u) - x.begin());
      // extrapolate the last segment beyond the table
      if (k >= x.size()) k = x.size() - 1;
      const double w = (log_u - x[k - 1]) / (x[k] - x[k - 1]);
      return std::max(0.0, y[k - 1] + w * (y[k] - y[k - 1]));
    }
  }
  return 0.0;
}

double TailFamily::log_inv_L(double log_y) const {
  if (std::isnan(log_y)) throw std::domain_error("log_inv_L: NaN argument");
  if (log_y <= 0.0 && kind_ != FamilyKind::custom) return log_floor_;
  switch (kind_) {
    case FamilyKind::log_pareto:
      return std::exp(log_y / param_);
    case FamilyKind::log_weibull:
      return std::exp(std::log(log_y) / param_);
    case FamilyKind::regular:
      return log_y / param_;
    case FamilyKind::custom: {
      const auto& x = tab_lu_;
      const auto& y = tab_lL_;
      const double ly = std::max(log_y, 0.0);
      std::size_t k = static_cast<std::size_t>(std::upper_bound(y.begin(), y.end(), ly) - y.begin());
      double out;
      if (k == 0) {
        out = x.front();
      } else {
        if (k >= y.size()) k = y.size() - 1;
        const double slope = y[k] - y[k - 1];
        out = x[k - 1] + (ly - y[k - 1]) / slope * (x[k] - x[k - 1]);
      }
      return std::max(out, log_floor_);
    }
  }
  return log_floor_;
}

double TailFamily::L(double u) const { return safe_exp(log_L(safe_log(u))); }

double TailFamily::inv_L(double y) const { return safe_exp(log_inv_L(safe_log(y))); }

bool TailFamily::slowly_varying() const noexcept { return kind_ != FamilyKind::regular; }

std::string TailFamily::describe() const {
  std::ostringstream os;
  switch (kind_) {
    case FamilyKind::log_pareto: os << "log_pareto(gamma=" << param_ << ")"; break;
    case FamilyKind::log_weibull: os << "log_weibull(gamma=" << param_ << ")"; break;
    case FamilyKind::regular: os << "regular(alpha=" << param_ << ")"; break;
    case FamilyKind::custom: os << "custom(" << tab_lu_.size() << " nodes)"; break;
  }
  return os.str();
}

double tail_L(const TailFamily& family, double u) {
  if (!std::isfinite(u)) throw std::domain_error("tail_L: non-finite argument");
  return family.L(u);
}

double inv_L(const TailFamily& family, double y) { return family.inv_L(y); }

double sample_log_trap(const TailFamily& family, double exp_draw) { return family.log_inv_L(exp_draw); }

double sample_trap(const TailFamily& family, double exp_draw) { return safe_exp(sample_log_trap(family, exp_draw)); }

double slow_variation_ratio_log(const TailFamily& family, double log_u, double log_v) {
  if (log_v == 0.0) return 1.0;
  return std::exp(family.log_L(log_u + log_v) - family.log_L(log_u));
}

double slow_variation_ratio(const TailFamily& family, double u, double v) {
  if (!(u > 0.0) || !(v > 0.0)) throw std::domain_error("slow_variation_ratio: u and v must be positive");
  return slow_variation_ratio_log(family, std::log(u), std::log(v));
}

double assumption_A_ratio_log(const TailFamily& family, double log_x) {
  if (!(log_x > family.log_support_floor())) throw std::domain_error("assumption_A_ratio: x must exceed the support floor");
  const double lL = family.log_L(log_x);
  const double inner = log_x - lL;  // log(x / L(x))
  if (inner < family.log_support_floor()) throw std::domain_error("assumption_A_ratio: x / L(x) below support");
  return std::exp(family.log_L(inner) - lL);
}

double assumption_A_ratio(const TailFamily& family, double x) {
  if (!(x > 0.0) || !std::isfinite(x)) throw std::domain_error("assumption_A_ratio: x must be positive and finite");
  return assumption_A_ratio_log(family, std::log(x));
}

double site_exponential(std::uint64_t seed, std::int64_t site) noexcept {
  const std::uint64_t key = mix64(seed ^ 0xA0761D6478BD642FULL) + static_cast<std::uint64_t>(site) * kGoldenGamma;
  return -std::log(bits_to_open_unit(mix64(mix64(key))));
}

double trap_at(const TrapLandscape& landscape, std::int64_t site) { return landscape.trap_at(site); }

}  // namespace slowtrap
