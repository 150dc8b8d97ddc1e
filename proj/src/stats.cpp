#include "slowtrap/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace slowtrap {
namespace {

void check_sample(const std::vector<double>& x, const char* who) {
  if (x.empty()) throw std::invalid_argument(std::string(who) + ": empty sample");
  for (double v : x)
    if (std::isnan(v)) throw std::invalid_argument(std::string(who) + ": NaN in sample");
}

}  // namespace

KSReport ks_two_sample(std::vector<double> a, std::vector<double> b, double threshold) {
  check_sample(a, "ks_two_sample");
  check_sample(b, "ks_two_sample");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    const double v = std::min(a[i], b[j]);
    // step over every tie at v on both sides before comparing
    while (i < a.size() && a[i] == v) ++i;
    while (j < b.size() && b[j] == v) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  KSReport r;
  r.statistic = d;
  r.n_a = a.size();
  r.n_b = b.size();
  r.threshold = threshold;
  r.pass = d < threshold;
  return r;
}

KSReport ks_vs_cdf(std::vector<double> a, const std::function<double(double)>& cdf, double threshold) {
  check_sample(a, "ks_vs_cdf");
  std::sort(a.begin(), a.end());
  const double n = static_cast<double>(a.size());
  double d = 0.0;
  std::size_t k = 0;
  while (k < a.size()) {
    const double v = a[k];
    std::size_t e = k;
    while (e < a.size() && a[e] == v) ++e;
    const double F = cdf(v);
    d = std::max({d, std::abs(F - static_cast<double>(k) / n), std::abs(static_cast<double>(e) / n - F)});
    k = e;
  }
  KSReport r;
  r.statistic = d;
  r.n_a = a.size();
  r.threshold = threshold;
  r.pass = d < threshold;
  return r;
}

double ks_pvalue(const KSReport& r) {
  const double ne = r.n_b == 0 ? static_cast<double>(r.n_a)
                               : static_cast<double>(r.n_a) * static_cast<double>(r.n_b) /
                                     static_cast<double>(r.n_a + r.n_b);
  const double sq = std::sqrt(ne);
  const double lambda = (sq + 0.12 + 0.11 / sq) * r.statistic;
  if (lambda < 0.2) return 1.0;
  double sum = 0.0;
  double sign = 1.0;
  for (int k = 1; k <= 100; ++k) {
    const double term = std::exp(-2.0 * k * k * lambda * lambda);
    sum += sign * term;
    sign = -sign;
    if (term < 1e-16) break;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

double mean(const std::vector<double>& x) {
  check_sample(x, "mean");
  return std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
}

double variance(const std::vector<double>& x) {
  if (x.size() < 2) throw std::invalid_argument("variance: need two values");
  const double m = mean(x);
  double s = 0.0;
  for (double v : x) s += (v - m) * (v - m);
  return s / static_cast<double>(x.size() - 1);
}

double std_error(const std::vector<double>& x) { return std::sqrt(variance(x) / static_cast<double>(x.size())); }

double quantile(std::vector<double> x, double p) {
  check_sample(x, "quantile");
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("quantile: p outside [0, 1]");
  std::sort(x.begin(), x.end());
  const double h = p * static_cast<double>(x.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, x.size() - 1);
  return x[lo] + (h - static_cast<double>(lo)) * (x[hi] - x[lo]);
}

double median(std::vector<double> x) { return quantile(std::move(x), 0.5); }

LinearFit linear_fit(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("linear_fit: need matching samples of size >= 2");
  const double mx = mean(x), my = mean(y);
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    sxx += (x[k] - mx) * (x[k] - mx);
    sxy += (x[k] - mx) * (y[k] - my);
  }
  if (sxx == 0.0) throw std::invalid_argument("linear_fit: constant regressor");
  LinearFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  if (x.size() > 2) {
    double rss = 0.0;
    for (std::size_t k = 0; k < x.size(); ++k) {
      const double e = y[k] - f.intercept - f.slope * x[k];
      rss += e * e;
    }
    f.slope_se = std::sqrt(rss / static_cast<double>(x.size() - 2) / sxx);
  }
  return f;
}

}  // namespace slowtrap
