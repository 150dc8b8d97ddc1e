#pragma once

// Summary statistics and Kolmogorov-Smirnov distances used by tests and
// experiments. KS statistics are used as regression thresholds; the
// asymptotic p-value is offered for distributional cross-checks only.

#include <cstddef>
#include <functional>
#include <vector>

namespace slowtrap {

struct KSReport {
  double statistic = 0.0;
  std::size_t n_a = 0;
  std::size_t n_b = 0;  ///< 0 for a one-sample test
  double threshold = 1.0;
  bool pass = true;  ///< statistic < threshold
};

/// sup |F_a - F_b| over the pooled sample. NaN entries are rejected.
KSReport ks_two_sample(std::vector<double> a, std::vector<double> b, double threshold = 1.0);
/// sup |F_a - cdf| with the supremum taken on both sides of each jump.
KSReport ks_vs_cdf(std::vector<double> a, const std::function<double(double)>& cdf, double threshold = 1.0);

/// Asymptotic Kolmogorov tail P(D > d) with the Stephens small-sample
/// correction; effective size n_a n_b / (n_a + n_b) for two samples.
double ks_pvalue(const KSReport& r);

double mean(const std::vector<double>& x);
/// Unbiased sample variance.
double variance(const std::vector<double>& x);
double std_error(const std::vector<double>& x);
/// Linear-interpolation quantile (type 7). p in [0, 1].
double quantile(std::vector<double> x, double p);
double median(std::vector<double> x);

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double slope_se = 0.0;
};
/// Ordinary least squares y ~ a + b x.
LinearFit linear_fit(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace slowtrap
