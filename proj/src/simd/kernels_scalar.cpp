#include "slowtrap/simd/kernels.hpp"

#include <algorithm>
#include <cmath>

namespace slowtrap::simd::scalar {

std::size_t band_count(std::span<const double> y, double lo, double hi) noexcept {
  std::size_t count = 0;
  for (double v : y) count += (lo < v && v < hi) ? 1 : 0;
  return count;
}

void cumulative_sum(std::span<const double> inc, double start, std::span<double> out) noexcept {
  double acc = start;
  const std::size_t n = std::min(inc.size(), out.size());
  for (std::size_t k = 0; k < n; ++k) {
    acc += inc[k];
    out[k] = acc;
  }
}

void running_max(std::span<const double> in, double start, std::span<double> out) noexcept {
  double acc = start;
  const std::size_t n = std::min(in.size(), out.size());
  for (std::size_t k = 0; k < n; ++k) {
    acc = in[k] > acc ? in[k] : acc;
    out[k] = acc;
  }
}

void running_min(std::span<const double> in, double start, std::span<double> out) noexcept {
  double acc = start;
  const std::size_t n = std::min(in.size(), out.size());
  for (std::size_t k = 0; k < n; ++k) {
    acc = in[k] < acc ? in[k] : acc;
    out[k] = acc;
  }
}

std::pair<double, double> min_max(std::span<const double> y) noexcept {
  double lo = y[0];
  double hi = y[0];
  for (double v : y) {
    lo = v < lo ? v : lo;
    hi = v > hi ? v : hi;
  }
  return {lo, hi};
}

double abs_diff_sum(std::span<const double> a, std::span<const double> b) noexcept {
  const std::size_t n = std::min(a.size(), b.size());
  double acc = 0.0;
  for (std::size_t k = 0; k < n; ++k) acc += std::fabs(a[k] - b[k]);
  return acc;
}

}  // namespace slowtrap::simd::scalar
