// Compiled with -mavx2. Only reached through dispatch after a CPU check.
#include "slowtrap/simd/kernels.hpp"

#include <immintrin.h>

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>

namespace slowtrap::simd::avx2 {
namespace {

// [a,b,c,d] -> [fill,a,b,c]
inline __m256d shift_one(__m256d x, __m256d fill) {
  const __m256d rot = _mm256_permute4x64_pd(x, _MM_SHUFFLE(2, 1, 0, 3));
  return _mm256_blend_pd(rot, fill, 0b0001);
}

// [a,b,c,d] -> [fill,fill,a,b]
inline __m256d shift_two(__m256d x, __m256d fill) {
  const __m256d moved = _mm256_permute2f128_pd(x, x, 0x08);
  return _mm256_blend_pd(moved, fill, 0b0011);
}

inline __m256d broadcast_last(__m256d x) {
  return _mm256_permute4x64_pd(x, _MM_SHUFFLE(3, 3, 3, 3));
}

}  // namespace

std::size_t band_count(std::span<const double> y, double lo, double hi) noexcept {
  const __m256d vlo = _mm256_set1_pd(lo);
  const __m256d vhi = _mm256_set1_pd(hi);
  std::size_t count = 0;
  std::size_t k = 0;
  const std::size_t n = y.size();
  for (; k + 4 <= n; k += 4) {
    const __m256d v = _mm256_loadu_pd(y.data() + k);
    const __m256d inside =
        _mm256_and_pd(_mm256_cmp_pd(vlo, v, _CMP_LT_OQ), _mm256_cmp_pd(v, vhi, _CMP_LT_OQ));
    count += static_cast<std::size_t>(std::popcount(static_cast<unsigned>(_mm256_movemask_pd(inside))));
  }
  for (; k < n; ++k) count += (lo < y[k] && y[k] < hi) ? 1 : 0;
  return count;
}

void cumulative_sum(std::span<const double> inc, double start, std::span<double> out) noexcept {
  const std::size_t n = std::min(inc.size(), out.size());
  const __m256d zero = _mm256_setzero_pd();
  __m256d carry = _mm256_set1_pd(start);
  std::size_t k = 0;
  for (; k + 4 <= n; k += 4) {
    __m256d x = _mm256_loadu_pd(inc.data() + k);
    x = _mm256_add_pd(x, shift_one(x, zero));
    x = _mm256_add_pd(x, shift_two(x, zero));
    x = _mm256_add_pd(x, carry);
    _mm256_storeu_pd(out.data() + k, x);
    carry = broadcast_last(x);
  }
  double acc = _mm256_cvtsd_f64(carry);
  for (; k < n; ++k) {
    acc += inc[k];
    out[k] = acc;
  }
}

void running_max(std::span<const double> in, double start, std::span<double> out) noexcept {
  const std::size_t n = std::min(in.size(), out.size());
  const __m256d fill = _mm256_set1_pd(-std::numeric_limits<double>::infinity());
  __m256d carry = _mm256_set1_pd(start);
  std::size_t k = 0;
  for (; k + 4 <= n; k += 4) {
    __m256d x = _mm256_loadu_pd(in.data() + k);
    x = _mm256_max_pd(x, shift_one(x, fill));
    x = _mm256_max_pd(x, shift_two(x, fill));
    x = _mm256_max_pd(x, carry);
    _mm256_storeu_pd(out.data() + k, x);
    carry = broadcast_last(x);
  }
  double acc = _mm256_cvtsd_f64(carry);
  for (; k < n; ++k) {
    acc = in[k] > acc ? in[k] : acc;
    out[k] = acc;
  }
}

void running_min(std::span<const double> in, double start, std::span<double> out) noexcept {
  const std::size_t n = std::min(in.size(), out.size());
  const __m256d fill = _mm256_set1_pd(std::numeric_limits<double>::infinity());
  __m256d carry = _mm256_set1_pd(start);
  std::size_t k = 0;
  for (; k + 4 <= n; k += 4) {
    __m256d x = _mm256_loadu_pd(in.data() + k);
    x = _mm256_min_pd(x, shift_one(x, fill));
    x = _mm256_min_pd(x, shift_two(x, fill));
    x = _mm256_min_pd(x, carry);
    _mm256_storeu_pd(out.data() + k, x);
    carry = broadcast_last(x);
  }
  double acc = _mm256_cvtsd_f64(carry);
  for (; k < n; ++k) {
    acc = in[k] < acc ? in[k] : acc;
    out[k] = acc;
  }
}

std::pair<double, double> min_max(std::span<const double> y) noexcept {
  const std::size_t n = y.size();
  __m256d vlo = _mm256_set1_pd(y[0]);
  __m256d vhi = vlo;
  std::size_t k = 0;
  for (; k + 4 <= n; k += 4) {
    const __m256d v = _mm256_loadu_pd(y.data() + k);
    vlo = _mm256_min_pd(vlo, v);
    vhi = _mm256_max_pd(vhi, v);
  }
  alignas(32) double lo4[4];
  alignas(32) double hi4[4];
  _mm256_store_pd(lo4, vlo);
  _mm256_store_pd(hi4, vhi);
  double lo = std::min({lo4[0], lo4[1], lo4[2], lo4[3]});
  double hi = std::max({hi4[0], hi4[1], hi4[2], hi4[3]});
  for (; k < n; ++k) {
    lo = y[k] < lo ? y[k] : lo;
    hi = y[k] > hi ? y[k] : hi;
  }
  return {lo, hi};
}

double abs_diff_sum(std::span<const double> a, std::span<const double> b) noexcept {
  const std::size_t n = std::min(a.size(), b.size());
  const __m256d sign = _mm256_set1_pd(-0.0);
  __m256d acc = _mm256_setzero_pd();
  std::size_t k = 0;
  for (; k + 4 <= n; k += 4) {
    const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(a.data() + k), _mm256_loadu_pd(b.data() + k));
    acc = _mm256_add_pd(acc, _mm256_andnot_pd(sign, d));
  }
  alignas(32) double part[4];
  _mm256_store_pd(part, acc);
  double total = (part[0] + part[1]) + (part[2] + part[3]);
  for (; k < n; ++k) total += std::fabs(a[k] - b[k]);
  return total;
}

}  // namespace slowtrap::simd::avx2
