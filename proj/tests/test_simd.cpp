#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "slowtrap/rng.hpp"
#include "slowtrap/simd/kernels.hpp"

using namespace slowtrap;

namespace {

std::vector<double> random_vector(std::size_t n, Rng& rng) {
  std::vector<double> v(n);
  for (double& x : v) x = standard_normal(rng);
  return v;
}

}  // namespace

TEST_CASE("dispatch reports a usable isa and honours forcing") {
  CHECK(isa_available(simd::Isa::scalar));
  simd::force_isa(simd::Isa::scalar);
  CHECK(simd::active_isa() == simd::Isa::scalar);
  simd::reset_isa();
  CHECK(isa_available(simd::active_isa()));
}

#if SLOWTRAP_HAVE_AVX2_KERNELS
TEST_CASE("avx2 kernels agree with scalar kernels") {
  if (!isa_available(simd::Isa::avx2)) {
    MESSAGE("cpu lacks avx2; equivalence not exercised");
    return;
  }
  Rng rng(11);
  for (std::size_t n : {0, 1, 2, 3, 4, 5, 7, 8, 9, 15, 16, 17, 31, 64, 67, 1000}) {
    CAPTURE(n);
    auto a = random_vector(n, rng);
    auto b = random_vector(n, rng);
    if (n > 5) {
      a[3] = std::numeric_limits<double>::quiet_NaN();
      a[4] = std::numeric_limits<double>::infinity();
      a[5] = 0.25;  // on the band edge
    }

    CHECK(simd::scalar::band_count(a, -0.5, 0.25) == simd::avx2::band_count(a, -0.5, 0.25));
    CHECK(simd::scalar::band_count(a, -1e9, 1e9) == simd::avx2::band_count(a, -1e9, 1e9));

    std::vector<double> s1(n), s2(n);
    simd::scalar::cumulative_sum(b, 1.5, s1);
    simd::avx2::cumulative_sum(b, 1.5, s2);
    for (std::size_t k = 0; k < n; ++k) CHECK(s2[k] == doctest::Approx(s1[k]).epsilon(1e-12).scale(10.0));

    simd::scalar::running_max(b, -0.3, s1);
    simd::avx2::running_max(b, -0.3, s2);
    CHECK(s1 == s2);
    simd::scalar::running_min(b, 0.3, s1);
    simd::avx2::running_min(b, 0.3, s2);
    CHECK(s1 == s2);

    if (n > 0) CHECK(simd::scalar::min_max(b) == simd::avx2::min_max(b));
    const auto c = random_vector(n, rng);
    CHECK(simd::avx2::abs_diff_sum(b, c) == doctest::Approx(simd::scalar::abs_diff_sum(b, c)).epsilon(1e-12));
  }
}
#endif

TEST_CASE("scalar kernels against direct definitions") {
  const std::vector<double> y = {0.1, -2.0, 3.0, 0.5, 0.5, -0.1};
  CHECK(simd::band_count(y, -0.1, 0.5) == 1);  // open band excludes both edges
  CHECK(simd::band_count(y, -3.0, 3.5) == y.size());
  std::vector<double> out(y.size());
  simd::cumulative_sum(y, 1.0, out);
  CHECK(out[0] == doctest::Approx(1.1));
  CHECK(out.back() == doctest::Approx(1.0 + 0.1 - 2.0 + 3.0 + 0.5 + 0.5 - 0.1));
  simd::running_max(y, 0.0, out);
  CHECK(out == std::vector<double>{0.1, 0.1, 3.0, 3.0, 3.0, 3.0});
  simd::running_min(y, 0.0, out);
  CHECK(out == std::vector<double>{0.0, -2.0, -2.0, -2.0, -2.0, -2.0});
  CHECK(simd::min_max(y) == std::pair<double, double>{-2.0, 3.0});
  CHECK(simd::abs_diff_sum(y, std::vector<double>(y.size(), 0.0)) == doctest::Approx(6.2));
}
