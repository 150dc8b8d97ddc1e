#include <atomic>
#include <cstdlib>
#include <stdexcept>
#include <string>

#include "slowtrap/simd/kernels.hpp"

namespace slowtrap::simd {
namespace {

bool cpu_has_avx2() noexcept {
#if SLOWTRAP_HAVE_AVX2_KERNELS && (defined(__GNUC__) || defined(__clang__))
  return __builtin_cpu_supports("avx2");
#else
  return false;
#endif
}

Isa detect() noexcept {
  if (const char* env = std::getenv("SLOWTRAP_SIMD")) {
    const std::string want(env);
    if (want == "scalar") return Isa::scalar;
    if (want == "avx2" && cpu_has_avx2()) return Isa::avx2;
  }
  return cpu_has_avx2() ? Isa::avx2 : Isa::scalar;
}

std::atomic<int>& chosen() noexcept {
  static std::atomic<int> isa{static_cast<int>(detect())};
  return isa;
}

}  // namespace

bool isa_available(Isa isa) noexcept {
  return isa == Isa::scalar || (isa == Isa::avx2 && cpu_has_avx2());
}

Isa active_isa() noexcept { return static_cast<Isa>(chosen().load(std::memory_order_relaxed)); }

void force_isa(Isa isa) {
  if (!isa_available(isa)) throw std::invalid_argument("simd: requested ISA not available on this CPU");
  chosen().store(static_cast<int>(isa), std::memory_order_relaxed);
}

void reset_isa() noexcept { chosen().store(static_cast<int>(detect()), std::memory_order_relaxed); }

std::string_view isa_name(Isa isa) noexcept { return isa == Isa::avx2 ? "avx2" : "scalar"; }

#if SLOWTRAP_HAVE_AVX2_KERNELS
#define SLOWTRAP_DISPATCH(fn, ...) \
  return active_isa() == Isa::avx2 ? avx2::fn(__VA_ARGS__) : scalar::fn(__VA_ARGS__)
#else
#define SLOWTRAP_DISPATCH(fn, ...) return scalar::fn(__VA_ARGS__)
#endif

std::size_t band_count(std::span<const double> y, double lo, double hi) noexcept {
  SLOWTRAP_DISPATCH(band_count, y, lo, hi);
}

void cumulative_sum(std::span<const double> inc, double start, std::span<double> out) noexcept {
  SLOWTRAP_DISPATCH(cumulative_sum, inc, start, out);
}

void running_max(std::span<const double> in, double start, std::span<double> out) noexcept {
  SLOWTRAP_DISPATCH(running_max, in, start, out);
}

void running_min(std::span<const double> in, double start, std::span<double> out) noexcept {
  SLOWTRAP_DISPATCH(running_min, in, start, out);
}

std::pair<double, double> min_max(std::span<const double> y) noexcept { SLOWTRAP_DISPATCH(min_max, y); }

double abs_diff_sum(std::span<const double> a, std::span<const double> b) noexcept {
  SLOWTRAP_DISPATCH(abs_diff_sum, a, b);
}

#undef SLOWTRAP_DISPATCH

}  // namespace slowtrap::simd
