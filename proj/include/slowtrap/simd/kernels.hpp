#pragma once

// Data-parallel inner loops used by the continuum and cadlag modules.
//
// Every kernel has a portable scalar reference in `slowtrap::simd::scalar` and,
// on x86-64, an AVX2 variant in `slowtrap::simd::avx2`. The free functions in
// `slowtrap::simd` dispatch at runtime: AVX2 when the CPU supports it, scalar
// otherwise. Setting SLOWTRAP_SIMD=scalar (or avx2) in the environment pins
// the choice; `force_isa` does the same programmatically.
//
// Counting, min/max and running-extremum kernels are bit-identical across
// variants. Summing kernels reassociate and agree to rounding only.

#include <cstddef>
#include <span>
#include <string_view>
#include <utility>

namespace slowtrap::simd {

enum class Isa { scalar, avx2 };

bool isa_available(Isa isa) noexcept;
Isa active_isa() noexcept;
/// Overrides the runtime choice. Throws std::invalid_argument if unavailable.
void force_isa(Isa isa);
/// Clears any override and re-reads the environment.
void reset_isa() noexcept;
std::string_view isa_name(Isa isa) noexcept;

/// Number of k with lo < y[k] < hi (open band, NaN never counts).
std::size_t band_count(std::span<const double> y, double lo, double hi) noexcept;

/// out[k] = start + inc[0] + ... + inc[k]. `out` may alias `inc`.
void cumulative_sum(std::span<const double> inc, double start, std::span<double> out) noexcept;

/// out[k] = max(start, in[0], ..., in[k]).
void running_max(std::span<const double> in, double start, std::span<double> out) noexcept;
/// out[k] = min(start, in[0], ..., in[k]).
void running_min(std::span<const double> in, double start, std::span<double> out) noexcept;

/// (min, max) of a non-empty span.
std::pair<double, double> min_max(std::span<const double> y) noexcept;

/// Sum of |a[k] - b[k]| over the common length.
double abs_diff_sum(std::span<const double> a, std::span<const double> b) noexcept;

namespace scalar {
std::size_t band_count(std::span<const double> y, double lo, double hi) noexcept;
void cumulative_sum(std::span<const double> inc, double start, std::span<double> out) noexcept;
void running_max(std::span<const double> in, double start, std::span<double> out) noexcept;
void running_min(std::span<const double> in, double start, std::span<double> out) noexcept;
std::pair<double, double> min_max(std::span<const double> y) noexcept;
double abs_diff_sum(std::span<const double> a, std::span<const double> b) noexcept;
}  // namespace scalar

#if defined(__x86_64__) || defined(_M_X64)
#define SLOWTRAP_HAVE_AVX2_KERNELS 1
namespace avx2 {
std::size_t band_count(std::span<const double> y, double lo, double hi) noexcept;
void cumulative_sum(std::span<const double> inc, double start, std::span<double> out) noexcept;
void running_max(std::span<const double> in, double start, std::span<double> out) noexcept;
void running_min(std::span<const double> in, double start, std::span<double> out) noexcept;
std::pair<double, double> min_max(std::span<const double> y) noexcept;
double abs_diff_sum(std::span<const double> a, std::span<const double> b) noexcept;
}  // namespace avx2
#else
#define SLOWTRAP_HAVE_AVX2_KERNELS 0
#endif

}  // namespace slowtrap::simd
