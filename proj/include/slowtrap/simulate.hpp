#pragma once

// Single-shot simulations behind `slowtrap simulate`.

#include <cstdint>
#include <string>

#include "slowtrap/cadlag.hpp"
#include "slowtrap/config.hpp"

namespace slowtrap {

/// process is one of btm, clock, mB, extremal_fin, fin.
///   clock: A_k in index time for k <= n^2 t (walk on the [simulate] family)
///   btm: X on [0, A_{N-1}] with N = floor(n^2 t)
///   mB, extremal_fin, fin: continuum objects on [0, t]
/// Stream 0 of `seed` drives everything. Throws std::invalid_argument for an
/// unknown process and std::overflow_error when linear values overflow
/// (set `[simulate] log_values = true` for log-domain clocks).
StepPath simulate_process(const std::string& process, std::size_t n, double t, std::uint64_t seed, const Config& cfg);

}  // namespace slowtrap
