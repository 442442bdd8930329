#pragma once

#include <cstdint>
#include <vector>

namespace ansflow {

/// splitmix64 finalizer.
std::uint64_t mix64(std::uint64_t x);

/// Standard normal draw that is a pure function of (seed, stream, counter).
double keyed_normal(std::uint64_t seed, std::uint64_t stream, std::uint64_t counter);

/// Per-trajectory stream position. The increment for step s and mode j is a
/// function of (seed, j, s) only.
struct RngState {
  std::uint64_t seed = 0;
  std::uint64_t step = 0;
};

/// n independent N(0, dt) draws for the current step; advances state.step.
std::vector<double> sample_wiener_increment(std::size_t n, double dt, RngState& state);
void sample_wiener_increment(double dt, RngState& state, std::vector<double>& out);

/// Injective in index for a fixed base seed.
std::uint64_t trajectory_seed(std::uint64_t base_seed, std::uint64_t index);

}  // namespace ansflow
