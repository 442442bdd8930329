#include "ansflow/rng.hpp"

#include <cmath>
#include <numbers>

namespace ansflow {

std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

namespace {

// Uniform on (0, 1].
double unit(std::uint64_t h) { return (static_cast<double>(h >> 11) + 1.0) * 0x1.0p-53; }

}  // namespace

double keyed_normal(std::uint64_t seed, std::uint64_t stream, std::uint64_t counter) {
  const std::uint64_t key = mix64(mix64(mix64(seed) ^ stream) ^ counter);
  const double u1 = unit(mix64(key ^ 0x5851f42d4c957f2dULL));
  const double u2 = unit(mix64(key ^ 0x14057b7ef767814fULL));
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

void sample_wiener_increment(double dt, RngState& state, std::vector<double>& out) {
  const double s = std::sqrt(dt);
  for (std::size_t j = 0; j < out.size(); ++j) out[j] = s * keyed_normal(state.seed, j, state.step);
  ++state.step;
}

std::vector<double> sample_wiener_increment(std::size_t n, double dt, RngState& state) {
  std::vector<double> out(n);
  sample_wiener_increment(dt, state, out);
  return out;
}

std::uint64_t trajectory_seed(std::uint64_t base_seed, std::uint64_t index) {
  // Odd multiplier: index -> base + index * m is a bijection mod 2^64.
  return base_seed + index * 0xd1342543de82ef95ULL;
}

}  // namespace ansflow
