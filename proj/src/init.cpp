#include "ansflow/init.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "ansflow/norms.hpp"

namespace ansflow {

SpectralField random_solenoidal(const TorusGrid& grid, std::uint64_t seed, const RandomFieldSpec& spec) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  const int b1 = std::min(spec.band, grid.band1());
  const int b2 = std::min(spec.band, grid.band2());
  SpectralField u(grid);
  for (int k1 = 0; k1 <= b1; ++k1) {
    for (int k2 = -b2; k2 <= b2; ++k2) {
      const Wavevector k{k1, k2};
      if (!k.is_positive()) continue;
      const double amp = std::exp(-static_cast<double>(k.norm_sq()) / (2.0 * spec.width * spec.width));
      const Complex z{normal(rng), normal(rng)};
      const double norm = std::sqrt(static_cast<double>(k.norm_sq()));
      const Complex a = amp * z / norm;
      u.set_mode(k, -static_cast<double>(k.k2) * a, static_cast<double>(k.k1) * a);
    }
  }
  const double e = l2_norm_sq(u);
  if (e > 0.0) u *= std::sqrt(spec.energy / e);
  return u;
}

SpectralField shear_x1(const TorusGrid& grid, double amplitude) {
  SpectralField u(grid);
  // sin x1 = (e^{ix1} - e^{-ix1}) / (2i)
  u.set_mode({1, 0}, Complex{}, Complex{0.0, -0.5 * amplitude});
  return u;
}

SpectralField shear_x2(const TorusGrid& grid, double amplitude) {
  SpectralField u(grid);
  u.set_mode({0, 1}, Complex{0.0, -0.5 * amplitude}, Complex{});
  return u;
}

SpectralField taylor_green(const TorusGrid& grid, double amplitude) {
  SpectralField u(grid);
  // sin x1 cos x2 = (sin(x1+x2) + sin(x1-x2)) / 2, cos x1 sin x2 = (sin(x1+x2) - sin(x1-x2)) / 2
  const Complex s{0.0, -0.25 * amplitude};  // coefficient of e^{i k.x} in (1/2) sin(k.x)
  u.set_mode({1, 1}, s, -s);
  u.set_mode({1, -1}, s, s);
  return u;
}

}  // namespace ansflow
