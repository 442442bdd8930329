#pragma once

#include <cstdint>

#include "ansflow/field.hpp"

namespace ansflow {

/// Random real, zero-mean, divergence-free field with Gaussian coefficients.
///
/// Each mode inside min(band, two-thirds band) gets amplitude
/// exp(-|k|^2 / (2 width^2)) times a complex normal draw, is projected onto
/// k_perp, and the result is scaled to ||u||_{L2}^2 = energy.
struct RandomFieldSpec {
  int band = 1 << 20;  ///< max |k_i|; clipped to the dealiasing band
  double width = 1e9;  ///< Gaussian spectral width; large means flat
  double energy = 1.0;
};

SpectralField random_solenoidal(const TorusGrid& grid, std::uint64_t seed, const RandomFieldSpec& spec = {});

/// (0, a sin x1): exact decaying solution of the anisotropic system.
SpectralField shear_x1(const TorusGrid& grid, double amplitude = 1.0);
/// (a sin x2, 0): steady when there is no vertical viscosity.
SpectralField shear_x2(const TorusGrid& grid, double amplitude = 1.0);
/// (a sin x1 cos x2, -a cos x1 sin x2).
SpectralField taylor_green(const TorusGrid& grid, double amplitude = 1.0);

}  // namespace ansflow
