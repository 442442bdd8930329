#pragma once

#include <cstdint>

#include "ansflow/field.hpp"

namespace ansflow::testing {

/// Uniform random samples in [-1, 1] on both components.
PhysicalField random_physical(const TorusGrid& grid, std::uint64_t seed);

/// Random band-limited solenoidal field with unit energy.
SpectralField random_band_limited(const TorusGrid& grid, std::uint64_t seed);

/// max_k |a_k - b_k| over both components.
double max_coeff_diff(const SpectralField& a, const SpectralField& b);

}  // namespace ansflow::testing
