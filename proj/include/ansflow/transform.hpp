#pragma once

#include <span>

#include "ansflow/field.hpp"

namespace ansflow {

/// Discrete Fourier analysis: u_k = (1/(n1 n2)) sum_x f(x) e^{-i k.x}.
SpectralField forward_transform(const PhysicalField& f);

/// Fourier synthesis. Throws when the coefficients violate Hermitian symmetry
/// by more than 1e-10 relative to their magnitude.
PhysicalField inverse_transform(const SpectralField& u);

/// Scalar transforms on raw arrays of grid.size() entries; used by the hot
/// loops that need no symmetry validation.
void synthesize(const TorusGrid& grid, std::span<const Complex> coeffs, std::span<double> samples);
void analyze(const TorusGrid& grid, std::span<const double> samples, std::span<Complex> coeffs);

}  // namespace ansflow
