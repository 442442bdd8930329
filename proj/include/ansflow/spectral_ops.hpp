#pragma once

#include <vector>

#include "ansflow/field.hpp"

namespace ansflow {

/// Per-grid spectral multipliers, built once per grid shape and shared.
struct Symbols {
  std::vector<double> k1;
  std::vector<double> k2;
  std::vector<double> k1sq;
  std::vector<double> k2sq;
  std::vector<double> ksq;
  std::vector<double> dealias_mask;  ///< 1 inside the two-thirds band, 0 outside
  std::vector<double> ones;
  std::vector<unsigned char> nyquist;  ///< 1 where k1 == n1/2 or k2 == n2/2
};

const Symbols& symbols(const TorusGrid& grid);

/// Orthogonal projection onto divergence-free fields; the mean mode is untouched.
SpectralField leray_project(const SpectralField& u);
void leray_project_inplace(SpectralField& u);

enum class Axis { X1 = 1, X2 = 2 };

/// Multiplies mode k by (i k_axis)^order. For odd orders the Nyquist row or
/// column along that axis is zeroed, since its derivative is not real.
SpectralField derivative(const SpectralField& u, Axis axis, int order = 1);

/// Mixed derivative d1^order1 d2^order2 with a single combined multiplier.
SpectralField mixed_derivative(const SpectralField& u, int order1, int order2);

/// Two-thirds rule: zero every mode with |k1| > n1/3 or |k2| > n2/3.
SpectralField dealias(const SpectralField& u);
void dealias_inplace(SpectralField& u);

/// Dealiased u . grad u, computed pseudospectrally. Not Leray-projected.
SpectralField nonlinear_term(const SpectralField& u);

/// (a . grad) b for two fields on the same grid, dealiased unless asked not to.
SpectralField advection(const SpectralField& a, const SpectralField& b, bool dealias_result = true);

/// Direct convolution for u . grad u restricted to the two-thirds band.
/// O(N^2); rejects grids with n1*n2 > 1024.
SpectralField nonlinear_term_oracle(const SpectralField& u);

/// Zeroes the k = 0 coefficient of both components.
void remove_mean(SpectralField& u);

}  // namespace ansflow
