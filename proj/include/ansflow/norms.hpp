#pragma once

#include <limits>
#include <optional>
#include <span>
#include <string>

#include "ansflow/field.hpp"

namespace ansflow {

// All norms carry the physical measure of [0,2pi)^2, so ||(sin x2, 0)||^2 = 2 pi^2.

double l2_inner(const SpectralField& u, const SpectralField& v);
double l2_norm_sq(const SpectralField& u);

/// (u, v)_{H^{0,1}} = (u, v) + (d2 u, d2 v).
double h01_inner(const SpectralField& u, const SpectralField& v);

/// (d2 u, d2 v).
double d2_inner(const SpectralField& u, const SpectralField& v);

/// Nonhomogeneous H^{-1} norm squared, weight 1 / (1 + |k|^2).
double h_minus1_norm_sq(const SpectralField& u);

/// ||u||_{H^{s,s'}} with weights (1+k1^2)^s (1+k2^2)^{s'}; the homogeneous
/// variant replaces the first factor by |k1|^{2s}.
double sobolev_norm(const SpectralField& u, double s, double s_prime, bool homogeneous = false);

/// Squared L2 norms of u and of its d1, d2 and d1 d2 derivatives.
struct NormSquares {
  double l2 = 0.0;
  double d1 = 0.0;
  double d2 = 0.0;
  double d1d2 = 0.0;

  [[nodiscard]] double h01() const { return l2 + d2; }
  [[nodiscard]] double h10() const { return l2 + d1; }
  [[nodiscard]] double h11() const { return l2 + d1 + d2 + d1d2; }
};

NormSquares norm_squares(const SpectralField& u);

constexpr double kInf = std::numeric_limits<double>::infinity();

enum class MixedOrder {
  HorizontalOuter,  ///< L^p_h(L^q_v): inner q-norm over x2, outer p-norm over x1
  VerticalOuter,    ///< L^p_v(L^q_h): inner q-norm over x1, outer p-norm over x2
};

/// Iterated discrete norm on the uniform grid rule; infinite exponents take
/// grid maxima. Operates on a scalar n1 x n2 array (x1 slow).
double mixed_norm(const TorusGrid& grid, std::span<const double> f, double p, double q, MixedOrder order);

/// Same, applied to the pointwise Euclidean magnitude of a vector field.
double mixed_norm(const PhysicalField& f, double p, double q, MixedOrder order);

/// Audit record for one inequality evaluation.
struct NormReport {
  std::string check;
  double lhs = 0.0;
  double rhs = 0.0;
  double constant_used = 1.0;
  double slack = 0.0;
  bool satisfied = false;
  std::string witness;
  /// Secondary diagnostic, e.g. the whole-space ratio in the embedding audit.
  std::optional<double> auxiliary;

  /// "check,lhs,rhs,constant,pass"
  [[nodiscard]] std::string csv_row() const;
  static std::string csv_header() { return "check,lhs,rhs,constant,pass"; }
};

enum class SupAxis {
  X1,  ///< ||u||^2_{L^2_v(L^inf_h)} <= (1/2pi)||u||^2 + 2||u|| ||d1 u||
  X2,  ///< ||u||^2_{L^2_h(L^inf_v)} <= (1/2pi)||u||^2 + 2||u|| ||d2 u||
};

/// Torus form of the one-dimensional sup embedding, applied row by row and
/// integrated in the other variable. auxiliary holds lhs / (2||u|| ||d u||),
/// the ratio the whole-space form without the mean term would need to be <= 1.
/// Throws on the zero field.
NormReport check_anisotropic_embedding(const SpectralField& u, SupAxis axis = SupAxis::X1,
                                       const std::string& witness = {});

/// ||f||_{L^p_h(L^q_v)} <= ||f||_{L^q_v(L^p_h)} for q <= p. Throws when q > p.
NormReport check_minkowski(const PhysicalField& f, double p, double q, const std::string& witness = {});

}  // namespace ansflow
