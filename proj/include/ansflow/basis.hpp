#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "ansflow/field.hpp"

namespace ansflow {

/// One real divergence-free basis function.
///
/// For a representative wavevector k (k1 > 0, or k1 == 0 and k2 > 0) the pair
///   cos element: k_perp/|k| cos(k.x) / (sqrt(2) pi)
///   sin element: k_perp/|k| sin(k.x) / (sqrt(2) pi)
/// has unit L2 norm on [0,2pi)^2, with k_perp = (-k2, k1).
struct BasisIndex {
  Wavevector rep;
  bool sine = false;

  friend bool operator==(const BasisIndex&, const BasisIndex&) = default;
};

/// Global ordering of the basis: representatives sorted by |k|^2, then k1,
/// then k2; the cos element precedes the sin element of each pair.
std::vector<BasisIndex> basis_enumeration(std::size_t count);

/// Largest n such that the first n basis elements lie inside the grid's
/// two-thirds band.
std::size_t basis_capacity(const TorusGrid& grid);

/// e_k: the cos element when k is a representative, otherwise the sin element
/// of the representative -k. Rejects k = 0 and Nyquist modes.
SpectralField basis_element(const TorusGrid& grid, const Wavevector& k);
SpectralField basis_element(const TorusGrid& grid, const BasisIndex& idx);

/// L2 coefficients (u, e_j) for the first n basis elements.
std::vector<double> basis_coefficients(const SpectralField& u, std::size_t n);

/// Precomputed projector onto span(e_1, ..., e_n) for repeated use.
class GalerkinSpace {
 public:
  GalerkinSpace(const TorusGrid& grid, std::size_t n);

  [[nodiscard]] std::size_t level() const { return index_.size(); }
  [[nodiscard]] const TorusGrid& grid() const { return grid_; }
  [[nodiscard]] const std::vector<BasisIndex>& elements() const { return index_; }

  [[nodiscard]] std::vector<double> coefficients(const SpectralField& u) const;
  void project_inplace(SpectralField& u) const;
  [[nodiscard]] SpectralField project(const SpectralField& u) const;
  /// Largest coefficient magnitude of u - P_n u.
  [[nodiscard]] double outside_residual(const SpectralField& u) const;

 private:
  TorusGrid grid_;
  std::vector<BasisIndex> index_;
  std::vector<std::array<double, 2>> direction_;
  std::vector<std::size_t> flat_;
};

/// P_n: L2-orthogonal projection onto span(e_1, ..., e_n). Throws when n
/// exceeds basis_capacity(grid).
SpectralField galerkin_project(const SpectralField& u, std::size_t n);
void galerkin_project_inplace(SpectralField& u, std::size_t n);

/// The same projection taken in the H^{0,1} inner product, assembled from
/// explicit basis fields; used to cross-check galerkin_project.
SpectralField galerkin_project_h01(const SpectralField& u, std::size_t n);

/// Largest deviation of the first n Gram matrices from their expected form:
/// the identity in L2 and diag(1 + k2^2) in H^{0,1}.
struct GramDefect {
  double l2 = 0.0;
  double h01 = 0.0;
};
GramDefect basis_gram_defect(const TorusGrid& grid, std::size_t n);

}  // namespace ansflow
