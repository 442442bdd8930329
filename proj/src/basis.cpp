#include "ansflow/basis.hpp"

#include <algorithm>
#include <cmath>
#include <tuple>

#include "ansflow/norms.hpp"

namespace ansflow {
namespace {

// Representatives with |k|^2 <= r2max, in enumeration order.
std::vector<Wavevector> representatives(long r2max) {
  std::vector<Wavevector> reps;
  const int r = static_cast<int>(std::sqrt(static_cast<double>(r2max))) + 1;
  for (int k1 = 0; k1 <= r; ++k1) {
    for (int k2 = -r; k2 <= r; ++k2) {
      const Wavevector k{k1, k2};
      if (k.is_positive() && k.norm_sq() <= r2max) reps.push_back(k);
    }
  }
  std::sort(reps.begin(), reps.end(), [](const Wavevector& a, const Wavevector& b) {
    return std::make_tuple(a.norm_sq(), a.k1, a.k2) < std::make_tuple(b.norm_sq(), b.k1, b.k2);
  });
  return reps;
}

// d = k_perp / (|k| sqrt(2) pi): the real vector amplitude of a basis pair.
std::array<double, 2> pair_direction(const Wavevector& k) {
  const double norm = std::sqrt(static_cast<double>(k.norm_sq()));
  const double s = 1.0 / (norm * std::sqrt(2.0) * kPi);
  return {-k.k2 * s, k.k1 * s};
}

}  // namespace

std::vector<BasisIndex> basis_enumeration(std::size_t count) {
  std::vector<BasisIndex> out;
  out.reserve(count);
  long r2 = 1;
  while (out.size() < count) {
    // Grow the radius until enough representatives exist; cheap for the sizes used.
    const auto reps = representatives(r2);
    if (2 * reps.size() >= count || r2 > (1L << 40)) {
      for (const auto& k : reps) {
        if (out.size() < count) out.push_back({k, false});
        if (out.size() < count) out.push_back({k, true});
      }
      break;
    }
    r2 *= 2;
  }
  return out;
}

std::size_t basis_capacity(const TorusGrid& grid) {
  const long r2max = static_cast<long>(grid.band1()) * grid.band1() + static_cast<long>(grid.band2()) * grid.band2();
  const auto reps = representatives(r2max);
  std::size_t n = 0;
  for (const auto& k : reps) {
    if (!grid.in_band(k)) break;
    n += 2;
  }
  return n;
}

SpectralField basis_element(const TorusGrid& grid, const BasisIndex& idx) {
  const Wavevector k = idx.rep;
  if (k.is_zero()) throw Error("basis_element: k = 0 has no divergence-free basis element");
  if (!k.is_positive()) throw Error("basis_element: representative must satisfy k1 > 0 or (k1 == 0, k2 > 0)");
  if (std::abs(k.k1) >= grid.n1() / 2 || std::abs(k.k2) >= grid.n2() / 2) {
    throw Error("basis_element: wavevector " + to_string(k) + " not resolved by the grid");
  }
  const auto d = pair_direction(k);
  SpectralField e(grid);
  // cos: d/2 at +k and -k;  sin: -i d/2 at +k, +i d/2 at -k.
  const Complex f = idx.sine ? Complex{0.0, -0.5} : Complex{0.5, 0.0};
  e.set_mode(k, f * d[0], f * d[1]);
  return e;
}

SpectralField basis_element(const TorusGrid& grid, const Wavevector& k) {
  if (k.is_zero()) throw Error("basis_element: k = 0 has no divergence-free basis element");
  return k.is_positive() ? basis_element(grid, BasisIndex{k, false}) : basis_element(grid, BasisIndex{-k, true});
}

GalerkinSpace::GalerkinSpace(const TorusGrid& grid, std::size_t n) : grid_(grid), index_(basis_enumeration(n)) {
  if (n > basis_capacity(grid)) {
    throw Error("galerkin_project: level " + std::to_string(n) + " exceeds grid capacity " +
                std::to_string(basis_capacity(grid)));
  }
  for (const auto& idx : index_) {
    direction_.push_back(pair_direction(idx.rep));
    flat_.push_back(*grid.index_of(idx.rep));
  }
}

std::vector<double> GalerkinSpace::coefficients(const SpectralField& u) const {
  if (!(u.grid() == grid_)) throw Error("GalerkinSpace: grid mismatch");
  std::vector<double> coeffs(index_.size());
  for (std::size_t j = 0; j < index_.size(); ++j) {
    const auto& d = direction_[j];
    const Complex dot = u(0, flat_[j]) * d[0] + u(1, flat_[j]) * d[1];
    coeffs[j] = index_[j].sine ? -kTorusArea * dot.imag() : kTorusArea * dot.real();
  }
  return coeffs;
}

void GalerkinSpace::project_inplace(SpectralField& u) const {
  const auto coeffs = coefficients(u);
  u.set_zero();
  for (std::size_t j = 0; j < index_.size(); ++j) {
    const auto& d = direction_[j];
    const Complex f = index_[j].sine ? Complex{0.0, -0.5 * coeffs[j]} : Complex{0.5 * coeffs[j], 0.0};
    const std::size_t i = flat_[j];
    const std::size_t ic = grid_.conjugate_index(i);
    u(0, i) += f * d[0];
    u(1, i) += f * d[1];
    u(0, ic) += std::conj(f) * d[0];
    u(1, ic) += std::conj(f) * d[1];
  }
}

SpectralField GalerkinSpace::project(const SpectralField& u) const {
  SpectralField out = u;
  project_inplace(out);
  return out;
}

double GalerkinSpace::outside_residual(const SpectralField& u) const {
  SpectralField r = u;
  r -= project(u);
  return r.max_abs();
}

std::vector<double> basis_coefficients(const SpectralField& u, std::size_t n) {
  return GalerkinSpace(u.grid(), n).coefficients(u);
}

void galerkin_project_inplace(SpectralField& u, std::size_t n) { GalerkinSpace(u.grid(), n).project_inplace(u); }

SpectralField galerkin_project(const SpectralField& u, std::size_t n) {
  SpectralField out = u;
  galerkin_project_inplace(out, n);
  return out;
}

SpectralField galerkin_project_h01(const SpectralField& u, std::size_t n) {
  if (n > basis_capacity(u.grid())) {
    throw Error("galerkin_project_h01: level " + std::to_string(n) + " exceeds grid capacity");
  }
  SpectralField out(u.grid());
  for (const auto& idx : basis_enumeration(n)) {
    const SpectralField e = basis_element(u.grid(), idx);
    out.axpy(h01_inner(u, e) / h01_inner(e, e), e);
  }
  return out;
}

GramDefect basis_gram_defect(const TorusGrid& grid, std::size_t n) {
  if (n > basis_capacity(grid)) throw Error("basis_gram_defect: level exceeds the grid capacity");
  const auto idx = basis_enumeration(n);
  std::vector<SpectralField> e;
  e.reserve(n);
  for (const auto& i : idx) e.push_back(basis_element(grid, i));
  GramDefect d;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) {
      const double k2 = idx[i].rep.k2;
      const double want_l2 = i == j ? 1.0 : 0.0;
      const double want_h01 = i == j ? 1.0 + k2 * k2 : 0.0;
      d.l2 = std::max(d.l2, std::abs(l2_inner(e[i], e[j]) - want_l2));
      d.h01 = std::max(d.h01, std::abs(h01_inner(e[i], e[j]) - want_h01));
    }
  }
  return d;
}

}  // namespace ansflow
