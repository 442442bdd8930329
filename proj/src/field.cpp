#include "ansflow/field.hpp"

#include <algorithm>
#include <cmath>

namespace ansflow {

SpectralField::SpectralField(const TorusGrid& grid)
    : grid_(grid), comp_{std::vector<Complex>(grid.size()), std::vector<Complex>(grid.size())} {}

Complex& SpectralField::at(int c, const Wavevector& k) {
  const auto idx = grid_.index_of(k);
  if (!idx) throw Error("SpectralField: wavevector " + to_string(k) + " not on grid");
  return (*this)(c, *idx);
}

const Complex& SpectralField::at(int c, const Wavevector& k) const {
  const auto idx = grid_.index_of(k);
  if (!idx) throw Error("SpectralField: wavevector " + to_string(k) + " not on grid");
  return (*this)(c, *idx);
}

void SpectralField::set_mode(const Wavevector& k, Complex a1, Complex a2) {
  at(0, k) = a1;
  at(1, k) = a2;
  if (!k.is_zero()) {
    at(0, -k) = std::conj(a1);
    at(1, -k) = std::conj(a2);
  }
}

void SpectralField::check_same_grid(const SpectralField& o) const {
  if (!(grid_ == o.grid_)) throw Error("SpectralField: grid mismatch");
}

SpectralField& SpectralField::operator+=(const SpectralField& o) {
  check_same_grid(o);
  for (int c = 0; c < 2; ++c) {
    auto& a = comp_[static_cast<std::size_t>(c)];
    const auto& b = o.comp_[static_cast<std::size_t>(c)];
    for (std::size_t i = 0; i < a.size(); ++i) a[i] += b[i];
  }
  return *this;
}

SpectralField& SpectralField::operator-=(const SpectralField& o) {
  check_same_grid(o);
  for (int c = 0; c < 2; ++c) {
    auto& a = comp_[static_cast<std::size_t>(c)];
    const auto& b = o.comp_[static_cast<std::size_t>(c)];
    for (std::size_t i = 0; i < a.size(); ++i) a[i] -= b[i];
  }
  return *this;
}

SpectralField& SpectralField::operator*=(double s) {
  for (auto& comp : comp_) {
    for (auto& v : comp) v *= s;
  }
  return *this;
}

SpectralField& SpectralField::axpy(double s, const SpectralField& o) {
  check_same_grid(o);
  for (int c = 0; c < 2; ++c) {
    auto& a = comp_[static_cast<std::size_t>(c)];
    const auto& b = o.comp_[static_cast<std::size_t>(c)];
    for (std::size_t i = 0; i < a.size(); ++i) a[i] += s * b[i];
  }
  return *this;
}

void SpectralField::set_zero() {
  for (auto& comp : comp_) std::fill(comp.begin(), comp.end(), Complex{});
}

bool SpectralField::is_finite() const {
  for (const auto& comp : comp_) {
    for (const auto& v : comp) {
      if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
    }
  }
  return true;
}

double SpectralField::max_abs() const {
  double m = 0.0;
  for (const auto& comp : comp_) {
    for (const auto& v : comp) m = std::max(m, std::abs(v));
  }
  return m;
}

double SpectralField::max_divergence() const {
  double m = 0.0;
  for (std::size_t i = 0; i < grid_.size(); ++i) {
    const Wavevector k = grid_.wavevector(i);
    m = std::max(m, std::abs(static_cast<double>(k.k1) * comp_[0][i] + static_cast<double>(k.k2) * comp_[1][i]));
  }
  return m;
}

double SpectralField::hermitian_defect() const {
  double m = 0.0;
  for (const auto& comp : comp_) {
    for (std::size_t i = 0; i < comp.size(); ++i) {
      m = std::max(m, std::abs(comp[grid_.conjugate_index(i)] - std::conj(comp[i])));
    }
  }
  return m;
}

bool SpectralField::is_solenoidal(double rel_tol) const {
  return max_divergence() <= rel_tol * std::max(max_abs(), 1e-300);
}

PhysicalField::PhysicalField(const TorusGrid& grid)
    : grid_(grid), comp_{std::vector<double>(grid.size()), std::vector<double>(grid.size())} {}

bool PhysicalField::is_finite() const {
  for (const auto& comp : comp_) {
    for (double v : comp) {
      if (!std::isfinite(v)) return false;
    }
  }
  return true;
}

double PhysicalField::l2_sq() const {
  double s = 0.0;
  for (const auto& comp : comp_) {
    for (double v : comp) s += v * v;
  }
  return s * grid_.cell_area();
}

}  // namespace ansflow
