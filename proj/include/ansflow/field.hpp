#pragma once

#include <array>
#include <complex>
#include <span>
#include <vector>

#include "ansflow/grid.hpp"

namespace ansflow {

using Complex = std::complex<double>;

/// Two-component velocity field stored as Fourier coefficients.
///
/// Normalization: the physical function e^{i k.x} has coefficient 1 at mode k.
/// Components are indexed 0 (x1) and 1 (x2).
class SpectralField {
 public:
  explicit SpectralField(const TorusGrid& grid);

  [[nodiscard]] const TorusGrid& grid() const { return grid_; }
  [[nodiscard]] std::size_t size() const { return grid_.size(); }

  [[nodiscard]] std::span<Complex> component(int c) { return comp_[static_cast<std::size_t>(c)]; }
  [[nodiscard]] std::span<const Complex> component(int c) const { return comp_[static_cast<std::size_t>(c)]; }

  Complex& operator()(int c, std::size_t flat) { return comp_[static_cast<std::size_t>(c)][flat]; }
  const Complex& operator()(int c, std::size_t flat) const { return comp_[static_cast<std::size_t>(c)][flat]; }

  /// Coefficient at wavevector k; throws when k is not stored on the grid.
  Complex& at(int c, const Wavevector& k);
  [[nodiscard]] const Complex& at(int c, const Wavevector& k) const;

  /// Sets the coefficient at k and the conjugate at -k so the field stays real.
  void set_mode(const Wavevector& k, Complex a1, Complex a2);

  SpectralField& operator+=(const SpectralField& o);
  SpectralField& operator-=(const SpectralField& o);
  SpectralField& operator*=(double s);
  /// this += s * o
  SpectralField& axpy(double s, const SpectralField& o);

  friend SpectralField operator+(SpectralField a, const SpectralField& b) { return a += b; }
  friend SpectralField operator-(SpectralField a, const SpectralField& b) { return a -= b; }
  friend SpectralField operator*(double s, SpectralField a) { return a *= s; }

  /// Bitwise equality of all coefficients.
  friend bool operator==(const SpectralField& a, const SpectralField& b) = default;

  void set_zero();
  [[nodiscard]] bool is_finite() const;
  [[nodiscard]] double max_abs() const;
  /// max_k |k . u_k| over all modes.
  [[nodiscard]] double max_divergence() const;
  /// max_k |u_{-k} - conj(u_k)| over both components.
  [[nodiscard]] double hermitian_defect() const;
  [[nodiscard]] bool is_solenoidal(double rel_tol = 1e-11) const;

 private:
  void check_same_grid(const SpectralField& o) const;

  TorusGrid grid_;
  std::array<std::vector<Complex>, 2> comp_;
};

/// Two-component field sampled on the collocation grid.
class PhysicalField {
 public:
  explicit PhysicalField(const TorusGrid& grid);

  [[nodiscard]] const TorusGrid& grid() const { return grid_; }
  [[nodiscard]] std::size_t size() const { return grid_.size(); }

  [[nodiscard]] std::span<double> component(int c) { return comp_[static_cast<std::size_t>(c)]; }
  [[nodiscard]] std::span<const double> component(int c) const { return comp_[static_cast<std::size_t>(c)]; }

  double& operator()(int c, int i1, int i2) { return comp_[static_cast<std::size_t>(c)][grid_.flat(i1, i2)]; }
  double operator()(int c, int i1, int i2) const { return comp_[static_cast<std::size_t>(c)][grid_.flat(i1, i2)]; }

  /// Fills both components from f(x1, x2) -> {u1, u2}.
  template <typename F>
  void fill(F&& f) {
    for (int i1 = 0; i1 < grid_.n1(); ++i1) {
      for (int i2 = 0; i2 < grid_.n2(); ++i2) {
        const auto v = f(grid_.x1(i1), grid_.x2(i2));
        (*this)(0, i1, i2) = v[0];
        (*this)(1, i1, i2) = v[1];
      }
    }
  }

  friend bool operator==(const PhysicalField& a, const PhysicalField& b) = default;

  [[nodiscard]] bool is_finite() const;
  /// Uniform-rule quadrature of |u|^2 over the torus.
  [[nodiscard]] double l2_sq() const;

 private:
  TorusGrid grid_;
  std::array<std::vector<double>, 2> comp_;
};

}  // namespace ansflow
