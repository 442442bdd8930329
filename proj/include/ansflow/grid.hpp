#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>

namespace ansflow {

constexpr double kPi = 3.14159265358979323846;
constexpr double kTwoPi = 2.0 * kPi;
/// Measure of the torus [0, 2pi)^2.
constexpr double kTorusArea = kTwoPi * kTwoPi;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Wavevector {
  int k1 = 0;
  int k2 = 0;

  friend bool operator==(const Wavevector&, const Wavevector&) = default;
  Wavevector operator-() const { return {-k1, -k2}; }
  [[nodiscard]] long norm_sq() const { return static_cast<long>(k1) * k1 + static_cast<long>(k2) * k2; }
  [[nodiscard]] bool is_zero() const { return k1 == 0 && k2 == 0; }
  /// Representative of a conjugate pair: k1 > 0, or k1 == 0 and k2 > 0.
  [[nodiscard]] bool is_positive() const { return k1 > 0 || (k1 == 0 && k2 > 0); }
};

std::string to_string(const Wavevector& k);

/// Collocation grid on the 2pi-periodic torus.
///
/// Storage is row-major with the x1 index slow and the x2 index fast, both for
/// physical samples and for Fourier coefficients. Index i along an axis with n
/// points carries the wavenumber i for i <= n/2 and i - n otherwise, so the
/// stored range is {-n/2+1, ..., n/2}.
class TorusGrid {
 public:
  TorusGrid(int n1, int n2);

  [[nodiscard]] int n1() const { return n1_; }
  [[nodiscard]] int n2() const { return n2_; }
  [[nodiscard]] std::size_t size() const { return static_cast<std::size_t>(n1_) * static_cast<std::size_t>(n2_); }
  [[nodiscard]] double dx1() const { return kTwoPi / n1_; }
  [[nodiscard]] double dx2() const { return kTwoPi / n2_; }
  [[nodiscard]] double cell_area() const { return dx1() * dx2(); }

  [[nodiscard]] int wavenumber1(int i1) const { return i1 <= n1_ / 2 ? i1 : i1 - n1_; }
  [[nodiscard]] int wavenumber2(int i2) const { return i2 <= n2_ / 2 ? i2 : i2 - n2_; }
  [[nodiscard]] Wavevector wavevector(std::size_t flat) const {
    const int i1 = static_cast<int>(flat / static_cast<std::size_t>(n2_));
    const int i2 = static_cast<int>(flat % static_cast<std::size_t>(n2_));
    return {wavenumber1(i1), wavenumber2(i2)};
  }
  [[nodiscard]] std::size_t flat(int i1, int i2) const {
    return static_cast<std::size_t>(i1) * static_cast<std::size_t>(n2_) + static_cast<std::size_t>(i2);
  }
  /// Flat index of a wavevector, or nullopt when it is not stored on this grid.
  [[nodiscard]] std::optional<std::size_t> index_of(const Wavevector& k) const;
  /// Flat index of the wavevector -k (with the Nyquist mode mapped to itself).
  [[nodiscard]] std::size_t conjugate_index(std::size_t flat) const;

  /// Largest |k_i| kept by the two-thirds rule.
  [[nodiscard]] int band1() const { return n1_ / 3; }
  [[nodiscard]] int band2() const { return n2_ / 3; }
  [[nodiscard]] bool in_band(const Wavevector& k) const {
    return k.k1 <= band1() && -k.k1 <= band1() && k.k2 <= band2() && -k.k2 <= band2();
  }

  [[nodiscard]] double x1(int i1) const { return dx1() * i1; }
  [[nodiscard]] double x2(int i2) const { return dx2() * i2; }

  friend bool operator==(const TorusGrid&, const TorusGrid&) = default;

 private:
  int n1_;
  int n2_;
};

}  // namespace ansflow
