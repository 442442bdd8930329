#include "ansflow/simd.hpp"

namespace ansflow::simd {
namespace {

void advect(const double* a1, const double* g1, const double* a2, const double* g2, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = a1[i] * g1[i] + a2[i] * g2[i];
}

void mul_acc(double alpha, const double* a, const double* b, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] += alpha * a[i] * b[i];
}

void scale(Complex* data, const double* mult, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) data[i] *= mult[i];
}

void axpy(double alpha, const Complex* x, Complex* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

double weighted_norm_sq(const Complex* a, const double* w, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += w[i] * (a[i].real() * a[i].real() + a[i].imag() * a[i].imag());
  return s;
}

double weighted_dot(const Complex* a, const Complex* b, const double* w, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += w[i] * (a[i].real() * b[i].real() + a[i].imag() * b[i].imag());
  return s;
}

constexpr KernelTable kScalar{Backend::Scalar, advect, mul_acc, scale, axpy, weighted_norm_sq, weighted_dot};

}  // namespace

const KernelTable& scalar_table() { return kScalar; }

}  // namespace ansflow::simd
