#pragma once

// Data-parallel inner loops used by the spectral operators.
//
// Every kernel has a scalar reference implementation; an AVX2+FMA variant is
// compiled in its own translation unit and selected at first use when the CPU
// reports support. Reductions in the vector variant use four partial sums, so
// results agree with the scalar table to round-off, not bitwise. A process
// keeps one table for its whole lifetime unless a test forces a switch.
//
// ANSFLOW_SIMD=scalar in the environment pins the reference table.

#include <complex>
#include <cstddef>
#include <string_view>

namespace ansflow::simd {

using Complex = std::complex<double>;

enum class Backend { Scalar, Avx2 };

struct KernelTable {
  Backend backend;
  /// out[i] = a1[i] * g1[i] + a2[i] * g2[i]
  void (*advect)(const double* a1, const double* g1, const double* a2, const double* g2, double* out,
                 std::size_t n);
  /// out[i] += alpha * a[i] * b[i]
  void (*mul_acc)(double alpha, const double* a, const double* b, double* out, std::size_t n);
  /// data[i] *= mult[i]  (real multiplier on complex data)
  void (*scale)(Complex* data, const double* mult, std::size_t n);
  /// y[i] += alpha * x[i]
  void (*axpy)(double alpha, const Complex* x, Complex* y, std::size_t n);
  /// sum_i w[i] * |a[i]|^2
  double (*weighted_norm_sq)(const Complex* a, const double* w, std::size_t n);
  /// sum_i w[i] * Re(a[i] * conj(b[i]))
  double (*weighted_dot)(const Complex* a, const Complex* b, const double* w, std::size_t n);
};

const KernelTable& scalar_table();
/// nullptr when the library was built without the AVX2 translation unit.
const KernelTable* avx2_table();
bool cpu_has_avx2();

/// Table in use; chosen on first call.
const KernelTable& active();
/// Pins a backend; throws when it is unavailable on this build or CPU.
void force(Backend b);
std::string_view name(Backend b);

}  // namespace ansflow::simd
