// Compiled with -mavx2 -mfma; only reached through avx2_table() after the
// dispatcher has confirmed CPU support.

#include <immintrin.h>

#include "ansflow/simd.hpp"

namespace ansflow::simd {
namespace {

// (m0, m1) -> (m0, m0, m1, m1): one real multiplier per interleaved complex.
inline __m256d load_dup2(const double* m) {
  const __m128d x = _mm_loadu_pd(m);
  return _mm256_permute4x64_pd(_mm256_castpd128_pd256(x), 0b01010000);
}

inline double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

void advect(const double* a1, const double* g1, const double* a2, const double* g2, double* out, std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d p = _mm256_mul_pd(_mm256_loadu_pd(a1 + i), _mm256_loadu_pd(g1 + i));
    _mm256_storeu_pd(out + i, _mm256_fmadd_pd(_mm256_loadu_pd(a2 + i), _mm256_loadu_pd(g2 + i), p));
  }
  for (; i < n; ++i) out[i] = a1[i] * g1[i] + a2[i] * g2[i];
}

void mul_acc(double alpha, const double* a, const double* b, double* out, std::size_t n) {
  const __m256d va = _mm256_set1_pd(alpha);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d p = _mm256_mul_pd(va, _mm256_loadu_pd(a + i));
    _mm256_storeu_pd(out + i, _mm256_fmadd_pd(p, _mm256_loadu_pd(b + i), _mm256_loadu_pd(out + i)));
  }
  for (; i < n; ++i) out[i] += alpha * a[i] * b[i];
}

void scale(Complex* data, const double* mult, std::size_t n) {
  auto* d = reinterpret_cast<double*>(data);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    _mm256_storeu_pd(d + 2 * i, _mm256_mul_pd(_mm256_loadu_pd(d + 2 * i), load_dup2(mult + i)));
  }
  for (; i < n; ++i) data[i] *= mult[i];
}

void axpy(double alpha, const Complex* x, Complex* y, std::size_t n) {
  const auto* xs = reinterpret_cast<const double*>(x);
  auto* ys = reinterpret_cast<double*>(y);
  const __m256d va = _mm256_set1_pd(alpha);
  const std::size_t m = 2 * n;
  std::size_t i = 0;
  for (; i + 4 <= m; i += 4) {
    _mm256_storeu_pd(ys + i, _mm256_fmadd_pd(va, _mm256_loadu_pd(xs + i), _mm256_loadu_pd(ys + i)));
  }
  for (; i < m; ++i) ys[i] += alpha * xs[i];
}

double weighted_norm_sq(const Complex* a, const double* w, std::size_t n) {
  const auto* as = reinterpret_cast<const double*>(a);
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d x0 = _mm256_loadu_pd(as + 2 * i);
    const __m256d x1 = _mm256_loadu_pd(as + 2 * i + 4);
    acc0 = _mm256_fmadd_pd(_mm256_mul_pd(x0, x0), load_dup2(w + i), acc0);
    acc1 = _mm256_fmadd_pd(_mm256_mul_pd(x1, x1), load_dup2(w + i + 2), acc1);
  }
  double s = hsum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) s += w[i] * (a[i].real() * a[i].real() + a[i].imag() * a[i].imag());
  return s;
}

double weighted_dot(const Complex* a, const Complex* b, const double* w, std::size_t n) {
  const auto* as = reinterpret_cast<const double*>(a);
  const auto* bs = reinterpret_cast<const double*>(b);
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d p0 = _mm256_mul_pd(_mm256_loadu_pd(as + 2 * i), _mm256_loadu_pd(bs + 2 * i));
    const __m256d p1 = _mm256_mul_pd(_mm256_loadu_pd(as + 2 * i + 4), _mm256_loadu_pd(bs + 2 * i + 4));
    acc0 = _mm256_fmadd_pd(p0, load_dup2(w + i), acc0);
    acc1 = _mm256_fmadd_pd(p1, load_dup2(w + i + 2), acc1);
  }
  double s = hsum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) s += w[i] * (a[i].real() * b[i].real() + a[i].imag() * b[i].imag());
  return s;
}

constexpr KernelTable kAvx2{Backend::Avx2, advect, mul_acc, scale, axpy, weighted_norm_sq, weighted_dot};

}  // namespace

const KernelTable* avx2_table_impl() { return &kAvx2; }

}  // namespace ansflow::simd
