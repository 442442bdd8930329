#include "ansflow/transform.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <utility>
#include <vector>

namespace ansflow {
namespace {

// FFTW planning is not thread-safe; execution of an existing plan on new
// arrays is. Plans are created once per grid shape and kept for the process.
struct PlanPair {
  fftw_plan forward = nullptr;
  fftw_plan backward = nullptr;
};

const PlanPair& plans_for(int n1, int n2) {
  static std::mutex mutex;
  static std::map<std::pair<int, int>, PlanPair> cache;
  std::lock_guard lock(mutex);
  auto it = cache.find({n1, n2});
  if (it != cache.end()) return it->second;
  const auto n = static_cast<std::size_t>(n1) * static_cast<std::size_t>(n2);
  auto* buf = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * n));
  PlanPair p;
  const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
  p.forward = fftw_plan_dft_2d(n1, n2, buf, buf, FFTW_FORWARD, flags);
  p.backward = fftw_plan_dft_2d(n1, n2, buf, buf, FFTW_BACKWARD, flags);
  fftw_free(buf);
  return cache.emplace(std::make_pair(n1, n2), p).first->second;
}

std::vector<Complex>& scratch(std::size_t n) {
  thread_local std::vector<Complex> buf;
  if (buf.size() < n) buf.resize(n);
  return buf;
}

inline fftw_complex* as_fftw(Complex* p) { return reinterpret_cast<fftw_complex*>(p); }

}  // namespace

void synthesize(const TorusGrid& grid, std::span<const Complex> coeffs, std::span<double> samples) {
  const std::size_t n = grid.size();
  auto& buf = scratch(n);
  std::copy(coeffs.begin(), coeffs.begin() + static_cast<std::ptrdiff_t>(n), buf.begin());
  fftw_execute_dft(plans_for(grid.n1(), grid.n2()).backward, as_fftw(buf.data()), as_fftw(buf.data()));
  for (std::size_t i = 0; i < n; ++i) samples[i] = buf[i].real();
}

void analyze(const TorusGrid& grid, std::span<const double> samples, std::span<Complex> coeffs) {
  const std::size_t n = grid.size();
  auto& buf = scratch(n);
  for (std::size_t i = 0; i < n; ++i) buf[i] = Complex(samples[i], 0.0);
  fftw_execute_dft(plans_for(grid.n1(), grid.n2()).forward, as_fftw(buf.data()), as_fftw(buf.data()));
  const double inv = 1.0 / static_cast<double>(n);
  for (std::size_t i = 0; i < n; ++i) coeffs[i] = buf[i] * inv;
}

SpectralField forward_transform(const PhysicalField& f) {
  SpectralField u(f.grid());
  for (int c = 0; c < 2; ++c) analyze(f.grid(), f.component(c), u.component(c));
  return u;
}

PhysicalField inverse_transform(const SpectralField& u) {
  const double defect = u.hermitian_defect();
  if (defect > 1e-10 * std::max(1.0, u.max_abs())) {
    throw Error("inverse_transform: Hermitian symmetry violated (defect " + std::to_string(defect) + ")");
  }
  PhysicalField f(u.grid());
  for (int c = 0; c < 2; ++c) synthesize(u.grid(), u.component(c), f.component(c));
  return f;
}

}  // namespace ansflow
