#include "ansflow/spectral_ops.hpp"

#include <map>
#include <memory>
#include <mutex>
#include <utility>

#include "ansflow/simd.hpp"
#include "ansflow/transform.hpp"

namespace ansflow {

const Symbols& symbols(const TorusGrid& grid) {
  static std::mutex mutex;
  static std::map<std::pair<int, int>, std::unique_ptr<Symbols>> cache;
  std::lock_guard lock(mutex);
  auto& slot = cache[{grid.n1(), grid.n2()}];
  if (!slot) {
    auto s = std::make_unique<Symbols>();
    const std::size_t n = grid.size();
    s->k1.resize(n);
    s->k2.resize(n);
    s->k1sq.resize(n);
    s->k2sq.resize(n);
    s->ksq.resize(n);
    s->dealias_mask.resize(n);
    s->ones.assign(n, 1.0);
    s->nyquist.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      const Wavevector k = grid.wavevector(i);
      s->k1[i] = k.k1;
      s->k2[i] = k.k2;
      s->k1sq[i] = static_cast<double>(k.k1) * k.k1;
      s->k2sq[i] = static_cast<double>(k.k2) * k.k2;
      s->ksq[i] = s->k1sq[i] + s->k2sq[i];
      s->dealias_mask[i] = grid.in_band(k) ? 1.0 : 0.0;
      s->nyquist[i] = (k.k1 == grid.n1() / 2 || k.k2 == grid.n2() / 2) ? 1 : 0;
    }
    slot = std::move(s);
  }
  return *slot;
}

void leray_project_inplace(SpectralField& u) {
  const auto& sym = symbols(u.grid());
  auto c1 = u.component(0);
  auto c2 = u.component(1);
  for (std::size_t i = 0; i < u.size(); ++i) {
    if (sym.ksq[i] == 0.0) continue;
    const Complex kdotu = sym.k1[i] * c1[i] + sym.k2[i] * c2[i];
    const Complex s = kdotu / sym.ksq[i];
    c1[i] -= sym.k1[i] * s;
    c2[i] -= sym.k2[i] * s;
  }
}

SpectralField leray_project(const SpectralField& u) {
  SpectralField out = u;
  leray_project_inplace(out);
  return out;
}

namespace {

// (i k)^order for integer k.
Complex ik_power(int k, int order) {
  Complex m{1.0, 0.0};
  for (int j = 0; j < order; ++j) m *= Complex{0.0, static_cast<double>(k)};
  return m;
}

}  // namespace

SpectralField mixed_derivative(const SpectralField& u, int order1, int order2) {
  if (order1 < 0 || order2 < 0) throw Error("derivative: order must be nonnegative");
  const TorusGrid& g = u.grid();
  SpectralField out(g);
  for (std::size_t i = 0; i < u.size(); ++i) {
    const Wavevector k = g.wavevector(i);
    if ((order1 % 2 == 1 && k.k1 == g.n1() / 2) || (order2 % 2 == 1 && k.k2 == g.n2() / 2)) continue;
    const Complex m = ik_power(k.k1, order1) * ik_power(k.k2, order2);
    out(0, i) = m * u(0, i);
    out(1, i) = m * u(1, i);
  }
  return out;
}

SpectralField derivative(const SpectralField& u, Axis axis, int order) {
  if (order < 1) throw Error("derivative: order must be positive");
  return axis == Axis::X1 ? mixed_derivative(u, order, 0) : mixed_derivative(u, 0, order);
}

void dealias_inplace(SpectralField& u) {
  const auto& sym = symbols(u.grid());
  const auto& k = simd::active();
  for (int c = 0; c < 2; ++c) k.scale(u.component(c).data(), sym.dealias_mask.data(), u.size());
}

SpectralField dealias(const SpectralField& u) {
  SpectralField out = u;
  dealias_inplace(out);
  return out;
}

namespace {

struct AdvectionWorkspace {
  std::vector<double> a1, a2, g1, g2, prod;
  std::vector<Complex> tmp;
  void resize(std::size_t n) {
    if (a1.size() == n) return;
    a1.resize(n);
    a2.resize(n);
    g1.resize(n);
    g2.resize(n);
    prod.resize(n);
    tmp.resize(n);
  }
};

}  // namespace

SpectralField advection(const SpectralField& a, const SpectralField& b, bool dealias_result) {
  if (!(a.grid() == b.grid())) throw Error("advection: grid mismatch");
  const TorusGrid& g = a.grid();
  const auto& sym = symbols(g);
  const auto& kern = simd::active();
  const std::size_t n = g.size();
  thread_local AdvectionWorkspace ws;
  ws.resize(n);

  synthesize(g, a.component(0), ws.a1);
  synthesize(g, a.component(1), ws.a2);

  SpectralField out(g);
  for (int c = 0; c < 2; ++c) {
    const auto bc = b.component(c);
    // d1 b_c
    for (std::size_t i = 0; i < n; ++i) {
      ws.tmp[i] = sym.nyquist[i] ? Complex{} : Complex{-sym.k1[i] * bc[i].imag(), sym.k1[i] * bc[i].real()};
    }
    synthesize(g, ws.tmp, ws.g1);
    // d2 b_c
    for (std::size_t i = 0; i < n; ++i) {
      ws.tmp[i] = sym.nyquist[i] ? Complex{} : Complex{-sym.k2[i] * bc[i].imag(), sym.k2[i] * bc[i].real()};
    }
    synthesize(g, ws.tmp, ws.g2);
    kern.advect(ws.a1.data(), ws.g1.data(), ws.a2.data(), ws.g2.data(), ws.prod.data(), n);
    analyze(g, ws.prod, out.component(c));
  }
  if (dealias_result) dealias_inplace(out);
  return out;
}

SpectralField nonlinear_term(const SpectralField& u) { return advection(u, u); }

SpectralField nonlinear_term_oracle(const SpectralField& u) {
  const TorusGrid& g = u.grid();
  if (g.size() > 1024) {
    throw Error("nonlinear_term_oracle: grid " + std::to_string(g.n1()) + "x" + std::to_string(g.n2()) +
                " exceeds the direct-convolution guard (n1*n2 <= 1024)");
  }
  SpectralField out(g);
  const std::size_t n = g.size();
  for (std::size_t ik = 0; ik < n; ++ik) {
    const Wavevector k = g.wavevector(ik);
    if (!g.in_band(k)) continue;
    Complex acc0{}, acc1{};
    for (std::size_t ip = 0; ip < n; ++ip) {
      const Wavevector p = g.wavevector(ip);
      if (!g.in_band(p)) continue;
      const Wavevector q{k.k1 - p.k1, k.k2 - p.k2};
      if (!g.in_band(q)) continue;
      const std::size_t iq = *g.index_of(q);
      // (u_p . i q) u_q
      const Complex coef = u(0, ip) * Complex{0.0, static_cast<double>(q.k1)} +
                           u(1, ip) * Complex{0.0, static_cast<double>(q.k2)};
      acc0 += coef * u(0, iq);
      acc1 += coef * u(1, iq);
    }
    out(0, ik) = acc0;
    out(1, ik) = acc1;
  }
  return out;
}

void remove_mean(SpectralField& u) {
  u(0, 0) = Complex{};
  u(1, 0) = Complex{};
}

}  // namespace ansflow
