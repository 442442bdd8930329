#include "ansflow/norms.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

#include "ansflow/simd.hpp"
#include "ansflow/spectral_ops.hpp"
#include "ansflow/transform.hpp"

namespace ansflow {

namespace {

double weighted_sum(const SpectralField& u, const std::vector<double>& w) {
  const auto& k = simd::active();
  return k.weighted_norm_sq(u.component(0).data(), w.data(), u.size()) +
         k.weighted_norm_sq(u.component(1).data(), w.data(), u.size());
}

double weighted_inner(const SpectralField& u, const SpectralField& v, const std::vector<double>& w) {
  if (!(u.grid() == v.grid())) throw Error("inner product: grid mismatch");
  const auto& k = simd::active();
  return k.weighted_dot(u.component(0).data(), v.component(0).data(), w.data(), u.size()) +
         k.weighted_dot(u.component(1).data(), v.component(1).data(), w.data(), u.size());
}

}  // namespace

double l2_inner(const SpectralField& u, const SpectralField& v) {
  return kTorusArea * weighted_inner(u, v, symbols(u.grid()).ones);
}

double l2_norm_sq(const SpectralField& u) { return kTorusArea * weighted_sum(u, symbols(u.grid()).ones); }

double h01_inner(const SpectralField& u, const SpectralField& v) {
  const auto& sym = symbols(u.grid());
  return kTorusArea * (weighted_inner(u, v, sym.ones) + weighted_inner(u, v, sym.k2sq));
}

double d2_inner(const SpectralField& u, const SpectralField& v) {
  return kTorusArea * weighted_inner(u, v, symbols(u.grid()).k2sq);
}

double h_minus1_norm_sq(const SpectralField& u) {
  const auto& sym = symbols(u.grid());
  std::vector<double> w(u.size());
  for (std::size_t i = 0; i < w.size(); ++i) w[i] = 1.0 / (1.0 + sym.ksq[i]);
  return kTorusArea * weighted_sum(u, w);
}

double sobolev_norm(const SpectralField& u, double s, double s_prime, bool homogeneous) {
  const TorusGrid& g = u.grid();
  std::vector<double> w(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) {
    const Wavevector k = g.wavevector(i);
    const double a1 = static_cast<double>(k.k1) * k.k1;
    const double a2 = static_cast<double>(k.k2) * k.k2;
    double h = 0.0;
    if (homogeneous) {
      h = (s == 0.0) ? 1.0 : (a1 == 0.0 ? 0.0 : std::pow(a1, s));
    } else {
      h = std::pow(1.0 + a1, s);
    }
    w[i] = h * std::pow(1.0 + a2, s_prime);
  }
  return std::sqrt(kTorusArea * weighted_sum(u, w));
}

NormSquares norm_squares(const SpectralField& u) {
  const auto& sym = symbols(u.grid());
  NormSquares n;
  for (int c = 0; c < 2; ++c) {
    const Complex* a = u.component(c).data();
    for (std::size_t i = 0; i < u.size(); ++i) {
      const double m = std::norm(a[i]);
      n.l2 += m;
      n.d1 += sym.k1sq[i] * m;
      n.d2 += sym.k2sq[i] * m;
      n.d1d2 += sym.k1sq[i] * sym.k2sq[i] * m;
    }
  }
  n.l2 *= kTorusArea;
  n.d1 *= kTorusArea;
  n.d2 *= kTorusArea;
  n.d1d2 *= kTorusArea;
  return n;
}

namespace {

// Discrete L^p over n samples with spacing h; p = inf gives the max of |v|.
double lp(std::span<const double> v, double p, double h) {
  if (std::isinf(p)) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
  }
  double s = 0.0;
  for (double x : v) s += std::pow(std::abs(x), p);
  return std::pow(s * h, 1.0 / p);
}

void check_exponent(double p) {
  if (!(p >= 1.0)) throw Error("mixed_norm: exponents must lie in [1, inf]");
}

}  // namespace

double mixed_norm(const TorusGrid& grid, std::span<const double> f, double p, double q, MixedOrder order) {
  check_exponent(p);
  check_exponent(q);
  const int n1 = grid.n1();
  const int n2 = grid.n2();
  if (order == MixedOrder::HorizontalOuter) {
    std::vector<double> inner(static_cast<std::size_t>(n1));
    for (int i1 = 0; i1 < n1; ++i1) {
      inner[static_cast<std::size_t>(i1)] = lp(f.subspan(grid.flat(i1, 0), static_cast<std::size_t>(n2)), q, grid.dx2());
    }
    return lp(inner, p, grid.dx1());
  }
  std::vector<double> column(static_cast<std::size_t>(n1));
  std::vector<double> inner(static_cast<std::size_t>(n2));
  for (int i2 = 0; i2 < n2; ++i2) {
    for (int i1 = 0; i1 < n1; ++i1) column[static_cast<std::size_t>(i1)] = f[grid.flat(i1, i2)];
    inner[static_cast<std::size_t>(i2)] = lp(column, q, grid.dx1());
  }
  return lp(inner, p, grid.dx2());
}

double mixed_norm(const PhysicalField& f, double p, double q, MixedOrder order) {
  std::vector<double> mag(f.size());
  const auto a = f.component(0);
  const auto b = f.component(1);
  for (std::size_t i = 0; i < f.size(); ++i) mag[i] = std::hypot(a[i], b[i]);
  return mixed_norm(f.grid(), mag, p, q, order);
}

std::string NormReport::csv_row() const {
  std::ostringstream os;
  os.precision(17);
  os << check << ',' << lhs << ',' << rhs << ',' << constant_used << ',' << (satisfied ? "pass" : "fail");
  return os.str();
}

NormReport check_anisotropic_embedding(const SpectralField& u, SupAxis axis, const std::string& witness) {
  const NormSquares ns = norm_squares(u);
  if (ns.l2 == 0.0) throw Error("check_anisotropic_embedding: zero field, ratio undefined");
  const PhysicalField f = inverse_transform(u);
  const double dsq = axis == SupAxis::X1 ? ns.d1 : ns.d2;

  std::vector<double> magsq(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) {
    magsq[i] = f.component(0)[i] * f.component(0)[i] + f.component(1)[i] * f.component(1)[i];
  }
  // sup over the inner variable, uniform rule over the outer one.
  const auto order = axis == SupAxis::X1 ? MixedOrder::VerticalOuter : MixedOrder::HorizontalOuter;
  const double lhs = mixed_norm(f.grid(), magsq, 1.0, kInf, order);

  const double cross = 2.0 * std::sqrt(ns.l2) * std::sqrt(dsq);
  NormReport r;
  r.check = axis == SupAxis::X1 ? "embedding_sup_x1" : "embedding_sup_x2";
  r.lhs = lhs;
  r.rhs = ns.l2 / kTwoPi + cross;
  r.constant_used = 1.0;
  r.slack = 1e-12 * r.rhs;
  r.satisfied = r.lhs <= r.constant_used * r.rhs + r.slack;
  r.auxiliary = cross > 0.0 ? lhs / cross : kInf;
  if (!r.satisfied) r.witness = witness;
  return r;
}

NormReport check_minkowski(const PhysicalField& f, double p, double q, const std::string& witness) {
  if (q > p) throw Error("check_minkowski: requires q <= p");
  NormReport r;
  r.check = "minkowski";
  r.lhs = mixed_norm(f, p, q, MixedOrder::HorizontalOuter);
  r.rhs = mixed_norm(f, q, p, MixedOrder::VerticalOuter);
  r.constant_used = 1.0;
  r.slack = 1e-12 * r.rhs;
  r.satisfied = r.lhs <= r.rhs + r.slack;
  if (!r.satisfied) r.witness = witness;
  return r;
}

}  // namespace ansflow
