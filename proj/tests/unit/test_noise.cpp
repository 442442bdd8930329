#include <algorithm>
#include <cmath>

#include "ansflow/basis.hpp"
#include "ansflow/init.hpp"
#include "ansflow/noise.hpp"
#include "ansflow/rng.hpp"
#include "ansflow/spectral_ops.hpp"
#include "doctest.h"
#include "test_fields.hpp"

using namespace ansflow;
using ansflow::testing::max_coeff_diff;

namespace {

// Transport plus reaction model with M1 = 0.04 and M2 = 0.02 from the recipes.
NoiseModel mixed_model() {
  NoiseModel m;
  m.c = {FourierRecipe::parse("0.1"), FourierRecipe::parse("0.05*cos(0,1)"), FourierRecipe{}};
  m.b = {FourierRecipe{}, FourierRecipe::parse("0.1*sin(1,0)"), FourierRecipe::parse("0.1*cos(0,1)")};
  m.g = {Nonlinearity::Kind::Sine, 0.5};
  return m;
}

}  // namespace

TEST_CASE("wiener increments: determinism, moments, independence") {
  RngState a{42, 7};
  RngState b{42, 7};
  const auto x = sample_wiener_increment(5, 0.01, a);
  const auto y = sample_wiener_increment(5, 0.01, b);
  CHECK(x == y);
  CHECK(a.step == 8);
  CHECK(sample_wiener_increment(5, 0.01, a) != x);

  const double dt = 1e-3;
  const std::size_t n = 1'000'000;
  RngState s{3, 0};
  double sum0 = 0.0, sq0 = 0.0, cross = 0.0;
  std::vector<double> inc(2);
  for (std::size_t i = 0; i < n; ++i) {
    sample_wiener_increment(dt, s, inc);
    sum0 += inc[0];
    sq0 += inc[0] * inc[0];
    cross += inc[0] * inc[1];
  }
  const double mean = sum0 / n;
  CHECK(std::abs(mean) <= 4.0 * std::sqrt(dt / n));
  CHECK(sq0 / n == doctest::Approx(dt).epsilon(4.0 * std::sqrt(2.0 / n)));
  // Var of the product of independent N(0,dt) draws is dt^2.
  CHECK(std::abs(cross / n) <= 4.0 * dt / std::sqrt(static_cast<double>(n)));
}

TEST_CASE("trajectory seeds are distinct") {
  std::vector<std::uint64_t> seeds;
  for (std::uint64_t i = 0; i < 1000; ++i) seeds.push_back(trajectory_seed(17, i));
  std::sort(seeds.begin(), seeds.end());
  CHECK(std::adjacent_find(seeds.begin(), seeds.end()) == seeds.end());
}

TEST_CASE("recipes parse, print and bound") {
  const auto r = FourierRecipe::parse("0.1 + 0.05*cos(0,1) - 0.2 * sin(1,-1)");
  REQUIRE(r.terms.size() == 3);
  CHECK(r.terms[2].a_sin == -0.2);
  CHECK(r.terms[2].m2 == -1);
  CHECK(FourierRecipe::parse(r.to_string()) == r);
  CHECK(r.sup_bound() == doctest::Approx(0.35));
  CHECK(r.sup_d1_bound() == doctest::Approx(0.2));
  CHECK(r.sup_d2_bound() == doctest::Approx(0.25));
  CHECK(r.band() == 1);
  CHECK(FourierRecipe::parse("0").is_zero());
  CHECK(FourierRecipe::parse("").to_string() == "0");
  CHECK_THROWS_AS(FourierRecipe::parse("0.1*tan(1,0)"), Error);
  CHECK_THROWS_AS(FourierRecipe::parse("0.1*cos(1)"), Error);
  CHECK(Nonlinearity::parse("tanh:0.5") == Nonlinearity{Nonlinearity::Kind::Tanh, 0.5});
  CHECK_THROWS_AS(Nonlinearity::parse("exp:1"), Error);

  const TorusGrid g(8, 8);
  const auto s = r.sample(g);
  const double x1 = g.x1(3), x2 = g.x2(5);
  CHECK(s[g.flat(3, 5)] == doctest::Approx(0.1 + 0.05 * std::cos(x2) - 0.2 * std::sin(x1 - x2)).epsilon(1e-14));
}

TEST_CASE("model constants and validation") {
  const auto m = mixed_model();
  CHECK(m.m1_computed() == doctest::Approx(0.01 + 0.01 + 0.0).epsilon(1e-14));
  CHECK(m.m2_computed() == doctest::Approx(0.02).epsilon(1e-14));
  CHECK(m.cg() == 0.5);
  CHECK_FALSE(m.state_independent());

  NoiseModel bad = m;
  bad.m1_declared = 0.001;
  CHECK_THROWS_AS(bad.validate(), Error);
  bad = m;
  bad.b.pop_back();
  CHECK_THROWS_AS(bad.validate(), Error);
  CHECK_NOTHROW(SigmaOperator(m, TorusGrid(4, 4)));
  NoiseModel wide = m;
  wide.c[2] = FourierRecipe::parse("0.01*cos(2,0)");
  CHECK_THROWS_AS(SigmaOperator(wide, TorusGrid(4, 4)), Error);
}

TEST_CASE("apply_sigma: zero increment, additive channel, transport channel") {
  const TorusGrid g(16, 16);
  const auto u = testing::random_band_limited(g, 1);
  const auto m = mixed_model();
  CHECK(apply_sigma(m, u, {0.0, 0.0, 0.0}).max_abs() == 0.0);

  // Constant b with g = 1: (b, b) is a mean mode, which projection keeps.
  NoiseModel add;
  add.c = {FourierRecipe{}};
  add.b = {FourierRecipe::constant(0.3)};
  add.g = {Nonlinearity::Kind::Constant, 1.0};
  const auto a = apply_sigma(add, u, {1.0});
  CHECK(a(0, 0) == Complex(0.3, 0.0));
  CHECK(a(1, 0) == Complex(0.3, 0.0));
  SpectralField expect(g);
  expect(0, 0) = 0.3;
  expect(1, 0) = 0.3;
  CHECK(max_coeff_diff(a, expect) < 1e-16);

  // c = 1 on a single divergence-free mode gives d1 u.
  NoiseModel tr;
  tr.c = {FourierRecipe::constant(1.0)};
  tr.b = {FourierRecipe{}};
  tr.g = {Nonlinearity::Kind::Constant, 0.0};
  const auto e = basis_element(g, Wavevector{2, 1});
  CHECK(max_coeff_diff(apply_sigma(tr, e, {1.0}), derivative(e, Axis::X1)) < 1e-15);
}

TEST_CASE("additive single mode hits the basis element") {
  const TorusGrid g(8, 8);
  for (const Wavevector k : {Wavevector{1, 0}, Wavevector{0, 1}, Wavevector{1, 1}, Wavevector{2, -1}}) {
    if (k.k1 == k.k2) {
      CHECK_THROWS_AS(NoiseModel::additive_single_mode(k, 1.0), Error);
      continue;
    }
    const auto m = NoiseModel::additive_single_mode(k, 0.7);
    CHECK(m.state_independent());
    const auto col = apply_sigma(m, SpectralField(g), {1.0});
    CHECK(max_coeff_diff(col, 0.7 * basis_element(g, k)) < 1e-15);
  }
}

TEST_CASE("sigma: linearity, solenoidality, HS self-consistency") {
  const TorusGrid g(16, 16);
  const SigmaOperator sigma(mixed_model(), g);
  const auto u = testing::random_band_limited(g, 9);
  const std::vector<double> y{0.3, -1.2, 0.5}, z{-0.7, 0.1, 2.0};
  std::vector<double> comb(3);
  for (int i = 0; i < 3; ++i) comb[i] = 2.0 * y[i] - 0.5 * z[i];
  const auto lhs = sigma.apply(u, comb);
  SpectralField rhs = 2.0 * sigma.apply(u, y);
  rhs.axpy(-0.5, sigma.apply(u, z));
  CHECK(max_coeff_diff(lhs, rhs) <= 1e-14 * std::max(1.0, lhs.max_abs()));
  CHECK(lhs.max_divergence() <= 1e-14 * lhs.max_abs());

  const HsNorms h = hs_norms(sigma, u);
  double direct = 0.0;
  for (std::size_t k = 0; k < 3; ++k) {
    std::vector<double> e(3, 0.0);
    e[k] = 1.0;
    direct += l2_norm_sq(sigma.apply(u, e));
  }
  CHECK(h.l2 == doctest::Approx(direct).epsilon(1e-12));
  CHECK(h.hm1 <= h.l2);
  CHECK(h.l2 <= h.h01);
}

TEST_CASE("condition C constants") {
  auto m = NoiseModel::zero();
  m.m1_declared = 0.15;
  const auto k = condition_c_bounds(m);
  CHECK(k.k2 == doctest::Approx(0.165));
  CHECK(condition_c_gate(k).k2_ok);
  CHECK(k.k2t == doctest::Approx(0.33));
  CHECK(k.l2 == doctest::Approx(0.165));

  const auto zero = condition_c_bounds(NoiseModel::additive_single_mode({1, 0}, 1.0));
  CHECK(zero.k2 == 0.0);
  CHECK(zero.l2 == 0.0);
  CHECK(zero.k0 > 0.0);

  // Scaling the transport coefficients by lambda scales K2 by lambda^2.
  auto base = mixed_model();
  auto scaled = base;
  for (auto& r : scaled.c) r = r.scaled(3.0);
  CHECK(condition_c_bounds(scaled).k2 == doctest::Approx(9.0 * condition_c_bounds(base).k2).epsilon(1e-13));
}

TEST_CASE("condition C gates are strict") {
  ConditionCConstants c;
  c.k2 = 0.18;
  c.k2t = 0.39;
  c.l2 = 0.39;
  CHECK(condition_c_gate(c).existence());
  CHECK(condition_c_gate(c).uniqueness());
  c.k2 = 0.19;
  CHECK_FALSE(condition_c_gate(c).existence());
  c.k2 = 2.0 / 11.0;
  CHECK_FALSE(condition_c_gate(c).k2_ok);
  c.k2 = 0.18;
  c.l2 = 0.4;
  CHECK(condition_c_gate(c).existence());
  CHECK_FALSE(condition_c_gate(c).uniqueness());
}

TEST_CASE("analytic constants dominate sampled Hilbert-Schmidt norms") {
  const TorusGrid g(16, 16);
  const auto mixed = condition_c_empirical_check(mixed_model(), g, 300);
  CHECK(mixed.satisfied);
  CHECK(mixed.lhs > 0.0);
  MESSAGE("worst ratio (mixed model): " << mixed.lhs);

  const auto additive = condition_c_empirical_check(NoiseModel::additive_single_mode({1, 0}, 1.0), g, 50);
  CHECK(additive.satisfied);

  NoiseModel tanh = mixed_model();
  tanh.g = {Nonlinearity::Kind::Tanh, 1.0};
  CHECK(condition_c_empirical_check(tanh, g, 100).satisfied);
}
