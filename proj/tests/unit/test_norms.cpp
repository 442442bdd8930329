#include <cmath>
#include <random>

#include "ansflow/init.hpp"
#include "ansflow/norms.hpp"
#include "ansflow/spectral_ops.hpp"
#include "ansflow/transform.hpp"
#include "doctest.h"
#include "test_fields.hpp"

using namespace ansflow;

TEST_CASE("Sobolev norms of (sin x2, 0)") {
  const TorusGrid g(16, 16);
  const auto u = shear_x2(g);
  const double pi2 = kPi * kPi;
  CHECK(std::pow(sobolev_norm(u, 0, 0), 2) == doctest::Approx(2 * pi2).epsilon(1e-14));
  CHECK(l2_norm_sq(derivative(u, Axis::X2)) == doctest::Approx(2 * pi2).epsilon(1e-14));
  CHECK(std::pow(sobolev_norm(u, 0, 1), 2) == doctest::Approx(4 * pi2).epsilon(1e-14));
  CHECK(sobolev_norm(u, 1, 0, true) == 0.0);
  const SpectralField zero(g);
  for (double s : {0.0, 0.5, 1.0, 2.0}) {
    CHECK(sobolev_norm(zero, s, s) == 0.0);
    CHECK(sobolev_norm(zero, s, 1.0, true) == 0.0);
  }
}

TEST_CASE("norm consistency, monotonicity, interpolation on random fields") {
  const TorusGrid g(32, 16);
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> uni(0.0, 2.0);
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const auto u = testing::random_band_limited(g, seed);
    const double phys = inverse_transform(u).l2_sq();
    REQUIRE(std::abs(std::pow(sobolev_norm(u, 0, 0), 2) - phys) <= 1e-12 * phys);

    const double s = uni(rng), sp = uni(rng);
    const double t = s + uni(rng), tp = sp + uni(rng);
    REQUIRE(sobolev_norm(u, s, sp) <= sobolev_norm(u, t, tp) * (1 + 1e-15));

    const double half = std::pow(sobolev_norm(u, 0.5, 0), 2);
    REQUIRE(half <= sobolev_norm(u, 0, 0) * sobolev_norm(u, 1, 0) * (1 + 1e-14));

    const NormSquares ns = norm_squares(u);
    REQUIRE(ns.h01() == doctest::Approx(std::pow(sobolev_norm(u, 0, 1), 2)).epsilon(1e-13));
    REQUIRE(ns.h10() == doctest::Approx(std::pow(sobolev_norm(u, 1, 0), 2)).epsilon(1e-13));
  }
}

TEST_CASE("h01 inner product") {
  const TorusGrid g(16, 16);
  std::mt19937_64 rng(2);
  std::normal_distribution<double> n(0.0, 1.0);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto u = testing::random_band_limited(g, 2 * seed);
    const auto v = testing::random_band_limited(g, 2 * seed + 1);
    const auto w = testing::random_band_limited(g, 99 + seed);
    REQUIRE(h01_inner(u, u) == doctest::Approx(std::pow(sobolev_norm(u, 0, 1), 2)).epsilon(1e-13));
    REQUIRE(h01_inner(u, u) >= l2_norm_sq(u));
    REQUIRE(h01_inner(u, v) == doctest::Approx(h01_inner(v, u)).epsilon(1e-13));
    const double a = n(rng), b = n(rng);
    const SpectralField comb = a * u + b * v;
    const double lhs = h01_inner(comb, w);
    const double rhs = a * h01_inner(u, w) + b * h01_inner(v, w);
    REQUIRE(std::abs(lhs - rhs) <= 1e-12 * (std::abs(a) + std::abs(b)) * std::sqrt(h01_inner(w, w)) * 100);
  }
  CHECK_THROWS_AS(h01_inner(SpectralField(TorusGrid(8, 8)), SpectralField(g)), Error);
}

TEST_CASE("mixed norms: closed forms") {
  const TorusGrid g(16, 32);
  PhysicalField one(g);
  one.fill([](double, double) { return std::array{1.0, 0.0}; });
  CHECK(mixed_norm(one, 2, 4, MixedOrder::HorizontalOuter) == doctest::Approx(std::pow(kTwoPi, 0.75)).epsilon(1e-14));

  PhysicalField s(g);
  s.fill([](double, double x2) { return std::array{std::sin(x2), 0.0}; });
  const double l2 = std::sqrt(2 * kPi * kPi);
  CHECK(mixed_norm(s, 2, 2, MixedOrder::HorizontalOuter) == doctest::Approx(l2).epsilon(1e-14));
  CHECK(mixed_norm(s, 2, 2, MixedOrder::VerticalOuter) == doctest::Approx(l2).epsilon(1e-14));
  CHECK(mixed_norm(s, kInf, kInf, MixedOrder::VerticalOuter) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK_THROWS_AS(mixed_norm(s, 0.5, 2, MixedOrder::VerticalOuter), Error);
}

TEST_CASE("Minkowski ordering") {
  const TorusGrid g(16, 16);
  const auto f = testing::random_physical(g, 1);
  const auto eq = check_minkowski(f, 3, 3);
  CHECK(eq.satisfied);
  CHECK(eq.lhs == doctest::Approx(eq.rhs).epsilon(1e-13));

  const std::array<std::pair<double, double>, 5> pq{{{kInf, 2}, {4, 2}, {3, 1}, {kInf, 1}, {2, 1.5}}};
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const auto r = testing::random_physical(g, 10 + seed);
    for (auto [p, q] : pq) REQUIRE(check_minkowski(r, p, q).satisfied);
    // The reverse inequality for p <= q.
    for (auto [p, q] : pq) {
      REQUIRE(mixed_norm(r, q, p, MixedOrder::HorizontalOuter) >=
              mixed_norm(r, p, q, MixedOrder::VerticalOuter) * (1 - 1e-13));
    }
  }

  PhysicalField sep(g);
  sep.fill([](double x1, double x2) { return std::array{(2 + std::cos(x1)) * (1.5 + std::sin(2 * x2)), 0.0}; });
  const auto rs = check_minkowski(sep, kInf, 2);
  CHECK(rs.satisfied);
  CHECK(rs.lhs == doctest::Approx(rs.rhs).epsilon(1e-13));
  CHECK_THROWS_AS(check_minkowski(sep, 2, 3), Error);
}

TEST_CASE("anisotropic embedding: closed forms") {
  const TorusGrid g(32, 32);
  const double pi = kPi;
  // (0, sin x1): lhs = 2 pi, rhs = pi + 4 pi^2.
  const auto r = check_anisotropic_embedding(shear_x1(g));
  CHECK(r.satisfied);
  CHECK(r.lhs == doctest::Approx(2 * pi).epsilon(1e-13));
  CHECK(r.rhs == doctest::Approx(pi + 4 * pi * pi).epsilon(1e-13));
  CHECK(r.lhs / r.rhs < 1.0);

  // x1-independent field saturates the mean term: lhs = ||u||^2 / (2 pi).
  const auto flat = check_anisotropic_embedding(shear_x2(g));
  CHECK(flat.satisfied);
  CHECK(flat.lhs == doctest::Approx(l2_norm_sq(shear_x2(g)) / kTwoPi).epsilon(1e-13));
  CHECK(flat.lhs == doctest::Approx(flat.rhs).epsilon(1e-13));
  CHECK(std::isinf(*flat.auxiliary));

  CHECK_THROWS_AS(check_anisotropic_embedding(SpectralField(g)), Error);
}

TEST_CASE("anisotropic embedding: randomized audit, both orientations") {
  const TorusGrid g(32, 32);
  int violations = 0;
  double worst = 0.0;
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const auto u = random_solenoidal(g, seed, RandomFieldSpec{.band = 1 << 20, .width = 1.0 + seed % 7, .energy = 1.0});
    for (auto axis : {SupAxis::X1, SupAxis::X2}) {
      const auto rep = check_anisotropic_embedding(u, axis, std::to_string(seed));
      violations += rep.satisfied ? 0 : 1;
      worst = std::max(worst, rep.lhs / rep.rhs);
    }
  }
  CHECK(violations == 0);
  CHECK(worst <= 1.0);
}

TEST_CASE("norm report csv row") {
  NormReport r{.check = "x", .lhs = 1.5, .rhs = 2.0, .constant_used = 1.0, .slack = 0.0, .satisfied = true};
  CHECK(r.csv_row() == "x,1.5,2,1,pass");
  CHECK(NormReport::csv_header() == "check,lhs,rhs,constant,pass");
}
