#include "ansflow/noise.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <limits>
#include <sstream>

#include "ansflow/csv.hpp"
#include "ansflow/init.hpp"
#include "ansflow/spectral_ops.hpp"
#include "ansflow/transform.hpp"

namespace ansflow {

// ---------------------------------------------------------------- recipes

namespace {

class RecipeParser {
 public:
  explicit RecipeParser(std::string_view text) {
    for (char ch : text) {
      if (!std::isspace(static_cast<unsigned char>(ch))) s_.push_back(ch);
    }
  }

  FourierRecipe run() {
    FourierRecipe r;
    if (s_.empty() || s_ == "0") return r;
    bool first = true;
    while (pos_ < s_.size()) {
      double sign = 1.0;
      if (s_[pos_] == '+' || s_[pos_] == '-') {
        sign = s_[pos_] == '-' ? -1.0 : 1.0;
        ++pos_;
      } else if (!first) {
        fail("expected '+' or '-'");
      }
      first = false;
      const double a = sign * number();
      FourierTerm t;
      if (pos_ < s_.size() && s_[pos_] == '*') {
        ++pos_;
        const std::string fn = s_.substr(pos_, 4);
        if (fn != "cos(" && fn != "sin(") fail("expected cos( or sin(");
        pos_ += 4;
        t.m1 = integer();
        expect(',');
        t.m2 = integer();
        expect(')');
        (fn == "cos(" ? t.a_cos : t.a_sin) = a;
      } else {
        t.a_cos = a;
      }
      r.terms.push_back(t);
    }
    return r;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw Error("recipe '" + s_ + "': " + what + " at position " + std::to_string(pos_));
  }

  void expect(char ch) {
    if (pos_ >= s_.size() || s_[pos_] != ch) fail(std::string("expected '") + ch + "'");
    ++pos_;
  }

  double number() {
    double v = 0.0;
    const char* begin = s_.data() + pos_;
    auto [ptr, ec] = std::from_chars(begin, s_.data() + s_.size(), v);
    if (ec != std::errc() || ptr == begin) fail("expected a number");
    pos_ += static_cast<std::size_t>(ptr - begin);
    return v;
  }

  int integer() {
    int v = 0;
    const char* begin = s_.data() + pos_;
    auto [ptr, ec] = std::from_chars(begin, s_.data() + s_.size(), v);
    if (ec != std::errc() || ptr == begin) fail("expected an integer");
    pos_ += static_cast<std::size_t>(ptr - begin);
    return v;
  }

  std::string s_;
  std::size_t pos_ = 0;
};

std::string fmt(double v) { return format_double(v); }

}  // namespace

FourierRecipe FourierRecipe::parse(std::string_view text) { return RecipeParser(text).run(); }

FourierRecipe FourierRecipe::constant(double a) {
  FourierRecipe r;
  if (a != 0.0) r.terms.push_back({0, 0, a, 0.0});
  return r;
}

std::string FourierRecipe::to_string() const {
  std::string out;
  auto add = [&](double a, const std::string& tail) {
    if (a == 0.0) return;
    if (out.empty()) {
      out += fmt(a);
    } else {
      out += a < 0.0 ? " - " : " + ";
      out += fmt(std::abs(a));
    }
    out += tail;
  };
  for (const auto& t : terms) {
    const std::string m = "(" + std::to_string(t.m1) + "," + std::to_string(t.m2) + ")";
    if (t.m1 == 0 && t.m2 == 0) {
      add(t.a_cos, "");
    } else {
      add(t.a_cos, "*cos" + m);
      add(t.a_sin, "*sin" + m);
    }
  }
  return out.empty() ? "0" : out;
}

bool FourierRecipe::is_zero() const {
  return std::all_of(terms.begin(), terms.end(), [](const FourierTerm& t) {
    return t.a_cos == 0.0 && (t.a_sin == 0.0 || (t.m1 == 0 && t.m2 == 0));
  });
}

bool FourierRecipe::is_constant() const {
  return std::all_of(terms.begin(), terms.end(), [](const FourierTerm& t) {
    return (t.m1 == 0 && t.m2 == 0) || (t.a_cos == 0.0 && t.a_sin == 0.0);
  });
}

int FourierRecipe::band() const {
  int b = 0;
  for (const auto& t : terms) b = std::max({b, std::abs(t.m1), std::abs(t.m2)});
  return b;
}

double FourierRecipe::sup_bound() const {
  double s = 0.0;
  for (const auto& t : terms) s += (t.m1 == 0 && t.m2 == 0) ? std::abs(t.a_cos) : std::hypot(t.a_cos, t.a_sin);
  return s;
}

double FourierRecipe::sup_d1_bound() const {
  double s = 0.0;
  for (const auto& t : terms) s += std::abs(t.m1) * std::hypot(t.a_cos, t.a_sin);
  return s;
}

double FourierRecipe::sup_d2_bound() const {
  double s = 0.0;
  for (const auto& t : terms) s += std::abs(t.m2) * std::hypot(t.a_cos, t.a_sin);
  return s;
}

std::vector<double> FourierRecipe::sample(const TorusGrid& grid) const {
  std::vector<double> out(grid.size(), 0.0);
  for (int i1 = 0; i1 < grid.n1(); ++i1) {
    for (int i2 = 0; i2 < grid.n2(); ++i2) {
      double v = 0.0;
      for (const auto& t : terms) {
        const double phase = t.m1 * grid.x1(i1) + t.m2 * grid.x2(i2);
        v += t.a_cos * std::cos(phase) + t.a_sin * std::sin(phase);
      }
      out[grid.flat(i1, i2)] = v;
    }
  }
  return out;
}

FourierRecipe FourierRecipe::scaled(double lambda) const {
  FourierRecipe r = *this;
  for (auto& t : r.terms) {
    t.a_cos *= lambda;
    t.a_sin *= lambda;
  }
  return r;
}

// ---------------------------------------------------------------- g

double Nonlinearity::operator()(double s) const {
  switch (kind) {
    case Kind::Constant:
      return amplitude;
    case Kind::Sine:
      return amplitude * std::sin(s);
    case Kind::Tanh:
      return amplitude * std::tanh(s);
  }
  return 0.0;
}

double Nonlinearity::c_bound() const { return std::abs(amplitude); }

std::string Nonlinearity::to_string() const {
  const char* name = kind == Kind::Constant ? "const" : kind == Kind::Sine ? "sin" : "tanh";
  return std::string(name) + ":" + fmt(amplitude);
}

Nonlinearity Nonlinearity::parse(std::string_view text) {
  const auto colon = text.find(':');
  if (colon == std::string_view::npos) throw Error("nonlinearity '" + std::string(text) + "': expected kind:amplitude");
  const std::string_view kind = text.substr(0, colon);
  const std::string_view amp = text.substr(colon + 1);
  Nonlinearity g;
  if (kind == "const") {
    g.kind = Kind::Constant;
  } else if (kind == "sin") {
    g.kind = Kind::Sine;
  } else if (kind == "tanh") {
    g.kind = Kind::Tanh;
  } else {
    throw Error("nonlinearity '" + std::string(text) + "': kind must be const, sin or tanh");
  }
  auto [ptr, ec] = std::from_chars(amp.data(), amp.data() + amp.size(), g.amplitude);
  if (ec != std::errc() || ptr != amp.data() + amp.size()) {
    throw Error("nonlinearity '" + std::string(text) + "': bad amplitude");
  }
  return g;
}

// ---------------------------------------------------------------- model

double NoiseModel::m1_computed() const {
  double s = 0.0;
  for (const auto& r : c) s += r.c1_bound() * r.c1_bound();
  return s;
}

double NoiseModel::m2_computed() const {
  double sb = 0.0, sd = 0.0;
  for (const auto& r : b) {
    sb += r.sup_bound() * r.sup_bound();
    sd += r.sup_d2_bound() * r.sup_d2_bound();
  }
  return std::max(sb, sd);
}

bool NoiseModel::state_independent() const {
  return g.kind == Nonlinearity::Kind::Constant &&
         std::all_of(c.begin(), c.end(), [](const FourierRecipe& r) { return r.is_zero(); });
}

bool NoiseModel::is_zero() const {
  const bool no_transport = std::all_of(c.begin(), c.end(), [](const FourierRecipe& r) { return r.is_zero(); });
  const bool no_reaction = g.amplitude == 0.0 ||
                           std::all_of(b.begin(), b.end(), [](const FourierRecipe& r) { return r.is_zero(); });
  return no_transport && no_reaction;
}

int NoiseModel::band() const {
  int m = 0;
  for (const auto& r : c) m = std::max(m, r.band());
  for (const auto& r : b) m = std::max(m, r.band());
  return m;
}

void NoiseModel::validate() const {
  if (c.size() != b.size()) throw Error("noise model: c and b must list the same number of modes");
  if (c.empty()) throw Error("noise.modes must be at least 1");
  if (!(eta > 0.0)) throw Error("noise.eta must be positive");
  const double tol = 1e-12;
  if (m1_declared && *m1_declared < m1_computed() * (1 - tol)) {
    throw Error("noise.m1 = " + fmt(*m1_declared) + " is below the coefficient bound " + fmt(m1_computed()));
  }
  if (m2_declared && *m2_declared < m2_computed() * (1 - tol)) {
    throw Error("noise.m2 = " + fmt(*m2_declared) + " is below the coefficient bound " + fmt(m2_computed()));
  }
  if (cg_declared && *cg_declared < g.c_bound() * (1 - tol)) {
    throw Error("noise.cg = " + fmt(*cg_declared) + " is below C(g) = " + fmt(g.c_bound()));
  }
}

NoiseModel NoiseModel::zero(std::size_t n_modes) {
  NoiseModel m;
  m.c.assign(n_modes, FourierRecipe{});
  m.b.assign(n_modes, FourierRecipe{});
  m.g = {Nonlinearity::Kind::Constant, 0.0};
  return m;
}

FourierRecipe NoiseModel::additive_recipe(const Wavevector& k, double s) {
  if (k.k1 == k.k2) throw Error("additive noise: mode " + to_string(k) + " is orthogonal to (1,1)");
  const double norm = std::sqrt(static_cast<double>(k.norm_sq()));
  FourierRecipe r;
  r.terms.push_back({k.k1, k.k2, s * norm / ((k.k1 - k.k2) * std::sqrt(2.0) * kPi), 0.0});
  return r;
}

NoiseModel NoiseModel::additive_single_mode(const Wavevector& k, double s) {
  NoiseModel m;
  m.c = {FourierRecipe{}};
  m.b = {additive_recipe(k, s)};
  m.g = {Nonlinearity::Kind::Constant, 1.0};
  return m;
}

// ---------------------------------------------------------------- sigma

SigmaOperator::SigmaOperator(const NoiseModel& model, const TorusGrid& grid) : model_(model), grid_(grid) {
  model_.validate();
  const int limit = std::min(grid.band1(), grid.band2());
  if (model_.band() > limit) {
    throw Error("noise coefficients reach |m| = " + std::to_string(model_.band()) + ", beyond the grid band " +
                std::to_string(limit));
  }
  for (const auto& r : model_.c) c_samples_.push_back(r.is_zero() ? std::vector<double>{} : r.sample(grid));
  for (const auto& r : model_.b) b_samples_.push_back(r.is_zero() ? std::vector<double>{} : r.sample(grid));
  if (model_.state_independent()) {
    const SpectralField zero(grid);
    std::vector<double> y(model_.n_modes(), 0.0);
    for (std::size_t k = 0; k < model_.n_modes(); ++k) {
      y.assign(y.size(), 0.0);
      y[k] = 1.0;
      cached_columns_.push_back(apply(zero, y));
    }
  }
}

SpectralField SigmaOperator::apply(const SpectralField& u, const std::vector<double>& y) const {
  if (y.size() != model_.n_modes()) throw Error("apply_sigma: increment length does not match noise.modes");
  if (!(u.grid() == grid_)) throw Error("apply_sigma: grid mismatch");
  SpectralField out(grid_);
  if (cached_columns_.size() == y.size()) {
    for (std::size_t k = 0; k < y.size(); ++k) {
      if (y[k] != 0.0) out.axpy(y[k], cached_columns_[k]);
    }
    return out;
  }

  const std::size_t n = grid_.size();
  std::vector<double> cfield(n, 0.0), bfield(n, 0.0);
  bool any_c = false, any_b = false;
  for (std::size_t k = 0; k < y.size(); ++k) {
    if (y[k] == 0.0) continue;
    if (!c_samples_[k].empty()) {
      any_c = true;
      for (std::size_t i = 0; i < n; ++i) cfield[i] += y[k] * c_samples_[k][i];
    }
    if (!b_samples_[k].empty()) {
      any_b = true;
      for (std::size_t i = 0; i < n; ++i) bfield[i] += y[k] * b_samples_[k][i];
    }
  }
  if (!any_c && !any_b) return out;

  thread_local std::vector<double> d1u, ug, acc;
  d1u.resize(n);
  ug.resize(n);
  acc.resize(n);
  const SpectralField du = any_c ? mixed_derivative(u, 1, 0) : SpectralField(grid_);
  for (int comp = 0; comp < 2; ++comp) {
    std::fill(acc.begin(), acc.end(), 0.0);
    if (any_c) {
      synthesize(grid_, du.component(comp), d1u);
      for (std::size_t i = 0; i < n; ++i) acc[i] += cfield[i] * d1u[i];
    }
    if (any_b) {
      if (model_.g.kind == Nonlinearity::Kind::Constant) {
        for (std::size_t i = 0; i < n; ++i) acc[i] += bfield[i] * model_.g.amplitude;
      } else {
        synthesize(grid_, u.component(comp), ug);
        for (std::size_t i = 0; i < n; ++i) acc[i] += bfield[i] * model_.g(ug[i]);
      }
    }
    analyze(grid_, acc, out.component(comp));
  }
  dealias_inplace(out);
  leray_project_inplace(out);
  return out;
}

SpectralField SigmaOperator::column(const SpectralField& u, std::size_t k) const {
  if (k >= model_.n_modes()) throw Error("sigma column index out of range");
  if (cached_columns_.size() == model_.n_modes()) return cached_columns_[k];
  std::vector<double> y(model_.n_modes(), 0.0);
  y[k] = 1.0;
  return apply(u, y);
}

SpectralField apply_sigma(const NoiseModel& model, const SpectralField& u, const std::vector<double>& y) {
  return SigmaOperator(model, u.grid()).apply(u, y);
}

// ---------------------------------------------------------------- Condition C

ConditionCConstants condition_c_bounds(const NoiseModel& model) {
  const double eta = model.eta;
  const double m1 = model.m1();
  const double m2 = model.m2();
  const double cg = model.cg();
  const double r = m2 * cg * cg;  // reaction scale
  const double pi2 = kPi * kPi;
  const double a = 1.0 + eta;
  const double p = 1.0 + 1.0 / eta;
  ConditionCConstants k;
  // ||(1,1)||_{L2} = 2 pi sqrt(2) enters every constant term through g(0).
  k.k1p = a * std::pow(std::sqrt(m1) + std::sqrt(m2) * cg, 2);
  k.k0p = p * 8.0 * pi2 * r;
  k.k2 = a * m1;
  k.k1 = 2.0 * p * r;
  k.k0 = 16.0 * pi2 * p * r;
  k.k2t = 2.0 * a * m1;
  k.k1t = 6.0 * p * r;
  k.k0t = 48.0 * pi2 * p * r;
  k.l2 = a * m1;
  k.l1 = p * r;
  return k;
}

GateVerdict condition_c_gate(const ConditionCConstants& c) {
  GateVerdict v;
  v.k2_ok = c.k2 < 2.0 / 11.0;
  v.k2t_ok = c.k2t < 2.0 / 5.0;
  v.l2_ok = c.l2 < 2.0 / 5.0;
  return v;
}

HsNorms hs_norms(const SigmaOperator& sigma, const SpectralField& u) {
  HsNorms h;
  for (std::size_t k = 0; k < sigma.model().n_modes(); ++k) {
    const SpectralField col = sigma.column(u, k);
    const NormSquares ns = norm_squares(col);
    h.hm1 += h_minus1_norm_sq(col);
    h.l2 += ns.l2;
    h.h01 += ns.h01();
  }
  return h;
}

namespace {

double ratio(double lhs, double rhs) {
  if (lhs == 0.0) return 0.0;
  if (rhs <= 0.0) return std::numeric_limits<double>::infinity();
  return lhs / rhs;
}

}  // namespace

NormReport condition_c_empirical_check(const NoiseModel& model, const TorusGrid& grid, std::size_t sample_count,
                                       std::uint64_t seed) {
  if (sample_count < 1) throw Error("condition_c_empirical_check: sample_count must be at least 1");
  const SigmaOperator sigma(model, grid);
  const ConditionCConstants k = condition_c_bounds(model);
  static const char* const kNames[] = {"growth_hm1", "growth_l2", "growth_h01", "lipschitz"};

  NormReport rep;
  rep.check = "condition_c";
  rep.rhs = 1.0;
  rep.constant_used = 1.0;
  rep.slack = 1e-12;
  double worst = 0.0;
  for (std::size_t s = 0; s < sample_count; ++s) {
    const double energy = std::pow(10.0, -2.0 + 4.0 * static_cast<double>(s % 9) / 8.0);
    const RandomFieldSpec spec{.band = 1 << 20, .width = 1.0 + static_cast<double>(s % 5), .energy = energy};
    const SpectralField u = s == 0 ? SpectralField(grid) : random_solenoidal(grid, seed + 2 * s, spec);
    const SpectralField v = s % 3 == 1 ? u : random_solenoidal(grid, seed + 2 * s + 1, spec);

    const NormSquares nu = norm_squares(u);
    const HsNorms h = hs_norms(sigma, u);
    double lip = 0.0;
    if (!(u == v)) {
      for (std::size_t m = 0; m < model.n_modes(); ++m) lip += l2_norm_sq(sigma.column(u, m) - sigma.column(v, m));
    }
    const NormSquares nw = norm_squares(u - v);
    const double r[4] = {
        ratio(h.hm1, k.k0p + k.k1p * nu.l2),
        ratio(h.l2, k.k0 + k.k1 * nu.l2 + k.k2 * nu.d1),
        ratio(h.h01, k.k0t + k.k1t * nu.h01() + k.k2t * (nu.d1 + nu.d1d2)),
        ratio(lip, k.l1 * nw.l2 + k.l2 * nw.d1),
    };
    for (int i = 0; i < 4; ++i) {
      if (r[i] > worst) {
        worst = r[i];
        rep.witness = std::string(kNames[i]) + "@sample" + std::to_string(s);
      }
    }
  }
  rep.lhs = worst;
  rep.satisfied = worst <= 1.0 + rep.slack;
  if (rep.satisfied) rep.witness.clear();
  return rep;
}

}  // namespace ansflow
