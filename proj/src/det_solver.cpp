#include "ansflow/det_solver.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include "ansflow/basis.hpp"
#include "ansflow/norms.hpp"
#include "ansflow/simd.hpp"
#include "ansflow/spectral_ops.hpp"
#include "ansflow/transform.hpp"

namespace ansflow {

std::string to_string(Integrator integrator) {
  switch (integrator) {
    case Integrator::IfEuler:
      return "if-euler";
    case Integrator::IfRk2:
      return "if-rk2";
    case Integrator::IfRk4:
      return "if-rk4";
  }
  return "?";
}

Integrator parse_integrator(std::string_view name) {
  if (name == "if-euler") return Integrator::IfEuler;
  if (name == "if-rk2") return Integrator::IfRk2;
  if (name == "if-rk4") return Integrator::IfRk4;
  throw Error("unknown integrator '" + std::string(name) + "' (expected if-euler, if-rk2 or if-rk4)");
}

void DetConfig::validate() const {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw Error("time.dt must be positive");
  if (!(t_end >= dt) || !std::isfinite(t_end)) throw Error("time.t_end must be at least time.dt");
  if (!(eps_v >= 0.0) || !std::isfinite(eps_v)) throw Error("det.eps_v must be nonnegative");
  if (snapshot_every < 0) throw Error("output.snapshot_every must be nonnegative");
}

std::size_t DetConfig::steps() const {
  return static_cast<std::size_t>(std::ceil(t_end / dt - 1e-9));
}

double h01_cross_ratio(double cross, double d1_sq, double d2_sq, double d1d2_sq) {
  const double denom = std::sqrt(d1d2_sq * d1_sq * d2_sq);
  if (cross == 0.0) return 0.0;
  if (denom == 0.0) return std::numeric_limits<double>::infinity();
  return std::abs(cross) / denom;
}

void DiagnosticsSeries::append(double time, const SpectralField& u) {
  append(time, u, d2_inner(nonlinear_term(u), u));
}

void DiagnosticsSeries::append(double time, const SpectralField& u, double cr) {
  const NormSquares ns = norm_squares(u);
  if (!t.empty()) {
    const double h = time - t.back();
    int_d1_sq.push_back(int_d1_sq.back() + 0.5 * h * (d1_sq.back() + ns.d1));
    int_d2_sq.push_back(int_d2_sq.back() + 0.5 * h * (d2_sq.back() + ns.d2));
    int_d1d2_sq.push_back(int_d1d2_sq.back() + 0.5 * h * (d1d2_sq.back() + ns.d1d2));
  } else {
    int_d1_sq.push_back(0.0);
    int_d2_sq.push_back(0.0);
    int_d1d2_sq.push_back(0.0);
  }
  t.push_back(time);
  l2_sq.push_back(ns.l2);
  d1_sq.push_back(ns.d1);
  d2_sq.push_back(ns.d2);
  d1d2_sq.push_back(ns.d1d2);
  cross.push_back(cr);
  c_emp.push_back(h01_cross_ratio(cr, ns.d1, ns.d2, ns.d1d2));
}

SpectralField mollify(const SpectralField& u0, double eps) {
  if (!(eps > 0.0)) throw Error("mollify: eps must be positive");
  const auto& sym = symbols(u0.grid());
  std::vector<double> m(u0.size());
  for (std::size_t i = 0; i < m.size(); ++i) m[i] = std::exp(-eps * eps * sym.ksq[i]);
  SpectralField out = u0;
  const auto& k = simd::active();
  for (int c = 0; c < 2; ++c) k.scale(out.component(c).data(), m.data(), out.size());
  return out;
}

DetStepper::DetStepper(const TorusGrid& grid, const DetConfig& cfg) : grid_(grid), cfg_(cfg) {
  cfg_.validate();
  const auto& sym = symbols(grid);
  e_full_.resize(grid.size());
  e_half_.resize(grid.size());
  const double e2 = cfg.eps_v * cfg.eps_v;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double l = -sym.k1sq[i] - e2 * sym.k2sq[i];
    e_full_[i] = std::exp(l * cfg.dt);
    e_half_[i] = std::exp(0.5 * l * cfg.dt);
  }
}

SpectralField DetStepper::nonlinearity(const SpectralField& u) const {
  SpectralField n = advection(u, u, cfg_.dealias);
  leray_project_inplace(n);
  remove_mean(n);
  n *= -1.0;
  return n;
}

void DetStepper::apply_linear(SpectralField& u, bool half) const {
  const auto& k = simd::active();
  const double* m = half ? e_half_.data() : e_full_.data();
  for (int c = 0; c < 2; ++c) k.scale(u.component(c).data(), m, u.size());
}

SpectralField DetStepper::step(const SpectralField& u) const {
  const double dt = cfg_.dt;
  switch (cfg_.integrator) {
    case Integrator::IfEuler: {
      SpectralField out = u;
      out.axpy(dt, nonlinearity(u));
      apply_linear(out);
      return out;
    }
    case Integrator::IfRk2: {
      const SpectralField k1 = nonlinearity(u);
      SpectralField pred = u;
      pred.axpy(dt, k1);
      apply_linear(pred);
      const SpectralField k2 = nonlinearity(pred);
      SpectralField out = u;
      out.axpy(0.5 * dt, k1);
      apply_linear(out);
      out.axpy(0.5 * dt, k2);
      return out;
    }
    case Integrator::IfRk4: {
      const SpectralField a = nonlinearity(u);
      SpectralField s = u;
      s.axpy(0.5 * dt, a);
      apply_linear(s, true);
      const SpectralField b = nonlinearity(s);
      SpectralField eu = u;
      apply_linear(eu, true);  // exp(L dt/2) u
      s = eu;
      s.axpy(0.5 * dt, b);
      const SpectralField c = nonlinearity(s);
      SpectralField ec = c;
      apply_linear(ec, true);
      SpectralField eeu = eu;
      apply_linear(eeu, true);  // exp(L dt) u
      s = eeu;
      s.axpy(dt, ec);
      const SpectralField d = nonlinearity(s);
      // exp(L dt) u + dt/6 (E a + 2 E_h (b + c) + d)
      SpectralField acc = a;
      apply_linear(acc);
      SpectralField bc = b;
      bc += c;
      apply_linear(bc, true);
      acc.axpy(2.0, bc);
      acc += d;
      SpectralField out = eeu;
      out.axpy(dt / 6.0, acc);
      return out;
    }
  }
  throw Error("unreachable integrator");
}

SpectralField step_det(const SpectralField& u, const DetConfig& cfg) { return DetStepper(u.grid(), cfg).step(u); }

namespace {

void require_initial_data(const SpectralField& u0, const char* who) {
  const double scale = std::max(1.0, u0.max_abs());
  if (!u0.is_finite()) throw Error(std::string(who) + ": initial data is not finite");
  if (!u0.is_solenoidal()) throw Error(std::string(who) + ": initial data is not divergence free");
  if (std::abs(u0(0, 0)) > 1e-14 * scale || std::abs(u0(1, 0)) > 1e-14 * scale) {
    throw Error(std::string(who) + ": initial data must have zero mean");
  }
}

void check_blowup(const SpectralField& u, double l2_sq, double l2_initial, double last_time) {
  if (!u.is_finite() || !std::isfinite(l2_sq)) {
    throw BlowUpError("non-finite state after t = " + std::to_string(last_time), last_time);
  }
  if (l2_initial > 0.0 && l2_sq > 1e12 * l2_initial) {
    throw BlowUpError("L2 norm exceeded 1e6 times its initial value after t = " + std::to_string(last_time),
                      last_time);
  }
}

}  // namespace

Trajectory run_det(const SpectralField& u0, const DetConfig& cfg) {
  cfg.validate();
  require_initial_data(u0, "run_det");
  const DetStepper stepper(u0.grid(), cfg);
  const std::size_t n_steps = cfg.steps();

  Trajectory tr;
  tr.eps_v = cfg.eps_v;
  tr.dt = cfg.dt;
  tr.times.push_back(0.0);
  tr.states.push_back(u0);
  tr.diagnostics.append(0.0, u0);
  const double l2_0 = tr.diagnostics.l2_sq.front();

  SpectralField u = u0;
  for (std::size_t n = 1; n <= n_steps; ++n) {
    u = stepper.step(u);
    const double t = static_cast<double>(n) * cfg.dt;
    check_blowup(u, l2_norm_sq(u), l2_0, static_cast<double>(n - 1) * cfg.dt);
    tr.diagnostics.append(t, u);
    const bool snap = cfg.snapshot_every > 0 && n % static_cast<std::size_t>(cfg.snapshot_every) == 0;
    if (snap || n == n_steps) {
      tr.times.push_back(t);
      tr.states.push_back(u);
    }
  }
  return tr;
}

std::vector<double> energy_certificate(const Trajectory& traj) {
  const auto& d = traj.diagnostics;
  std::vector<double> r(d.size());
  const double e2 = traj.eps_v * traj.eps_v;
  for (std::size_t i = 0; i < d.size(); ++i) {
    r[i] = d.l2_sq[i] + 2.0 * d.int_d1_sq[i] + 2.0 * e2 * d.int_d2_sq[i] - d.l2_sq.front();
  }
  return r;
}

H01Certificate h01_certificate(const DiagnosticsSeries& diag, double slack_factor) {
  H01Certificate c;
  if (diag.size() == 0) return c;
  for (double v : diag.c_emp) c.c_emp_sup = std::max(c.c_emp_sup, v);
  c.constant = 0.5 * c.c_emp_sup * c.c_emp_sup;
  c.weighted.resize(diag.size());
  for (std::size_t i = 0; i < diag.size(); ++i) {
    const double expo = 2.0 * c.constant * diag.int_d1_sq[i];
    c.weighted[i] = expo == 0.0 ? diag.d2_sq[i] : std::exp(-expo) * diag.d2_sq[i];
  }
  c.slack = slack_factor * c.weighted.front();
  c.monotone = true;
  c.growth_bound = true;
  c.max_step_increase = 0.0;
  for (std::size_t i = 1; i < diag.size(); ++i) {
    const double inc = c.weighted[i] - c.weighted[i - 1];
    c.max_step_increase = std::max(c.max_step_increase, inc);
    if (inc > c.slack) c.monotone = false;
    const double expo = 2.0 * c.constant * diag.int_d1_sq[i];
    const double bound = diag.d2_sq.front() * (expo == 0.0 ? 1.0 : std::exp(expo));
    if (diag.d2_sq[i] > bound * (1.0 + slack_factor) + c.slack) c.growth_bound = false;
  }
  c.int_d1d2_final = diag.int_d1d2_sq.back();
  if (!std::isfinite(c.int_d1d2_final)) c.growth_bound = false;
  return c;
}

TimeProfile TimeProfile::constant() {
  return {[](double) { return 1.0; }, [](double) { return 0.0; }};
}

TimeProfile TimeProfile::cosine(double omega) {
  return {[omega](double t) { return std::cos(omega * t); },
          [omega](double t) { return -omega * std::sin(omega * t); }};
}

double weak_form_residual(const Trajectory& traj, const Wavevector& test_mode, const TimeProfile& profile) {
  if (traj.states.empty()) throw Error("weak_form_residual: empty trajectory");
  if (traj.states.size() != traj.diagnostics.size()) {
    throw Error("weak_form_residual: trajectory must store a state at every step (snapshot_every = 1)");
  }
  if (test_mode.is_zero()) throw Error("weak_form_residual: test mode k = 0 has no divergence-free basis element");
  const TorusGrid& g = traj.states.front().grid();
  const Wavevector rep = test_mode.is_positive() ? test_mode : -test_mode;
  if (!g.in_band(rep)) throw Error("weak_form_residual: test mode " + to_string(test_mode) + " is outside the band");
  const double k1sq = static_cast<double>(rep.k1) * rep.k1;
  const double k2sq = static_cast<double>(rep.k2) * rep.k2;
  const double e2 = traj.eps_v * traj.eps_v;

  const std::array<SpectralField, 2> e{basis_element(g, BasisIndex{rep, false}), basis_element(g, BasisIndex{rep, true})};
  const std::size_t n = traj.states.size();
  std::array<double, 2> integral{0.0, 0.0};
  std::array<double, 2> prev{0.0, 0.0};
  std::array<double, 2> a0{0.0, 0.0};
  std::array<double, 2> a_last{0.0, 0.0};
  for (std::size_t i = 0; i < n; ++i) {
    const SpectralField& u = traj.states[i];
    const SpectralField b = nonlinear_term(u);
    const double t = traj.times[i];
    const double chi = profile.value(t);
    const double dchi = profile.derivative(t);
    for (int j = 0; j < 2; ++j) {
      const double a = l2_inner(u, e[j]);
      const double f = -a * dchi + chi * ((k1sq + e2 * k2sq) * a + l2_inner(b, e[j]));
      if (i > 0) integral[j] += 0.5 * (traj.times[i] - traj.times[i - 1]) * (prev[j] + f);
      prev[j] = f;
      if (i == 0) a0[j] = a;
      a_last[j] = a;
    }
  }
  const double chi0 = profile.value(traj.times.front());
  const double chi_t = profile.value(traj.times.back());
  const double r0 = integral[0] - a0[0] * chi0 + a_last[0] * chi_t;
  const double r1 = integral[1] - a0[1] * chi0 + a_last[1] * chi_t;
  return std::hypot(r0, r1);
}

double uniqueness_ratio(const SpectralField& w, const SpectralField& v, const SpectralField& w_dot_grad_v) {
  const double num = std::abs(l2_inner(w_dot_grad_v, w));
  if (num == 0.0) return 0.0;
  const NormSquares nw = norm_squares(w);
  const NormSquares nv = norm_squares(v);
  const double denom = std::pow(nw.l2, 0.75) * std::pow(nw.d1, 0.25) *
                       (std::pow(nv.d1, 0.25) + std::pow(nv.d2, 0.25)) * std::pow(nv.d1d2, 0.25);
  if (denom == 0.0) return std::numeric_limits<double>::infinity();
  return num / denom;
}

UniquenessReport uniqueness_experiment(const SpectralField& u0, const SpectralField& v0, const DetConfig& cfg,
                                       double tolerance) {
  cfg.validate();
  require_initial_data(u0, "uniqueness_experiment");
  require_initial_data(v0, "uniqueness_experiment");
  if (!(u0.grid() == v0.grid())) throw Error("uniqueness_experiment: grid mismatch");
  const DetStepper stepper(u0.grid(), cfg);
  const std::size_t n_steps = cfg.steps();

  UniquenessReport rep;
  rep.tolerance = tolerance;
  rep.bitwise_identical = true;
  std::vector<double> integrand;
  SpectralField u = u0;
  SpectralField v = v0;
  const double l2_0 = std::max(l2_norm_sq(u0), l2_norm_sq(v0));
  auto record = [&](double t) {
    const SpectralField w = u - v;
    if (!(u == v)) rep.bitwise_identical = false;
    rep.t.push_back(t);
    rep.w_sq.push_back(l2_norm_sq(w));
    rep.c_sup = std::max(rep.c_sup, uniqueness_ratio(w, v, advection(w, v)));
    const NormSquares nv = norm_squares(v);
    integrand.push_back((std::cbrt(nv.d1) + std::cbrt(nv.d2)) * std::cbrt(nv.d1d2));
  };
  record(0.0);
  for (std::size_t n = 1; n <= n_steps; ++n) {
    const double last = static_cast<double>(n - 1) * cfg.dt;
    u = stepper.step(u);
    v = stepper.step(v);
    check_blowup(u, l2_norm_sq(u), l2_0, last);
    check_blowup(v, l2_norm_sq(v), l2_0, last);
    record(static_cast<double>(n) * cfg.dt);
  }

  rep.c0 = 0.75 * std::pow(rep.c_sup, 4.0 / 3.0);
  rep.exponent.assign(rep.t.size(), 0.0);
  double integral = 0.0;
  for (std::size_t i = 1; i < rep.t.size(); ++i) {
    integral += 0.5 * (rep.t[i] - rep.t[i - 1]) * (integrand[i] + integrand[i - 1]);
    rep.exponent[i] = integral == 0.0 ? 0.0 : 2.0 * rep.c0 * integral;
  }
  const double w0 = rep.w_sq.front();
  rep.satisfied = true;
  for (std::size_t i = 0; i < rep.t.size(); ++i) {
    if (w0 == 0.0) {
      if (rep.w_sq[i] != 0.0) rep.satisfied = false;
      continue;
    }
    const double bound = w0 * std::exp(rep.exponent[i]);
    const double ratio = rep.w_sq[i] / bound;
    rep.worst_ratio = std::max(rep.worst_ratio, std::isnan(ratio) ? 0.0 : ratio);
    if (rep.w_sq[i] > bound * (1.0 + tolerance)) rep.satisfied = false;
  }
  return rep;
}

EpsilonSweep epsilon_sweep(const SpectralField& u0, const DetConfig& cfg, const std::vector<double>& eps) {
  DetConfig base = cfg;
  base.eps_v = 0.0;
  base.snapshot_every = 1;
  const Trajectory ref = run_det(u0, base);

  EpsilonSweep out;
  out.eps = eps;
  for (double e : eps) {
    DetConfig c = base;
    c.eps_v = e;
    const Trajectory tr = run_det(mollify(u0, e), c);
    double integral = 0.0;
    double prev = 0.0;
    for (std::size_t i = 0; i < tr.states.size(); ++i) {
      const double d = l2_norm_sq(tr.states[i] - ref.states[i]);
      if (i > 0) integral += 0.5 * (tr.times[i] - tr.times[i - 1]) * (prev + d);
      prev = d;
    }
    out.distance.push_back(std::sqrt(integral));
  }
  out.strictly_decreasing = true;
  for (std::size_t i = 1; i < out.distance.size(); ++i) {
    if (!(out.distance[i] < out.distance[i - 1])) out.strictly_decreasing = false;
  }
  return out;
}

double cfl_dt(const SpectralField& u, double safety) {
  const PhysicalField f = inverse_transform(u);
  double vmax = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) vmax = std::max(vmax, std::hypot(f.component(0)[i], f.component(1)[i]));
  if (vmax == 0.0) return std::numeric_limits<double>::infinity();
  return safety * std::min(f.grid().dx1(), f.grid().dx2()) / vmax;
}

}  // namespace ansflow
