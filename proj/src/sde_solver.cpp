#include "ansflow/sde_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "ansflow/norms.hpp"
#include "ansflow/spectral_ops.hpp"

namespace ansflow {

void SdeConfig::validate() const {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw Error("sde.dt must be positive");
  if (!(t_end >= 0.0) || !std::isfinite(t_end)) throw Error("sde.t_end must be nonnegative");
  if (galerkin_n < 1) throw Error("sde.galerkin_n must be at least 1");
  if (!(alpha_tilde > 0.0 && alpha_tilde < 1.0)) throw Error("sde.alpha_tilde must lie in (0, 1)");
  if (!(alpha_hat > 0.0 && alpha_hat < 1.0)) throw Error("sde.alpha_hat must lie in (0, 1)");
  if (snapshot_every < 0) throw Error("sde.snapshot_every must be nonnegative");
}

std::size_t SdeConfig::steps() const { return static_cast<std::size_t>(std::ceil(t_end / dt - 1e-9)); }

void StochasticDiagnostics::finalize(double alpha_tilde) {
  double c_sup = 0.0;
  for (double c : c_emp) c_sup = std::max(c_sup, c);
  c_alpha = c_sup * c_sup / (4.0 * alpha_tilde);
  const std::size_t n = size();
  h_t.assign(n, 0.0);
  weighted_h01.assign(n, 0.0);
  int_weighted_h11.assign(n, 0.0);
  std::vector<double> integrand(n);
  for (std::size_t i = 0; i < n; ++i) {
    h_t[i] = int_d1_sq[i] == 0.0 ? 0.0 : 2.0 * c_alpha * int_d1_sq[i];
    const double w = std::exp(-h_t[i]);
    weighted_h01[i] = w * (l2_sq[i] + d2_sq[i]);
    integrand[i] = w * (l2_sq[i] + d1_sq[i] + d2_sq[i] + d1d2_sq[i]);
    if (i > 0) int_weighted_h11[i] = int_weighted_h11[i - 1] + 0.5 * (t[i] - t[i - 1]) * (integrand[i] + integrand[i - 1]);
  }
}

namespace {

DetConfig drift_config(const SdeConfig& cfg) {
  DetConfig d;
  d.dt = cfg.dt;
  d.t_end = cfg.t_end;
  d.integrator = Integrator::IfEuler;
  return d;
}

void require_galerkin_data(const SpectralField& u0, const GalerkinSpace& space, const char* who) {
  if (!u0.is_finite()) throw Error(std::string(who) + ": initial data is not finite");
  if (!u0.is_solenoidal()) throw Error(std::string(who) + ": initial data is not divergence free");
  const double scale = std::max(1.0, u0.max_abs());
  if (space.outside_residual(u0) > 1e-13 * scale) {
    throw Error(std::string(who) + ": initial data lies outside the level-" + std::to_string(space.level()) +
                " Galerkin span; project it first");
  }
}

void check_blowup(const SpectralField& u, double l2_sq, double l2_ref, double last_time) {
  if (!u.is_finite() || !std::isfinite(l2_sq)) {
    throw BlowUpError("non-finite state after t = " + std::to_string(last_time), last_time);
  }
  if (l2_sq > 1e12 * std::max(l2_ref, 1.0)) {
    throw BlowUpError("L2 norm exceeded 1e6 times its reference value after t = " + std::to_string(last_time),
                      last_time);
  }
}

}  // namespace

SdeStepper::SdeStepper(const NoiseModel& model, const TorusGrid& grid, const SdeConfig& cfg)
    : cfg_(cfg), det_(grid, drift_config(cfg)), space_(grid, cfg.galerkin_n), sigma_(model, grid) {
  cfg_.validate();
  if (model.state_independent()) {
    for (std::size_t k = 0; k < model.n_modes(); ++k) {
      SpectralField col = sigma_.column(SpectralField(grid), k);
      space_.project_inplace(col);
      hs_const_ += l2_norm_sq(col);
      columns_.push_back(std::move(col));
    }
  }
}

double SdeStepper::hs_norm_sq(const SpectralField& u) const {
  if (!columns_.empty() || sigma_.model().n_modes() == 0) return hs_const_;
  double s = 0.0;
  for (std::size_t k = 0; k < sigma_.model().n_modes(); ++k) {
    SpectralField col = sigma_.column(u, k);
    space_.project_inplace(col);
    s += l2_norm_sq(col);
  }
  return s;
}

SpectralField SdeStepper::step(const SpectralField& u, RngState& rng, SdeStepInfo* info) const {
  std::vector<double> y(sigma_.model().n_modes());
  sample_wiener_increment(cfg_.dt, rng, y);

  SpectralField out = u;
  double cross = 0.0;
  if (!cfg_.drop_nonlinearity) {
    const SpectralField n = det_.nonlinearity(u);
    cross = -d2_inner(n, u);
    out.axpy(cfg_.dt, n);
    space_.project_inplace(out);
  }

  SpectralField noise(u.grid());
  if (!columns_.empty()) {
    for (std::size_t k = 0; k < y.size(); ++k) noise.axpy(y[k], columns_[k]);
  } else {
    noise = sigma_.apply(u, y);
    space_.project_inplace(noise);
  }
  out += noise;
  det_.apply_linear(out);

  if (info != nullptr) {
    info->noise = std::move(noise);
    info->cross = cross;
    info->hs = cfg_.record_hs ? hs_norm_sq(u) : 0.0;
  }
  return out;
}

SpectralField step_sde(const SpectralField& u, const NoiseModel& model, const SdeConfig& cfg, RngState& rng) {
  return SdeStepper(model, u.grid(), cfg).step(u, rng);
}

SdeTrajectory run_sde(const SpectralField& u0, const NoiseModel& model, const SdeConfig& cfg) {
  cfg.validate();
  const SdeStepper stepper(model, u0.grid(), cfg);
  require_galerkin_data(u0, stepper.space(), "run_sde");
  const std::size_t n_steps = cfg.steps();

  SdeTrajectory tr;
  tr.dt = cfg.dt;
  tr.times.push_back(0.0);
  tr.states.push_back(u0);
  auto& diag = tr.diagnostics;

  RngState rng{cfg.seed, 0};
  SdeStepInfo info(u0.grid());
  SpectralField u = u0;
  const double l2_0 = l2_norm_sq(u0);
  double pending_work = 0.0;
  for (std::size_t n = 1; n <= n_steps; ++n) {
    const double t_prev = static_cast<double>(n - 1) * cfg.dt;
    SpectralField next = stepper.step(u, rng, &info);
    diag.append(t_prev, u, info.cross);
    diag.hs_norm_sq.push_back(info.hs);
    diag.noise_work.push_back(pending_work);
    pending_work = 2.0 * l2_inner(info.noise, u) + l2_norm_sq(info.noise);
    check_blowup(next, l2_norm_sq(next), l2_0, t_prev);
    u = std::move(next);
    const bool snap = cfg.snapshot_every > 0 && n % static_cast<std::size_t>(cfg.snapshot_every) == 0;
    if (snap || n == n_steps) {
      tr.times.push_back(static_cast<double>(n) * cfg.dt);
      tr.states.push_back(u);
    }
  }
  const double cross = cfg.drop_nonlinearity ? 0.0 : d2_inner(nonlinear_term(u), u);
  diag.append(static_cast<double>(n_steps) * cfg.dt, u, cross);
  diag.hs_norm_sq.push_back(cfg.record_hs ? stepper.hs_norm_sq(u) : 0.0);
  diag.noise_work.push_back(pending_work);
  diag.finalize(cfg.alpha_tilde);
  return tr;
}

WeightedSeries weighted_h01_series(const StochasticDiagnostics& diag) {
  if (diag.weighted_h01.size() != diag.size()) throw Error("weighted_h01_series: diagnostics not finalized");
  WeightedSeries s;
  s.t = diag.t;
  s.weighted = diag.weighted_h01;
  s.int_weighted_h11 = diag.int_weighted_h11;
  s.running_sup.resize(s.weighted.size());
  s.weight_nonincreasing = true;
  for (std::size_t i = 0; i < s.weighted.size(); ++i) {
    s.sup = std::max(s.sup, s.weighted[i]);
    s.running_sup[i] = s.sup;
    if (i > 0 && diag.h_t[i] < diag.h_t[i - 1]) s.weight_nonincreasing = false;
  }
  return s;
}

PathwiseUniquenessReport pathwise_uniqueness_experiment(const SpectralField& u0, const SpectralField& v0,
                                                        const NoiseModel& model, const SdeConfig& cfg_u,
                                                        const SdeConfig& cfg_v, double tolerance) {
  if (cfg_u.seed != cfg_v.seed) {
    throw Error("pathwise_uniqueness_experiment: seeds differ, the two solutions would not share a Wiener path");
  }
  if (!(cfg_u == cfg_v)) throw Error("pathwise_uniqueness_experiment: configurations differ");
  if (!(u0.grid() == v0.grid())) throw Error("pathwise_uniqueness_experiment: grid mismatch");
  const SdeConfig& cfg = cfg_u;
  cfg.validate();
  SdeConfig quiet = cfg;
  quiet.record_hs = false;
  const SdeStepper stepper(model, u0.grid(), quiet);
  require_galerkin_data(u0, stepper.space(), "pathwise_uniqueness_experiment");
  require_galerkin_data(v0, stepper.space(), "pathwise_uniqueness_experiment");

  PathwiseUniquenessReport rep;
  rep.tolerance = tolerance;
  rep.bitwise_identical = true;
  const ConditionCConstants k = condition_c_bounds(model);
  rep.l1 = k.l1;
  rep.l2 = k.l2;

  RngState ru{cfg.seed, 0};
  RngState rv{cfg.seed, 0};
  SdeStepInfo iu(u0.grid());
  SdeStepInfo iv(u0.grid());
  SpectralField u = u0;
  SpectralField v = v0;
  const double ref = std::max(l2_norm_sq(u0), l2_norm_sq(v0));
  std::vector<double> integrand;
  double g = 0.0;

  auto record = [&](double t) {
    if (!(u == v)) rep.bitwise_identical = false;
    const SpectralField w = u - v;
    rep.t.push_back(t);
    rep.w_sq.push_back(l2_norm_sq(w));
    rep.g.push_back(g);
    if (!cfg.drop_nonlinearity) {
      rep.c_sup = std::max(rep.c_sup, uniqueness_ratio(w, u, advection(w, u)));
      const NormSquares nu = norm_squares(u);
      integrand.push_back((std::cbrt(nu.d1) + std::cbrt(nu.d2)) * std::cbrt(nu.d1d2));
    } else {
      integrand.push_back(0.0);
    }
  };

  record(0.0);
  const std::size_t n_steps = cfg.steps();
  for (std::size_t n = 1; n <= n_steps; ++n) {
    const double t_prev = static_cast<double>(n - 1) * cfg.dt;
    const SpectralField w = u - v;
    const double w_sq = l2_norm_sq(w);
    SpectralField un = stepper.step(u, ru, &iu);
    SpectralField vn = stepper.step(v, rv, &iv);
    if (w_sq > 0.0) {
      const SpectralField ds = iu.noise - iv.noise;
      const double d1w = norm_squares(w).d1;
      const double q = l2_norm_sq(ds);
      const double expected = (rep.l1 * w_sq + rep.l2 * d1w) * cfg.dt;
      g += rep.l1 * cfg.dt + 2.0 * l2_inner(ds, w) / w_sq + std::max(0.0, q - expected) / w_sq;
    }
    check_blowup(un, l2_norm_sq(un), ref, t_prev);
    check_blowup(vn, l2_norm_sq(vn), ref, t_prev);
    u = std::move(un);
    v = std::move(vn);
    record(static_cast<double>(n) * cfg.dt);
  }

  rep.c_alpha_hat = 0.75 * std::cbrt(1.0 / (2.0 * cfg.alpha_hat)) * std::pow(rep.c_sup, 4.0 / 3.0);
  rep.q.assign(rep.t.size(), 0.0);
  rep.weighted.assign(rep.t.size(), 0.0);
  double integral = 0.0;
  for (std::size_t i = 0; i < rep.t.size(); ++i) {
    if (i > 0) integral += 0.5 * (rep.t[i] - rep.t[i - 1]) * (integrand[i] + integrand[i - 1]);
    rep.q[i] = integral == 0.0 ? 0.0 : 2.0 * rep.c_alpha_hat * integral;
    rep.weighted[i] = std::exp(-rep.q[i]) * rep.w_sq[i];
  }

  const double w0 = rep.w_sq.front();
  rep.satisfied = true;
  for (std::size_t i = 0; i < rep.t.size(); ++i) {
    if (w0 == 0.0) {
      if (rep.w_sq[i] != 0.0) rep.satisfied = false;
      continue;
    }
    const double bound = w0 * std::exp(rep.g[i]);
    if (i > 0 || rep.t.size() == 1) rep.worst_ratio = std::max(rep.worst_ratio, rep.weighted[i] / bound);
    if (!(rep.weighted[i] <= bound * (1.0 + tolerance))) rep.satisfied = false;
  }
  return rep;
}

std::size_t basis_position(const Wavevector& k) {
  if (k.k1 == 0 && k.k2 == 0) throw Error("basis_position: k = 0 has no basis element");
  Wavevector rep = k;
  if (rep.k1 < 0 || (rep.k1 == 0 && rep.k2 < 0)) rep = Wavevector{-k.k1, -k.k2};
  const auto count = static_cast<std::size_t>(8 * (rep.k1 * rep.k1 + rep.k2 * rep.k2 + 2));
  const auto list = basis_enumeration(count);
  for (std::size_t i = 0; i < list.size(); ++i) {
    if (list[i].rep == rep && !list[i].sine) return i;
  }
  throw Error("basis_position: wavevector not found in the enumeration");
}

namespace {

struct ModeRun {
  std::vector<double> coefficient;  ///< (u(t), e_k) per path
  double t = 0.0;
};

ModeRun run_single_mode(const TorusGrid& grid, const SdeConfig& cfg, double s, const Wavevector& k,
                        std::size_t paths, double a0) {
  if (paths < 2) throw Error("mode validation needs at least two paths");
  if (basis_position(k) >= cfg.galerkin_n) {
    throw Error("mode validation: the mode lies outside the level-" + std::to_string(cfg.galerkin_n) + " span");
  }
  SdeConfig c = cfg;
  c.drop_nonlinearity = true;
  c.record_hs = false;
  const SdeStepper stepper(NoiseModel::additive_single_mode(k, s), grid, c);
  const SpectralField e = basis_element(grid, k);
  const SpectralField u0 = a0 * e;
  const std::size_t n_steps = c.steps();
  ModeRun out;
  out.t = static_cast<double>(n_steps) * c.dt;
  out.coefficient.resize(paths);
  for (std::size_t p = 0; p < paths; ++p) {
    RngState rng{trajectory_seed(c.seed, p), 0};
    SpectralField u = u0;
    for (std::size_t n = 0; n < n_steps; ++n) u = stepper.step(u, rng);
    out.coefficient[p] = l2_inner(u, e);
  }
  return out;
}

// Mean and standard error of x, computed relative to x[0].
std::pair<double, double> mean_se(const std::vector<double>& x) {
  const double x0 = x.front();
  double m = 0.0;
  for (double v : x) m += v - x0;
  m /= static_cast<double>(x.size());
  double ss = 0.0;
  for (double v : x) ss += (v - x0 - m) * (v - x0 - m);
  const double var = ss / static_cast<double>(x.size() - 1);
  return {x0 + m, std::sqrt(var / static_cast<double>(x.size()))};
}

}  // namespace

OuReport ou_mode_validation(const TorusGrid& grid, const SdeConfig& cfg, double s, const Wavevector& k,
                            std::size_t paths, double a0) {
  if (k.k1 == 0) throw Error("ou_mode_validation: k1 = 0 is undamped; use brownian_mode_validation");
  const ModeRun run = run_single_mode(grid, cfg, s, k, paths, a0);
  std::vector<double> sq(paths);
  for (std::size_t p = 0; p < paths; ++p) sq[p] = run.coefficient[p] * run.coefficient[p];
  const auto [m, se] = mean_se(sq);

  OuReport r;
  r.mode = k;
  r.amplitude = s;
  r.a0 = a0;
  r.t = run.t;
  r.paths = paths;
  r.estimate = m;
  r.standard_error = se;
  const double lam = static_cast<double>(k.k1) * k.k1;
  const double decay = std::exp(-2.0 * lam * r.t);
  r.exact = decay * a0 * a0 + s * s / (2.0 * lam) * (1.0 - decay);
  const double e2 = std::exp(-2.0 * lam * cfg.dt);
  r.exact_discrete = decay * a0 * a0 + s * s * cfg.dt * e2 * (1.0 - decay) / (1.0 - e2);
  r.allowance = std::abs(r.exact_discrete - r.exact);
  r.passed = std::abs(r.estimate - r.exact) <= 5.0 * r.standard_error + r.allowance + 1e-12 * r.exact;
  return r;
}

OuReport brownian_mode_validation(const TorusGrid& grid, const SdeConfig& cfg, double s, const Wavevector& k,
                                  std::size_t paths, double a0) {
  if (k.k1 != 0) throw Error("brownian_mode_validation: requires k1 = 0");
  const ModeRun run = run_single_mode(grid, cfg, s, k, paths, a0);
  const auto [mean, mean_err] = mean_se(run.coefficient);
  (void)mean_err;
  std::vector<double> dev(paths);
  for (std::size_t p = 0; p < paths; ++p) dev[p] = (run.coefficient[p] - mean) * (run.coefficient[p] - mean);
  const auto [v, se] = mean_se(dev);

  OuReport r;
  r.mode = k;
  r.amplitude = s;
  r.a0 = a0;
  r.t = run.t;
  r.paths = paths;
  r.estimate = v * static_cast<double>(paths) / static_cast<double>(paths - 1);
  r.standard_error = se;
  r.exact = s * s * r.t;
  r.exact_discrete = r.exact;
  r.allowance = 0.0;
  r.passed = std::abs(r.estimate - r.exact) <= 5.0 * r.standard_error;
  return r;
}

}  // namespace ansflow
