#include "ansflow/commands.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "ansflow/basis.hpp"
#include "ansflow/csv.hpp"
#include "ansflow/ensemble.hpp"
#include "ansflow/init.hpp"
#include "ansflow/io.hpp"
#include "ansflow/norms.hpp"
#include "ansflow/spectral_ops.hpp"

namespace ansflow {

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names = {"run-det", "run-sde",      "ensemble",  "verify",
                                                 "oracle-check", "uniqueness", "plot-data"};
  return names;
}

namespace {

namespace fs = std::filesystem;

/// Collects outputs and verdicts, then writes the manifest last.
class Run {
 public:
  Run(std::string command, const RunConfig& cfg, const CommandOptions& opts,
      std::string manifest_name = "manifest.json")
      : opts_(opts), manifest_name_(std::move(manifest_name)), start_(std::chrono::steady_clock::now()) {
    manifest_.command = std::move(command);
    manifest_.version = kVersion;
    manifest_.config_echo = echo_config(cfg);
    manifest_.seeds = {{"init", cfg.init.seed},
                       {"sde", cfg.sde.seed},
                       {"ensemble", cfg.ensemble.base_seed},
                       {"verify", cfg.verify.seed},
                       {"oracle", cfg.oracle.seed}};
    fs::create_directories(opts.out_dir);
  }

  void text(const std::string& name, std::string_view content) {
    write_text_file(opts_.out_dir / name, content);
    manifest_.outputs.push_back(name);
  }

  void snapshot(const std::string& name, const SpectralField& u, double t) {
    fs::create_directories((opts_.out_dir / name).parent_path());
    write_snapshot(u, t, opts_.out_dir / name);
    manifest_.outputs.push_back(name);
  }

  void verdict(const std::string& name, bool ok) { manifest_.verdicts[name] = ok; }

  int finish() {
    const auto elapsed = std::chrono::steady_clock::now() - start_;
    manifest_.wall_clock_seconds = std::chrono::duration<double>(elapsed).count();
    manifest_.timestamp = utc_timestamp();
    manifest_.outputs.push_back(manifest_name_);
    write_text_file(opts_.out_dir / manifest_name_, manifest_.to_json());
    const bool ok = std::all_of(manifest_.verdicts.begin(), manifest_.verdicts.end(),
                                [](const auto& kv) { return kv.second; });
    return ok ? kExitPass : kExitViolation;
  }

 private:
  const CommandOptions& opts_;
  std::string manifest_name_;
  RunManifest manifest_;
  std::chrono::steady_clock::time_point start_;
};

std::string snap_name(std::size_t i) {
  std::ostringstream os;
  os << "snapshots/snap_" << std::setw(6) << std::setfill('0') << i << ".ans2";
  return os.str();
}

const char* pass_fail(bool ok) { return ok ? "PASS" : "FAIL"; }

void require_gate(const RunConfig& cfg, bool force, std::ostream& out) {
  for (const auto& w : config_warnings(cfg)) out << "warning: " << w << '\n';
  if (!force && !condition_c_gate(condition_c_bounds(cfg.noise)).existence()) {
    throw GateError("noise model fails the existence gate; rerun with --force to override");
  }
}

int cmd_run_det(const RunConfig& cfg, const CommandOptions& opts, std::ostream& out) {
  Run run("run-det", cfg, opts);
  const SpectralField u0 = build_initial(cfg);
  const Trajectory tr = run_det(u0, cfg.det);
  run.text("diagnostics.csv", det_diagnostics_csv(tr, cfg.output_every));
  for (std::size_t i = 0; i < tr.states.size(); ++i) run.snapshot(snap_name(i), tr.states[i], tr.times[i]);
  const auto cert = h01_certificate(tr);
  const auto residual = energy_certificate(tr);
  const bool finite = std::all_of(residual.begin(), residual.end(), [](double r) { return std::isfinite(r); });
  run.verdict("h01_certificate", cert.satisfied());
  run.verdict("energy_residual_finite", finite);
  out << "run-det: steps=" << cfg.det.steps() << " final_l2_sq=" << format_double(tr.diagnostics.l2_sq.back())
      << " energy_residual=" << format_double(residual.back()) << " h01_certificate=" << pass_fail(cert.satisfied())
      << '\n';
  return run.finish();
}

int cmd_run_sde(const RunConfig& cfg, const CommandOptions& opts, std::ostream& out) {
  require_gate(cfg, opts.force, out);
  Run run("run-sde", cfg, opts);
  const SpectralField u0 = build_initial(cfg, cfg.sde.galerkin_n);
  const SdeTrajectory tr = run_sde(u0, cfg.noise, cfg.sde);
  run.text("diagnostics.csv", sde_diagnostics_csv(tr, cfg.output_every));
  for (std::size_t i = 0; i < tr.states.size(); ++i) run.snapshot(snap_name(i), tr.states[i], tr.times[i]);
  const GalerkinSpace space(u0.grid(), cfg.sde.galerkin_n);
  const bool closed = space.outside_residual(tr.final_state()) <= 1e-13 * std::max(1.0, tr.final_state().max_abs());
  const auto ws = weighted_h01_series(tr.diagnostics);
  run.verdict("galerkin_closure", closed);
  run.verdict("weight_nonincreasing", ws.weight_nonincreasing);
  out << "run-sde: steps=" << cfg.sde.steps() << " level=" << cfg.sde.galerkin_n
      << " final_l2_sq=" << format_double(tr.diagnostics.l2_sq.back()) << " sup_weighted_h01=" << format_double(ws.sup)
      << " galerkin_closure=" << pass_fail(closed) << '\n';
  return run.finish();
}

int cmd_ensemble(const RunConfig& cfg, const CommandOptions& opts, std::ostream& out) {
  Run run("ensemble", cfg, opts);
  const std::size_t base_level = *std::min_element(cfg.ensemble.levels.begin(), cfg.ensemble.levels.end());
  const SpectralField u0 = build_initial(cfg, base_level);
  std::vector<MomentEstimates> per_level;
  for (std::size_t level : cfg.ensemble.levels) {
    EnsembleConfig ec;
    ec.size = cfg.ensemble.size;
    ec.base_seed = cfg.ensemble.base_seed;
    ec.sde = cfg.sde;
    ec.sde.galerkin_n = level;
    ec.model = cfg.noise;
    ec.workers = cfg.ensemble.workers;
    ec.force = opts.force;
    per_level.push_back(run_ensemble(u0, ec));
  }
  const auto report = moment_bound_report(per_level, l2_norm_sq(u0));
  std::string csv = ensemble_csv_header() + "\n";
  for (std::size_t i = 0; i < per_level.size(); ++i) csv += ensemble_csv_row(per_level[i], report.c_hat[i]) + "\n";
  run.text("ensemble.csv", csv);
  run.verdict("level_uniformity", report.uniform);
  out << "ensemble: paths=" << cfg.ensemble.size << " spread=" << format_double(report.spread)
      << " uniform=" << pass_fail(report.uniform) << '\n';
  return run.finish();
}

int cmd_verify(const RunConfig& cfg, const CommandOptions& opts, std::ostream& out) {
  Run run("verify", cfg, opts);
  const TorusGrid grid(cfg.n1, cfg.n2);
  std::string csv = NormReport::csv_header() + "\n";
  auto report = [&](const NormReport& r) {
    csv += r.csv_row() + "\n";
    out << pass_fail(r.satisfied) << ' ' << r.check << " lhs=" << format_double(r.lhs)
        << " rhs=" << format_double(r.rhs) << '\n';
  };

  std::size_t violations = 0;
  for (std::size_t s = 0; s < cfg.verify.samples; ++s) {
    const auto u = random_solenoidal(grid, cfg.verify.seed + s, RandomFieldSpec{1 << 20, 1e9, 1.0});
    for (const SupAxis axis : {SupAxis::X1, SupAxis::X2}) {
      if (!check_anisotropic_embedding(u, axis).satisfied) ++violations;
    }
  }
  NormReport emb;
  emb.check = "anisotropic_embedding_violations";
  emb.lhs = static_cast<double>(violations);
  emb.rhs = 0.0;
  emb.satisfied = violations == 0;
  report(emb);
  run.verdict("anisotropic_embedding", emb.satisfied);

  const auto cc = condition_c_empirical_check(cfg.noise, grid, std::min<std::size_t>(cfg.verify.samples, 100),
                                              cfg.verify.seed);
  report(cc);
  run.verdict("condition_c_bounds", cc.satisfied);

  const auto gate = condition_c_gate(condition_c_bounds(cfg.noise));
  out << pass_fail(gate.existence()) << " gate_existence\n" << pass_fail(gate.uniqueness()) << " gate_uniqueness\n";
  if (!opts.force) run.verdict("gate_existence", gate.existence());

  const std::size_t level = std::min<std::size_t>(32, basis_capacity(grid));
  const auto gram = basis_gram_defect(grid, level);
  NormReport gr;
  gr.check = "basis_gram_defect";
  gr.lhs = std::max(gram.l2, gram.h01);
  gr.rhs = 1e-12;
  gr.satisfied = gr.lhs <= gr.rhs;
  report(gr);
  run.verdict("basis_gram", gr.satisfied);

  const SpectralField u0 = build_initial(cfg);
  DetConfig fine = cfg.det;
  fine.dt = cfg.det.dt / 2.0;
  fine.snapshot_every = 0;
  DetConfig coarse = cfg.det;
  coarse.snapshot_every = 0;
  const Trajectory tc = run_det(u0, coarse);
  const Trajectory tf = run_det(u0, fine);
  const double rc = std::abs(energy_certificate(tc).back());
  const double rf = std::abs(energy_certificate(tf).back());
  const double e0 = l2_norm_sq(u0);
  NormReport en;
  en.check = "energy_residual";
  en.lhs = rf;
  en.rhs = 1e-4 * e0;
  en.satisfied = rf <= en.rhs;
  en.auxiliary = rf > 0.0 ? rc / rf : 0.0;
  report(en);
  run.verdict("energy_residual", en.satisfied);
  if (rc > 1e-13 * std::max(e0, 1.0) && cfg.det.integrator == Integrator::IfRk2) {
    NormReport order;
    order.check = "energy_residual_ratio";
    order.lhs = rc / rf;
    order.rhs = 4.0;
    order.satisfied = order.lhs >= 3.5 && order.lhs <= 4.5;
    report(order);
    run.verdict("energy_residual_order", order.satisfied);
  }

  const auto cert = h01_certificate(tf);
  NormReport hc;
  hc.check = "h01_certificate_step_increase";
  hc.lhs = cert.max_step_increase;
  hc.rhs = cert.slack;
  hc.constant_used = cert.constant;
  hc.satisfied = cert.satisfied();
  report(hc);
  run.verdict("h01_certificate", cert.satisfied());

  run.text("verify.csv", csv);
  return run.finish();
}

int cmd_oracle(const RunConfig& cfg, const CommandOptions& opts, std::ostream& out) {
  Run run("oracle-check", cfg, opts);
  const TorusGrid grid(cfg.oracle.n, cfg.oracle.n);
  double worst = 0.0;
  std::string csv = "field,max_rel_dev\n";
  for (std::size_t i = 0; i < cfg.oracle.fields; ++i) {
    const auto u = random_solenoidal(grid, cfg.oracle.seed + i);
    const auto fast = nonlinear_term(u);
    const auto slow = nonlinear_term_oracle(u);
    SpectralField diff = fast - slow;
    const double scale = slow.max_abs();
    const double dev = scale > 0.0 ? diff.max_abs() / scale : diff.max_abs();
    worst = std::max(worst, dev);
    csv += std::to_string(i) + "," + format_double(dev) + "\n";
  }
  run.text("oracle.csv", csv);
  const bool ok = worst <= 1e-12;
  run.verdict("oracle_equivalence", ok);
  out << "oracle-check: n=" << cfg.oracle.n << " fields=" << cfg.oracle.fields
      << " max_rel_dev=" << format_double(worst) << ' ' << pass_fail(ok) << '\n';
  return run.finish();
}

int cmd_uniqueness(const RunConfig& cfg, const CommandOptions& opts, std::ostream& out) {
  const bool sde = cfg.uniqueness.mode == "sde";
  if (sde) require_gate(cfg, opts.force, out);
  Run run("uniqueness", cfg, opts);
  const std::size_t level = sde ? cfg.sde.galerkin_n : 0;
  const SpectralField u0 = build_initial(cfg, level);
  SpectralField dir = random_solenoidal(u0.grid(), cfg.init.seed + 1, RandomFieldSpec{cfg.init.band, cfg.init.width, 1.0});
  if (sde) {
    galerkin_project_inplace(dir, level);
    dir *= 1.0 / std::sqrt(l2_norm_sq(dir));
  }
  SpectralField v0 = u0;
  v0.axpy(cfg.uniqueness.perturbation, dir);

  std::string csv = "t,w_sq,weighted,bound\n";
  bool identical_ok = false;
  bool perturbed_ok = false;
  if (sde) {
    identical_ok = pathwise_uniqueness_experiment(u0, u0, cfg.noise, cfg.sde).bitwise_identical;
    const auto r = pathwise_uniqueness_experiment(u0, v0, cfg.noise, cfg.sde, cfg.uniqueness.tolerance);
    perturbed_ok = r.satisfied;
    for (std::size_t i = 0; i < r.t.size(); ++i) {
      csv += csv_join({format_double(r.t[i]), format_double(r.w_sq[i]), format_double(r.weighted[i]),
                       format_double(r.w_sq.front() * std::exp(r.g[i]))}) +
             "\n";
    }
    out << "uniqueness(sde): c_sup=" << format_double(r.c_sup) << " worst_ratio=" << format_double(r.worst_ratio)
        << '\n';
  } else {
    identical_ok = uniqueness_experiment(u0, u0, cfg.det).bitwise_identical;
    const auto r = uniqueness_experiment(u0, v0, cfg.det, cfg.uniqueness.tolerance);
    perturbed_ok = r.satisfied;
    for (std::size_t i = 0; i < r.t.size(); ++i) {
      csv += csv_join({format_double(r.t[i]), format_double(r.w_sq[i]), format_double(r.w_sq[i]),
                       format_double(r.w_sq.front() * std::exp(r.exponent[i]))}) +
             "\n";
    }
    out << "uniqueness(det): c_sup=" << format_double(r.c_sup) << " worst_ratio=" << format_double(r.worst_ratio)
        << '\n';
  }
  run.text("uniqueness.csv", csv);
  run.verdict("identical_data_bitwise", identical_ok);
  run.verdict("perturbed_bound", perturbed_ok);
  out << pass_fail(identical_ok) << " identical_data_bitwise\n" << pass_fail(perturbed_ok) << " perturbed_bound\n";
  return run.finish();
}

int cmd_plot_data(const RunConfig& cfg, const CommandOptions& opts, std::ostream& out) {
  const fs::path input = opts.input.empty() ? opts.out_dir / "diagnostics.csv" : opts.input;
  const std::string longform = to_long_format(read_text_file(input));
  // Often shares a directory with the run it reads; keep that run's manifest.
  Run run("plot-data", cfg, opts, "plot_data.manifest.json");
  run.text("plot_data.csv", longform);
  out << "plot-data: wrote " << (opts.out_dir / "plot_data.csv").string() << '\n';
  return run.finish();
}

}  // namespace

int run_command(std::string_view command, const RunConfig& cfg, const CommandOptions& opts, std::ostream& out,
                std::ostream& err) {
  try {
    if (command == "run-det") return cmd_run_det(cfg, opts, out);
    if (command == "run-sde") return cmd_run_sde(cfg, opts, out);
    if (command == "ensemble") return cmd_ensemble(cfg, opts, out);
    if (command == "verify") return cmd_verify(cfg, opts, out);
    if (command == "oracle-check") return cmd_oracle(cfg, opts, out);
    if (command == "uniqueness") return cmd_uniqueness(cfg, opts, out);
    if (command == "plot-data") return cmd_plot_data(cfg, opts, out);
    err << "error: usage: unknown command '" << command << "'\n";
    return kExitUsage;
  } catch (const GateError& e) {
    err << "error: gate: " << e.what() << '\n';
    return kExitViolation;
  } catch (const EnsembleBlowUp& e) {
    err << "error: blow-up: " << e.what() << '\n';
    return kExitRuntime;
  } catch (const BlowUpError& e) {
    err << "error: blow-up: " << e.what() << '\n';
    return kExitRuntime;
  } catch (const std::exception& e) {
    err << "error: runtime: " << e.what() << '\n';
    return kExitRuntime;
  }
}

}  // namespace ansflow
