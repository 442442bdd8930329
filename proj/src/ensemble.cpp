#include "ansflow/ensemble.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <mutex>
#include <optional>
#include <sstream>
#include <thread>

#include "ansflow/csv.hpp"

namespace ansflow {

void EnsembleConfig::validate() const {
  if (size < 1) throw Error("ensemble.size must be at least 1");
  sde.validate();
  model.validate();
}

bool operator==(const MomentEstimates& a, const MomentEstimates& b) {
  auto same = [](const Estimate& x, const Estimate& y) { return x.mean == y.mean && x.se == y.se; };
  return a.level == b.level && a.paths == b.paths && same(a.sup_l2_sq, b.sup_l2_sq) && same(a.int_h10, b.int_h10) &&
         same(a.sup_l2_4, b.sup_l2_4) && same(a.weighted_h01, b.weighted_h01) &&
         same(a.int_weighted_h11, b.int_weighted_h11) && same(a.final_l2_sq, b.final_l2_sq);
}

Estimate estimate(const std::vector<double>& x) {
  if (x.empty()) throw Error("estimate: no samples");
  // Shifting by the first sample makes identical samples give SE == 0 exactly.
  const double x0 = x.front();
  double m = 0.0;
  for (double v : x) m += v - x0;
  m /= static_cast<double>(x.size());
  Estimate e;
  e.mean = x0 + m;
  if (x.size() > 1) {
    double ss = 0.0;
    for (double v : x) ss += (v - x0 - m) * (v - x0 - m);
    e.se = std::sqrt(ss / static_cast<double>(x.size() - 1) / static_cast<double>(x.size()));
  }
  return e;
}

namespace {

struct PathSummary {
  double sup_l2_sq = 0.0;
  double int_h10 = 0.0;
  double sup_l2_4 = 0.0;
  double weighted_h01 = 0.0;
  double int_weighted_h11 = 0.0;
  double final_l2_sq = 0.0;
};

PathSummary summarize(const SdeTrajectory& tr) {
  const auto& d = tr.diagnostics;
  PathSummary s;
  double int_l2 = 0.0;
  for (std::size_t i = 0; i < d.size(); ++i) {
    s.sup_l2_sq = std::max(s.sup_l2_sq, d.l2_sq[i]);
    s.weighted_h01 = std::max(s.weighted_h01, d.weighted_h01[i]);
    if (i > 0) int_l2 += 0.5 * (d.t[i] - d.t[i - 1]) * (d.l2_sq[i] + d.l2_sq[i - 1]);
  }
  s.sup_l2_4 = s.sup_l2_sq * s.sup_l2_sq;
  s.int_h10 = int_l2 + d.int_d1_sq.back();
  s.int_weighted_h11 = d.int_weighted_h11.back();
  s.final_l2_sq = d.l2_sq.back();
  return s;
}

}  // namespace

MomentEstimates run_ensemble(const SpectralField& u0, const EnsembleConfig& cfg) {
  cfg.validate();
  const GateVerdict gate = condition_c_gate(condition_c_bounds(cfg.model));
  if (!gate.existence() && !cfg.force) {
    throw GateError("noise model fails the existence gate (K2 < 2/11, K2~ < 2/5); rerun with --force to override");
  }

  const std::size_t m = cfg.size;
  std::vector<PathSummary> results(m);
  std::vector<std::optional<std::string>> failures(m);
  std::vector<double> failure_time(m, 0.0);
  std::atomic<std::size_t> next{0};
  std::atomic<bool> stop{false};

  auto worker = [&]() {
    for (;;) {
      const std::size_t p = next.fetch_add(1);
      if (p >= m || stop.load()) return;
      SdeConfig c = cfg.sde;
      c.seed = trajectory_seed(cfg.base_seed, p);
      try {
        results[p] = summarize(run_sde(u0, cfg.model, c));
      } catch (const BlowUpError& e) {
        failures[p] = e.what();
        failure_time[p] = e.last_finite_time();
        stop.store(true);
      }
    }
  };

  unsigned n_workers = cfg.workers == 0 ? std::max(1u, std::thread::hardware_concurrency()) : cfg.workers;
  n_workers = static_cast<unsigned>(std::min<std::size_t>(n_workers, m));
  if (n_workers <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < n_workers; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  for (std::size_t p = 0; p < m; ++p) {
    if (failures[p]) {
      throw EnsembleBlowUp("trajectory " + std::to_string(p) + " blew up: " + *failures[p], p, failure_time[p]);
    }
  }

  auto collect = [&](double PathSummary::*field) {
    std::vector<double> v(m);
    for (std::size_t p = 0; p < m; ++p) v[p] = results[p].*field;
    return estimate(v);
  };
  MomentEstimates est;
  est.level = cfg.sde.galerkin_n;
  est.paths = m;
  est.sup_l2_sq = collect(&PathSummary::sup_l2_sq);
  est.int_h10 = collect(&PathSummary::int_h10);
  est.sup_l2_4 = collect(&PathSummary::sup_l2_4);
  est.weighted_h01 = collect(&PathSummary::weighted_h01);
  est.int_weighted_h11 = collect(&PathSummary::int_weighted_h11);
  est.final_l2_sq = collect(&PathSummary::final_l2_sq);
  est.gate = gate;
  return est;
}

MomentBoundReport moment_bound_report(const std::vector<MomentEstimates>& per_level, double u0_l2_sq) {
  MomentBoundReport r;
  if (per_level.empty()) return r;
  double lo = std::numeric_limits<double>::infinity();
  double hi = 0.0;
  for (const auto& e : per_level) {
    r.levels.push_back(e.level);
    const double c = (e.sup_l2_sq.mean + e.int_h10.mean) / (1.0 + u0_l2_sq);
    r.c_hat.push_back(c);
    lo = std::min(lo, c);
    hi = std::max(hi, c);
  }
  r.spread = lo > 0.0 ? hi / lo : std::numeric_limits<double>::infinity();
  r.uniform = r.spread <= 2.0;
  return r;
}

std::string ensemble_csv_header() {
  return "level,paths,sup_l2_sq,sup_l2_sq_se,int_h10,int_h10_se,sup_l2_4,sup_l2_4_se,weighted_h01,"
         "weighted_h01_se,int_weighted_h11,int_weighted_h11_se,final_l2_sq,final_l2_sq_se,c_hat,gate_existence,"
         "gate_uniqueness";
}

std::string ensemble_csv_row(const MomentEstimates& e, double c_hat) {
  std::ostringstream os;
  os << e.level << ',' << e.paths;
  for (const Estimate* x : {&e.sup_l2_sq, &e.int_h10, &e.sup_l2_4, &e.weighted_h01, &e.int_weighted_h11,
                            &e.final_l2_sq}) {
    os << ',' << format_double(x->mean) << ',' << format_double(x->se);
  }
  os << ',' << format_double(c_hat) << ',' << (e.gate.existence() ? 1 : 0) << ',' << (e.gate.uniqueness() ? 1 : 0);
  return os.str();
}

}  // namespace ansflow
