#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "ansflow/noise.hpp"
#include "ansflow/sde_solver.hpp"

namespace ansflow {

struct EnsembleConfig {
  std::size_t size = 100;
  std::uint64_t base_seed = 1;
  SdeConfig sde;
  NoiseModel model;
  unsigned workers = 0;  ///< 0 uses the hardware concurrency
  bool force = false;    ///< run even when the existence gate fails

  void validate() const;
};

struct Estimate {
  double mean = 0.0;
  double se = 0.0;  ///< standard error; 0 for a single path
};

/// Ensemble means over paths; sup is over the recorded times of each path.
struct MomentEstimates {
  std::size_t level = 0;
  std::size_t paths = 0;
  Estimate sup_l2_sq;           ///< E sup ||u||^2
  Estimate int_h10;             ///< E int ||u||_{H^{1,0}}^2
  Estimate sup_l2_4;            ///< E sup ||u||^4
  Estimate weighted_h01;        ///< E sup exp(-h) ||u||_{H^{0,1}}^2
  Estimate int_weighted_h11;    ///< E int exp(-h) ||u||_{H^{1,1}}^2
  Estimate final_l2_sq;         ///< E ||u(T)||^2
  GateVerdict gate;

  friend bool operator==(const MomentEstimates& a, const MomentEstimates& b);
};

class EnsembleBlowUp : public Error {
 public:
  EnsembleBlowUp(const std::string& what, std::size_t index, double time)
      : Error(what), index_(index), time_(time) {}
  [[nodiscard]] std::size_t trajectory_index() const { return index_; }
  [[nodiscard]] double last_finite_time() const { return time_; }

 private:
  std::size_t index_;
  double time_;
};

/// Raised before any path runs when the model fails the existence gate.
class GateError : public Error {
 public:
  using Error::Error;
};

/// Path p uses seed trajectory_seed(base_seed, p). The reduction runs in path
/// order, so the result does not depend on the worker count.
MomentEstimates run_ensemble(const SpectralField& u0, const EnsembleConfig& cfg);

/// Mean and standard error with a deterministic summation order.
Estimate estimate(const std::vector<double>& samples);

struct MomentBoundReport {
  std::vector<std::size_t> levels;
  std::vector<double> c_hat;  ///< (E sup ||u||^2 + E int ||u||_{H^{1,0}}^2) / (1 + ||u0||^2)
  double spread = 0.0;        ///< max / min of c_hat
  bool uniform = false;       ///< spread <= 2
};

MomentBoundReport moment_bound_report(const std::vector<MomentEstimates>& per_level, double u0_l2_sq);

std::string ensemble_csv_header();
/// One row per level: n, M, estimates with SEs, C_hat, gate verdicts.
std::string ensemble_csv_row(const MomentEstimates& est, double c_hat);

}  // namespace ansflow
