#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "ansflow/basis.hpp"
#include "ansflow/det_solver.hpp"
#include "ansflow/noise.hpp"
#include "ansflow/rng.hpp"

namespace ansflow {

/// Euler-Maruyama with an exact integrating factor on -k1^2, projected onto
/// the first galerkin_n basis elements.
struct SdeConfig {
  double dt = 1e-3;
  double t_end = 1.0;
  std::size_t galerkin_n = 16;
  std::uint64_t seed = 1;
  bool drop_nonlinearity = false;
  double alpha_tilde = 0.5;
  double alpha_hat = 0.5;
  bool record_hs = true;   ///< record ||P_n sigma(u)||_HS^2 at every step
  int snapshot_every = 0;  ///< 0 keeps only the endpoints

  void validate() const;
  [[nodiscard]] std::size_t steps() const;

  friend bool operator==(const SdeConfig&, const SdeConfig&) = default;
};

/// DiagnosticsSeries plus the weighted H^{0,1} bookkeeping. Index i refers to
/// the state at t[i]; noise_work[i] is the work done by the step ending there.
struct StochasticDiagnostics : DiagnosticsSeries {
  std::vector<double> h_t;               ///< 2 C(alpha~) int ||d1 u||^2
  std::vector<double> weighted_h01;      ///< exp(-h) ||u||_{H^{0,1}}^2
  std::vector<double> int_weighted_h11;  ///< int exp(-h) ||u||_{H^{1,1}}^2
  std::vector<double> noise_work;        ///< 2 (s, u) + ||s||^2 with s = P_n sigma(u) dW
  std::vector<double> hs_norm_sq;        ///< ||P_n sigma(u)||_HS^2 in L2
  double c_alpha = 0.0;                  ///< C(alpha~) = sup c_emp^2 / (4 alpha~)

  /// Fills h_t, weighted_h01 and int_weighted_h11 from the recorded norms.
  void finalize(double alpha_tilde);
};

struct SdeTrajectory {
  std::vector<double> times;
  std::vector<SpectralField> states;
  StochasticDiagnostics diagnostics;
  double dt = 0.0;

  [[nodiscard]] const SpectralField& final_state() const { return states.back(); }
};

/// Optional by-products of one step.
struct SdeStepInfo {
  SpectralField noise;   ///< P_n sigma(u) dW
  double cross = 0.0;    ///< (d2 B(u), d2 u); zero in linear mode
  double hs = 0.0;       ///< ||P_n sigma(u)||_HS^2, when recorded
  explicit SdeStepInfo(const TorusGrid& g) : noise(g) {}
};

class SdeStepper {
 public:
  SdeStepper(const NoiseModel& model, const TorusGrid& grid, const SdeConfig& cfg);

  /// u+ = exp(L dt) (u + dt P_n N(u) + P_n sigma(u) dW); advances rng by one step.
  [[nodiscard]] SpectralField step(const SpectralField& u, RngState& rng, SdeStepInfo* info = nullptr) const;
  [[nodiscard]] double hs_norm_sq(const SpectralField& u) const;
  [[nodiscard]] const GalerkinSpace& space() const { return space_; }
  [[nodiscard]] const SigmaOperator& sigma() const { return sigma_; }
  [[nodiscard]] const SdeConfig& config() const { return cfg_; }

 private:
  SdeConfig cfg_;
  DetStepper det_;
  GalerkinSpace space_;
  SigmaOperator sigma_;
  std::vector<SpectralField> columns_;  ///< P_n sigma psi_k, state independent models only
  double hs_const_ = 0.0;
};

SpectralField step_sde(const SpectralField& u, const NoiseModel& model, const SdeConfig& cfg, RngState& rng);

/// Requires u0 finite, solenoidal and inside the level-galerkin_n span. The
/// trajectory uses RngState{cfg.seed, 0}. Throws BlowUpError.
SdeTrajectory run_sde(const SpectralField& u0, const NoiseModel& model, const SdeConfig& cfg);

struct WeightedSeries {
  std::vector<double> t;
  std::vector<double> weighted;        ///< exp(-h) ||u||_{H^{0,1}}^2
  std::vector<double> running_sup;
  std::vector<double> int_weighted_h11;
  double sup = 0.0;
  bool weight_nonincreasing = false;
};

WeightedSeries weighted_h01_series(const StochasticDiagnostics& diag);

struct PathwiseUniquenessReport {
  std::vector<double> t;
  std::vector<double> w_sq;
  std::vector<double> q;         ///< int 2 C(alpha^) (||d1 u||^{2/3} + ||d2 u||^{2/3}) ||d1 d2 u||^{2/3}
  std::vector<double> g;         ///< discrete Gronwall exponent G(t)
  std::vector<double> weighted;  ///< exp(-q) ||w||^2
  double c_sup = 0.0;            ///< sup of uniqueness_ratio(w, u, w . grad u)
  double c_alpha_hat = 0.0;      ///< (3/4) (2 alpha^)^{-1/3} c_sup^{4/3}
  double l1 = 0.0;
  double l2 = 0.0;
  double worst_ratio = 0.0;      ///< max exp(-q) ||w||^2 / (||w0||^2 e^G)
  double tolerance = 0.0;
  bool bitwise_identical = false;
  bool satisfied = false;
};

/// Evolves u and v against the same increment stream. G(t) sums, per step,
///   L1 dt + dM + max(0, Q - (L1 ||w||^2 + L2 ||d1 w||^2) dt) / ||w||^2
/// with dM = 2 (ds, w) / ||w||^2, Q = ||ds||^2 and ds the noise difference.
/// The two configs must agree, seed included.
PathwiseUniquenessReport pathwise_uniqueness_experiment(const SpectralField& u0, const SpectralField& v0,
                                                        const NoiseModel& model, const SdeConfig& cfg_u,
                                                        const SdeConfig& cfg_v, double tolerance = 0.05);
inline PathwiseUniquenessReport pathwise_uniqueness_experiment(const SpectralField& u0, const SpectralField& v0,
                                                               const NoiseModel& model, const SdeConfig& cfg,
                                                               double tolerance = 0.05) {
  return pathwise_uniqueness_experiment(u0, v0, model, cfg, cfg, tolerance);
}

struct OuReport {
  Wavevector mode;
  double amplitude = 0.0;
  double a0 = 0.0;            ///< initial coefficient
  double t = 0.0;
  std::size_t paths = 0;
  double estimate = 0.0;      ///< mean of (u(t), e_k)^2, or the sample variance in the growth case
  double standard_error = 0.0;
  double exact = 0.0;         ///< continuous-time value
  double exact_discrete = 0.0;  ///< value of the discrete recursion
  double allowance = 0.0;     ///< |exact_discrete - exact|
  bool passed = false;        ///< |estimate - exact| <= 5 SE + allowance
};

/// Linear mode with additive noise s e_k and u0 = a0 e_k, k1 != 0. The
/// second moment is compared with exp(-2 k1^2 t) a0^2 + s^2 (1 - exp(-2 k1^2 t)) / (2 k1^2).
/// grid must hold k in its Galerkin span at level cfg.galerkin_n.
OuReport ou_mode_validation(const TorusGrid& grid, const SdeConfig& cfg, double s, const Wavevector& k,
                            std::size_t paths, double a0 = 1.0);

/// Undamped case k1 == 0: sample variance of the coefficient against s^2 t.
OuReport brownian_mode_validation(const TorusGrid& grid, const SdeConfig& cfg, double s, const Wavevector& k,
                                  std::size_t paths, double a0 = 0.0);

/// Index of the cos basis element of k in the global enumeration.
std::size_t basis_position(const Wavevector& k);

}  // namespace ansflow
