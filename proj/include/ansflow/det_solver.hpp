#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "ansflow/field.hpp"

namespace ansflow {

enum class Integrator { IfEuler, IfRk2, IfRk4 };

std::string to_string(Integrator integrator);
Integrator parse_integrator(std::string_view name);

struct DetConfig {
  double dt = 1e-3;
  double t_end = 1.0;
  double eps_v = 0.0;  ///< vertical viscosity is eps_v^2 d2^2
  Integrator integrator = Integrator::IfRk2;
  bool dealias = true;
  int snapshot_every = 0;  ///< store a state every this many steps; 0 keeps only the endpoints

  void validate() const;
  /// Number of fixed steps; t_end is rounded to the nearest multiple of dt.
  [[nodiscard]] std::size_t steps() const;
};

/// Raised when a state turns non-finite or its energy exceeds 1e6 times the
/// initial energy.
class BlowUpError : public Error {
 public:
  BlowUpError(const std::string& what, double last_finite_time)
      : Error(what), last_finite_time_(last_finite_time) {}
  [[nodiscard]] double last_finite_time() const { return last_finite_time_; }

 private:
  double last_finite_time_;
};

/// Per-step record of the norms entering the energy and H^{0,1} estimates.
struct DiagnosticsSeries {
  std::vector<double> t;
  std::vector<double> l2_sq;
  std::vector<double> d1_sq;
  std::vector<double> d2_sq;
  std::vector<double> d1d2_sq;
  std::vector<double> int_d1_sq;    ///< trapezoid running integral of d1_sq
  std::vector<double> int_d2_sq;    ///< trapezoid running integral of d2_sq
  std::vector<double> int_d1d2_sq;  ///< trapezoid running integral of d1d2_sq
  std::vector<double> cross;        ///< (d2 (u . grad u), d2 u)
  std::vector<double> c_emp;        ///< |cross| / (||d1 d2 u|| ||d1 u|| ||d2 u||)

  [[nodiscard]] std::size_t size() const { return t.size(); }
  /// Appends the record for state u at time t, extending the running integrals.
  void append(double time, const SpectralField& u);
  /// Same, with the cross term supplied by the caller.
  void append(double time, const SpectralField& u, double cross_term);
};

/// |(d2 B(u), d2 u)| / (||d1 d2 u|| ||d1 u|| ||d2 u||); 0 when the numerator
/// vanishes, infinity when only the denominator does.
double h01_cross_ratio(double cross, double d1_sq, double d2_sq, double d1d2_sq);

struct Trajectory {
  std::vector<double> times;
  std::vector<SpectralField> states;
  DiagnosticsSeries diagnostics;
  double eps_v = 0.0;
  double dt = 0.0;

  [[nodiscard]] const SpectralField& final_state() const { return states.back(); }
};

/// Spectral Gaussian mollifier: multiplies mode k by exp(-eps^2 |k|^2).
SpectralField mollify(const SpectralField& u0, double eps);

/// Integrating-factor stepper for du/dt = -P B(u) + d1^2 u + eps^2 d2^2 u.
class DetStepper {
 public:
  DetStepper(const TorusGrid& grid, const DetConfig& cfg);

  [[nodiscard]] SpectralField step(const SpectralField& u) const;
  /// -P B(u) with the mean removed; dealiased when the config asks for it.
  [[nodiscard]] SpectralField nonlinearity(const SpectralField& u) const;
  /// Multiplies by exp(L dt) (full) or exp(L dt / 2) (half) in place.
  void apply_linear(SpectralField& u, bool half = false) const;

 private:
  TorusGrid grid_;
  DetConfig cfg_;
  std::vector<double> e_full_;
  std::vector<double> e_half_;
};

SpectralField step_det(const SpectralField& u, const DetConfig& cfg);

/// Fixed-step run. Requires a solenoidal, zero-mean u0. Throws BlowUpError.
Trajectory run_det(const SpectralField& u0, const DetConfig& cfg);

/// R(t) = ||u||^2 + 2 int ||d1 u||^2 + 2 eps^2 int ||d2 u||^2 - ||u0||^2.
std::vector<double> energy_certificate(const Trajectory& traj);

struct H01Certificate {
  double c_emp_sup = 0.0;
  double constant = 0.0;              ///< C = sup c_emp^2 / 2
  std::vector<double> weighted;       ///< exp(-2C int ||d1 u||^2) ||d2 u||^2
  double max_step_increase = 0.0;     ///< largest W_{n+1} - W_n
  double slack = 0.0;                 ///< allowed per-step increase, 1e-6 W_0
  bool monotone = false;
  bool growth_bound = false;          ///< ||d2 u||^2 <= ||d2 u0||^2 exp(2C int ||d1 u||^2)
  double int_d1d2_final = 0.0;

  [[nodiscard]] bool satisfied() const { return monotone && growth_bound; }
};

H01Certificate h01_certificate(const DiagnosticsSeries& diag, double slack_factor = 1e-6);
inline H01Certificate h01_certificate(const Trajectory& traj) { return h01_certificate(traj.diagnostics); }

/// Smooth scalar time profile chi(t) with its derivative.
struct TimeProfile {
  std::function<double(double)> value;
  std::function<double(double)> derivative;

  static TimeProfile constant();
  static TimeProfile cosine(double omega = 1.0);
};

/// Discrete weak-form residual for the test functions chi(t) e(x), with e both
/// elements of the basis pair at test_mode; returns the Euclidean norm of the
/// two residuals. Requires states stored at every step.
double weak_form_residual(const Trajectory& traj, const Wavevector& test_mode, const TimeProfile& profile);

struct UniquenessReport {
  std::vector<double> t;
  std::vector<double> w_sq;
  std::vector<double> exponent;  ///< E(t)
  double c_sup = 0.0;
  double c0 = 0.0;               ///< (3/4) sup c^{4/3}
  double worst_ratio = 0.0;      ///< max ||w||^2 / (||w0||^2 e^E)
  double tolerance = 0.0;
  bool bitwise_identical = false;  ///< w == 0 at every step
  bool satisfied = false;
};

/// Ratio |(w . grad v, w)| / (||w||^{3/2} ||d1 w||^{1/2} (||d1 v||^{1/2} + ||d2 v||^{1/2}) ||d1 d2 v||^{1/2}).
double uniqueness_ratio(const SpectralField& w, const SpectralField& v, const SpectralField& w_dot_grad_v);

UniquenessReport uniqueness_experiment(const SpectralField& u0, const SpectralField& v0, const DetConfig& cfg,
                                       double tolerance = 1e-3);

struct EpsilonSweep {
  std::vector<double> eps;
  std::vector<double> distance;  ///< ||u^eps - u^0||_{L^2(0,T; L^2)}
  bool strictly_decreasing = false;
};

/// Runs the unregularized system from u0 and the eps-system from mollify(u0, eps).
EpsilonSweep epsilon_sweep(const SpectralField& u0, const DetConfig& cfg, const std::vector<double>& eps);

/// 0.5 min(dx1, dx2) / max |u|; infinity for the zero field.
double cfl_dt(const SpectralField& u, double safety = 0.5);

}  // namespace ansflow
