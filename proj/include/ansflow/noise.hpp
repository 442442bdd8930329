#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ansflow/field.hpp"
#include "ansflow/norms.hpp"

namespace ansflow {

/// a_cos cos(m . x) + a_sin sin(m . x); m = (0, 0) with a_cos is a constant.
struct FourierTerm {
  int m1 = 0;
  int m2 = 0;
  double a_cos = 0.0;
  double a_sin = 0.0;
};

/// Finite trigonometric scalar field on the torus.
///
/// Text form: terms joined by '+' or '-', each a number optionally followed by
/// "*cos(m1,m2)" or "*sin(m1,m2)", e.g. "0.1 + 0.05*cos(0,1) - 0.2*sin(1,-1)".
struct FourierRecipe {
  std::vector<FourierTerm> terms;

  static FourierRecipe parse(std::string_view text);
  static FourierRecipe constant(double a);
  [[nodiscard]] std::string to_string() const;

  [[nodiscard]] bool is_zero() const;
  [[nodiscard]] bool is_constant() const;
  /// Largest |m_i| over the terms.
  [[nodiscard]] int band() const;
  /// Upper bounds from the amplitudes: sum |a|, sum |a||m1|, sum |a||m2|.
  [[nodiscard]] double sup_bound() const;
  [[nodiscard]] double sup_d1_bound() const;
  [[nodiscard]] double sup_d2_bound() const;
  /// sup|f| + sup|d1 f| + sup|d2 f|, a C^1 norm bound.
  [[nodiscard]] double c1_bound() const { return sup_bound() + sup_d1_bound() + sup_d2_bound(); }
  [[nodiscard]] std::vector<double> sample(const TorusGrid& grid) const;
  [[nodiscard]] FourierRecipe scaled(double lambda) const;

  friend bool operator==(const FourierRecipe& a, const FourierRecipe& b) { return a.to_string() == b.to_string(); }
};

/// Bounded pointwise nonlinearity applied to each velocity component.
struct Nonlinearity {
  enum class Kind { Constant, Sine, Tanh };
  Kind kind = Kind::Constant;
  double amplitude = 1.0;

  double operator()(double s) const;
  /// C(g) >= max(sup |g|, sup |g'|).
  [[nodiscard]] double c_bound() const;
  [[nodiscard]] std::string to_string() const;
  static Nonlinearity parse(std::string_view text);  ///< "const:1", "sin:0.5", "tanh:0.5"

  friend bool operator==(const Nonlinearity&, const Nonlinearity&) = default;
};

/// sigma(u) y = P D sum_k (c_k d1 u + b_k g(u)) y_k, with P the Leray projection
/// and D the two-thirds truncation. c and b have length n_modes.
struct NoiseModel {
  std::vector<FourierRecipe> c;
  std::vector<FourierRecipe> b;
  Nonlinearity g;
  double eta = 0.1;
  std::optional<double> m1_declared;
  std::optional<double> m2_declared;
  std::optional<double> cg_declared;

  [[nodiscard]] std::size_t n_modes() const { return c.size(); }
  /// sum_k ||c_k||_{C^1}^2 from the recipes.
  [[nodiscard]] double m1_computed() const;
  /// max(sum_k sup|b_k|^2, sum_k sup|d2 b_k|^2) from the recipes.
  [[nodiscard]] double m2_computed() const;
  /// Effective constants: the declared value when given, else the computed one.
  [[nodiscard]] double m1() const { return m1_declared.value_or(m1_computed()); }
  [[nodiscard]] double m2() const { return m2_declared.value_or(m2_computed()); }
  [[nodiscard]] double cg() const { return cg_declared.value_or(g.c_bound()); }
  /// No transport channel and a constant g: sigma does not depend on u.
  [[nodiscard]] bool state_independent() const;
  [[nodiscard]] bool is_zero() const;
  [[nodiscard]] int band() const;
  /// Rejects mismatched lengths, bad eta and declarations below the computed bounds.
  void validate() const;

  static NoiseModel zero(std::size_t n_modes = 1);
  /// g == 1, c == 0 and one reaction coefficient chosen so that sigma(u) psi_1
  /// equals s times the cos basis element of k. Requires k1 != k2.
  static NoiseModel additive_single_mode(const Wavevector& k, double s);
  /// Same coefficient recipe as above, for building multi-mode additive models.
  static FourierRecipe additive_recipe(const Wavevector& k, double s);
};

/// Grid-bound evaluator of sigma with the coefficient samples cached.
class SigmaOperator {
 public:
  SigmaOperator(const NoiseModel& model, const TorusGrid& grid);

  [[nodiscard]] const NoiseModel& model() const { return model_; }
  [[nodiscard]] const TorusGrid& grid() const { return grid_; }

  /// sigma(u) y, projected and dealiased. The mean mode is left in place.
  [[nodiscard]] SpectralField apply(const SpectralField& u, const std::vector<double>& y) const;
  /// sigma(u) psi_k.
  [[nodiscard]] SpectralField column(const SpectralField& u, std::size_t k) const;

 private:
  NoiseModel model_;
  TorusGrid grid_;
  std::vector<std::vector<double>> c_samples_;
  std::vector<std::vector<double>> b_samples_;
  std::vector<SpectralField> cached_columns_;  ///< filled when state independent
};

SpectralField apply_sigma(const NoiseModel& model, const SpectralField& u, const std::vector<double>& y);

struct ConditionCConstants {
  double k0p = 0.0, k1p = 0.0;        ///< H^{-1} growth: K'_0 + K'_1 ||u||^2
  double k0 = 0.0, k1 = 0.0, k2 = 0.0;  ///< H growth
  double k0t = 0.0, k1t = 0.0, k2t = 0.0;  ///< H^{0,1} growth
  double l1 = 0.0, l2 = 0.0;           ///< Lipschitz in H
};

ConditionCConstants condition_c_bounds(const NoiseModel& model);

struct GateVerdict {
  bool k2_ok = false;   ///< K2 < 2/11
  bool k2t_ok = false;  ///< K2~ < 2/5
  bool l2_ok = false;   ///< L2 < 2/5
  [[nodiscard]] bool existence() const { return k2_ok && k2t_ok; }
  [[nodiscard]] bool uniqueness() const { return existence() && l2_ok; }
};

GateVerdict condition_c_gate(const ConditionCConstants& c);

/// Hilbert-Schmidt norms sum_k ||sigma(u) psi_k||^2 in H^{-1}, L2 and H^{0,1}.
struct HsNorms {
  double hm1 = 0.0;
  double l2 = 0.0;
  double h01 = 0.0;
};
HsNorms hs_norms(const SigmaOperator& sigma, const SpectralField& u);

/// Samples random solenoidal fields and pairs on the grid and checks the three
/// growth bounds and the Lipschitz bound with the analytic constants. lhs holds
/// the worst ratio (sampled side / bound), rhs = 1.
NormReport condition_c_empirical_check(const NoiseModel& model, const TorusGrid& grid, std::size_t sample_count,
                                       std::uint64_t seed = 1);

}  // namespace ansflow
