#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "ansflow/det_solver.hpp"
#include "ansflow/noise.hpp"
#include "ansflow/sde_solver.hpp"

namespace ansflow {

struct InitSpec {
  std::string kind = "random";  ///< random | shear_x1 | shear_x2 | taylor_green | snapshot
  double energy = 1.0;          ///< random only
  std::uint64_t seed = 1;
  int band = 4;
  double width = 1e9;
  double amplitude = 1.0;  ///< closed-form fields only
  std::string path;        ///< snapshot only
};

struct EnsembleSettings {
  std::size_t size = 100;
  std::uint64_t base_seed = 1;
  unsigned workers = 0;
  std::vector<std::size_t> levels{8, 16, 32};
};

struct VerifySettings {
  std::size_t samples = 200;
  std::uint64_t seed = 1;
};

struct UniquenessSettings {
  std::string mode = "det";  ///< det | sde
  double perturbation = 1e-8;
  double tolerance = 0.05;
};

struct OracleSettings {
  int n = 8;
  std::size_t fields = 50;
  std::uint64_t seed = 1;
};

/// Everything a CLI command needs. sde.dt and sde.t_end mirror time.dt and
/// time.t_end.
struct RunConfig {
  int n1 = 32;
  int n2 = 32;
  InitSpec init;
  DetConfig det;
  SdeConfig sde;
  NoiseModel noise;
  EnsembleSettings ensemble;
  VerifySettings verify;
  UniquenessSettings uniqueness;
  OracleSettings oracle;
  int output_every = 1;  ///< CSV row stride in steps

  RunConfig();
  /// Overrides every seed in the configuration.
  void set_seed(std::uint64_t seed);
};

/// Parses flat "section.key = value" lines; '#' starts a comment. Unknown
/// keys, duplicates, type mismatches and invalid values are errors that name
/// the key and line.
RunConfig parse_config(std::string_view text);

/// Every key with its effective value, in a fixed order; parse_config of the
/// result reproduces the configuration.
std::string echo_config(const RunConfig& cfg);

bool operator==(const RunConfig& a, const RunConfig& b);

/// Nonfatal findings, e.g. noise constants outside the Condition C gates.
std::vector<std::string> config_warnings(const RunConfig& cfg);

/// Builds u0 from the init section. With galerkin_n > 0 the field is projected
/// onto that level and, for random data, rescaled to the requested energy.
SpectralField build_initial(const RunConfig& cfg, std::size_t galerkin_n = 0);

}  // namespace ansflow
