#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "ansflow/det_solver.hpp"
#include "ansflow/field.hpp"
#include "ansflow/sde_solver.hpp"

namespace ansflow {

enum class SnapshotErrorCode { Io = 1, BadMagic = 2, Truncated = 3, BadSize = 4, NonFinite = 5 };

class SnapshotError : public Error {
 public:
  SnapshotError(SnapshotErrorCode code, std::size_t offset, const std::string& detail)
      : Error(detail + " (byte offset " + std::to_string(offset) + ")"), code_(code), offset_(offset), detail_(detail) {}
  [[nodiscard]] SnapshotErrorCode code() const { return code_; }
  [[nodiscard]] std::size_t offset() const { return offset_; }
  [[nodiscard]] const std::string& detail() const { return detail_; }

 private:
  SnapshotErrorCode code_;
  std::size_t offset_;
  std::string detail_;
};

struct Snapshot {
  PhysicalField field;
  double time = 0.0;
};

/// ANS2 layout: "ANS2", u32 n1, u32 n2, f64 time, then component 1 and
/// component 2 samples (x1 index slow), all little-endian.
std::vector<std::uint8_t> encode_snapshot(const PhysicalField& field, double time);
Snapshot decode_snapshot(const std::vector<std::uint8_t>& bytes);

void write_snapshot(const PhysicalField& field, double time, const std::filesystem::path& path);
void write_snapshot(const SpectralField& field, double time, const std::filesystem::path& path);
Snapshot read_snapshot(const std::filesystem::path& path);

/// t, l2_sq, d1_sq, d2_sq, d1d2_sq, int_d1_sq, int_d1d2_sq, energy_residual, c_emp, weighted_h01.
/// weighted_h01 is the H^{0,1} certificate weight exp(-2C int ||d1 u||^2) ||d2 u||^2.
std::string det_diagnostics_csv(const Trajectory& traj, int every = 1);

/// The deterministic columns followed by h_t, noise_work and hs_norm_sq. Here
/// weighted_h01 is exp(-h) ||u||_{H^{0,1}}^2 and energy_residual subtracts the
/// accumulated noise work.
std::string sde_diagnostics_csv(const SdeTrajectory& traj, int every = 1);

/// Rewrites a wide numeric CSV whose first column is t into "series,t,value" rows.
std::string to_long_format(std::string_view wide_csv);

void write_text_file(const std::filesystem::path& path, std::string_view content);
std::string read_text_file(const std::filesystem::path& path);

struct RunManifest {
  std::string command;
  std::string config_echo;
  std::string version;
  std::map<std::string, std::uint64_t> seeds;
  std::vector<std::string> outputs;  ///< paths relative to the output directory
  double wall_clock_seconds = 0.0;
  std::string timestamp;             ///< the only nondeterministic field
  std::map<std::string, bool> verdicts;

  [[nodiscard]] std::string to_json() const;
  static RunManifest from_json(std::string_view text);
};

std::string utc_timestamp();

}  // namespace ansflow
