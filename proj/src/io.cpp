#include "ansflow/io.hpp"

#include <bit>
#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <iterator>
#include <sstream>

#include "ansflow/csv.hpp"
#include "ansflow/transform.hpp"
#include "json.hpp"

namespace ansflow {

namespace {

constexpr char kMagic[4] = {'A', 'N', 'S', '2'};
constexpr std::size_t kHeader = 20;

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

void put_f64(std::vector<std::uint8_t>& out, double v) {
  const auto bits = std::bit_cast<std::uint64_t>(v);
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<std::uint8_t>(bits >> (8 * i)));
}

std::uint32_t get_u32(const std::vector<std::uint8_t>& in, std::size_t at) {
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(in[at + i]) << (8 * i);
  return v;
}

double get_f64(const std::vector<std::uint8_t>& in, std::size_t at) {
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(in[at + i]) << (8 * i);
  return std::bit_cast<double>(v);
}

}  // namespace

std::vector<std::uint8_t> encode_snapshot(const PhysicalField& field, double time) {
  const TorusGrid& g = field.grid();
  std::vector<std::uint8_t> out;
  out.reserve(kHeader + 16 * g.size());
  out.insert(out.end(), std::begin(kMagic), std::end(kMagic));
  put_u32(out, static_cast<std::uint32_t>(g.n1()));
  put_u32(out, static_cast<std::uint32_t>(g.n2()));
  put_f64(out, time);
  for (int c = 0; c < 2; ++c) {
    for (double v : field.component(c)) put_f64(out, v);
  }
  return out;
}

Snapshot decode_snapshot(const std::vector<std::uint8_t>& bytes) {
  if (bytes.size() < 4) throw SnapshotError(SnapshotErrorCode::Truncated, bytes.size(), "snapshot shorter than its magic");
  for (std::size_t i = 0; i < 4; ++i) {
    if (bytes[i] != static_cast<std::uint8_t>(kMagic[i])) {
      throw SnapshotError(SnapshotErrorCode::BadMagic, i, "not an ANS2 snapshot");
    }
  }
  if (bytes.size() < kHeader) throw SnapshotError(SnapshotErrorCode::Truncated, bytes.size(), "snapshot header truncated");
  const std::uint32_t n1 = get_u32(bytes, 4);
  const std::uint32_t n2 = get_u32(bytes, 8);
  if (n1 < 2 || n2 < 2 || n1 > (1u << 15) || n2 > (1u << 15)) {
    throw SnapshotError(SnapshotErrorCode::BadSize, n1 < 2 || n1 > (1u << 15) ? 4 : 8,
                        "implausible grid size " + std::to_string(n1) + "x" + std::to_string(n2));
  }
  const double time = get_f64(bytes, 12);
  if (!std::isfinite(time)) throw SnapshotError(SnapshotErrorCode::NonFinite, 12, "non-finite snapshot time");
  const std::size_t count = 2ull * n1 * n2;
  const std::size_t expected = kHeader + 8 * count;
  if (bytes.size() < expected) {
    throw SnapshotError(SnapshotErrorCode::Truncated, bytes.size(),
                        "snapshot payload truncated, expected " + std::to_string(expected) + " bytes");
  }
  if (bytes.size() > expected) {
    throw SnapshotError(SnapshotErrorCode::BadSize, expected, "trailing bytes after the snapshot payload");
  }

  Snapshot s{PhysicalField(TorusGrid(static_cast<int>(n1), static_cast<int>(n2))), time};
  std::size_t at = kHeader;
  for (int c = 0; c < 2; ++c) {
    for (double& v : s.field.component(c)) {
      v = get_f64(bytes, at);
      if (!std::isfinite(v)) throw SnapshotError(SnapshotErrorCode::NonFinite, at, "non-finite sample");
      at += 8;
    }
  }
  return s;
}

void write_snapshot(const PhysicalField& field, double time, const std::filesystem::path& path) {
  const auto bytes = encode_snapshot(field, time);
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw SnapshotError(SnapshotErrorCode::Io, 0, "cannot open " + path.string() + " for writing");
  f.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!f) throw SnapshotError(SnapshotErrorCode::Io, 0, "write failed for " + path.string());
}

void write_snapshot(const SpectralField& field, double time, const std::filesystem::path& path) {
  write_snapshot(inverse_transform(field), time, path);
}

Snapshot read_snapshot(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw SnapshotError(SnapshotErrorCode::Io, 0, "cannot open " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
  try {
    return decode_snapshot(bytes);
  } catch (const SnapshotError& e) {
    throw SnapshotError(e.code(), e.offset(), path.string() + ": " + e.detail());
  }
}

namespace {

const char* kDetColumns = "t,l2_sq,d1_sq,d2_sq,d1d2_sq,int_d1_sq,int_d1d2_sq,energy_residual,c_emp,weighted_h01";

std::vector<std::string> det_cells(const DiagnosticsSeries& d, std::size_t i, double residual, double weighted) {
  return {format_double(d.t[i]),         format_double(d.l2_sq[i]),       format_double(d.d1_sq[i]),
          format_double(d.d2_sq[i]),     format_double(d.d1d2_sq[i]),     format_double(d.int_d1_sq[i]),
          format_double(d.int_d1d2_sq[i]), format_double(residual),       format_double(d.c_emp[i]),
          format_double(weighted)};
}

bool keep_row(std::size_t i, std::size_t n, int every) {
  return i % static_cast<std::size_t>(every) == 0 || i + 1 == n;
}

}  // namespace

std::string det_diagnostics_csv(const Trajectory& traj, int every) {
  if (every < 1) throw Error("det_diagnostics_csv: row stride must be positive");
  const auto& d = traj.diagnostics;
  const auto residual = energy_certificate(traj);
  const auto cert = h01_certificate(d);
  std::string out = std::string(kDetColumns) + "\n";
  for (std::size_t i = 0; i < d.size(); ++i) {
    if (!keep_row(i, d.size(), every)) continue;
    out += csv_join(det_cells(d, i, residual[i], cert.weighted[i])) + "\n";
  }
  return out;
}

std::string sde_diagnostics_csv(const SdeTrajectory& traj, int every) {
  if (every < 1) throw Error("sde_diagnostics_csv: row stride must be positive");
  const auto& d = traj.diagnostics;
  std::string out = std::string(kDetColumns) + ",h_t,noise_work,hs_norm_sq\n";
  double work = 0.0;
  for (std::size_t i = 0; i < d.size(); ++i) {
    work += d.noise_work[i];
    const double residual = d.l2_sq[i] + 2.0 * d.int_d1_sq[i] - d.l2_sq.front() - work;
    if (!keep_row(i, d.size(), every)) continue;
    auto cells = det_cells(d, i, residual, d.weighted_h01[i]);
    cells.push_back(format_double(d.h_t[i]));
    cells.push_back(format_double(d.noise_work[i]));
    cells.push_back(format_double(d.hs_norm_sq[i]));
    out += csv_join(cells) + "\n";
  }
  return out;
}

std::string to_long_format(std::string_view csv) {
  std::istringstream in{std::string(csv)};
  std::string line;
  if (!std::getline(in, line)) throw Error("plot-data: empty input");
  std::vector<std::string> header;
  {
    std::istringstream hs(line);
    std::string cell;
    while (std::getline(hs, cell, ',')) header.push_back(cell);
  }
  if (header.size() < 2 || header.front() != "t") throw Error("plot-data: first column must be t");
  std::string out = "series,t,value\n";
  std::vector<std::vector<std::string>> rows;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    if (cells.size() != header.size()) {
      throw Error("plot-data: line " + std::to_string(line_no) + " has " + std::to_string(cells.size()) +
                  " cells, header has " + std::to_string(header.size()));
    }
    rows.push_back(std::move(cells));
  }
  for (std::size_t c = 1; c < header.size(); ++c) {
    for (const auto& r : rows) out += header[c] + "," + r[0] + "," + r[c] + "\n";
  }
  return out;
}

void write_text_file(const std::filesystem::path& path, std::string_view content) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw Error("cannot open " + path.string() + " for writing");
  f.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!f) throw Error("write failed for " + path.string());
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw Error("cannot open " + path.string());
  return std::string((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
}

std::string RunManifest::to_json() const {
  nlohmann::ordered_json j;
  j["command"] = command;
  j["version"] = version;
  j["timestamp"] = timestamp;
  j["wall_clock_seconds"] = wall_clock_seconds;
  j["seeds"] = seeds;
  j["outputs"] = outputs;
  j["verdicts"] = verdicts;
  j["config"] = config_echo;
  return j.dump(2) + "\n";
}

RunManifest RunManifest::from_json(std::string_view text) {
  const auto j = nlohmann::json::parse(text);
  RunManifest m;
  m.command = j.at("command").get<std::string>();
  m.version = j.at("version").get<std::string>();
  m.timestamp = j.at("timestamp").get<std::string>();
  m.wall_clock_seconds = j.at("wall_clock_seconds").get<double>();
  m.seeds = j.at("seeds").get<std::map<std::string, std::uint64_t>>();
  m.outputs = j.at("outputs").get<std::vector<std::string>>();
  m.verdicts = j.at("verdicts").get<std::map<std::string, bool>>();
  m.config_echo = j.at("config").get<std::string>();
  return m;
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace ansflow
