#include "ansflow/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <functional>
#include <map>
#include <optional>
#include <sstream>

#include "ansflow/basis.hpp"
#include "ansflow/csv.hpp"
#include "ansflow/init.hpp"
#include "ansflow/io.hpp"
#include "ansflow/norms.hpp"
#include "ansflow/transform.hpp"

namespace ansflow {

RunConfig::RunConfig() {
  noise.c = {FourierRecipe::constant(0.1), FourierRecipe{}};
  noise.b = {FourierRecipe{}, FourierRecipe::parse("0.1*cos(1,0)")};
  noise.g = {Nonlinearity::Kind::Sine, 1.0};
}

void RunConfig::set_seed(std::uint64_t seed) {
  init.seed = seed;
  sde.seed = seed;
  ensemble.base_seed = seed;
  verify.seed = seed;
  oracle.seed = seed;
}

namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

[[noreturn]] void bad_value(std::string_view key, std::string_view value, const std::string& expected) {
  throw Error(std::string(key) + ": expected " + expected + ", got '" + std::string(value) + "'");
}

double to_double(std::string_view key, std::string_view v) {
  double x = 0.0;
  const auto res = std::from_chars(v.data(), v.data() + v.size(), x);
  if (res.ec != std::errc{} || res.ptr != v.data() + v.size() || !std::isfinite(x)) bad_value(key, v, "a finite number");
  return x;
}

long long to_int(std::string_view key, std::string_view v) {
  long long x = 0;
  const auto res = std::from_chars(v.data(), v.data() + v.size(), x);
  if (res.ec != std::errc{} || res.ptr != v.data() + v.size()) bad_value(key, v, "an integer");
  return x;
}

std::uint64_t to_u64(std::string_view key, std::string_view v) {
  std::uint64_t x = 0;
  const auto res = std::from_chars(v.data(), v.data() + v.size(), x);
  if (res.ec != std::errc{} || res.ptr != v.data() + v.size()) bad_value(key, v, "an unsigned integer");
  return x;
}

bool to_bool(std::string_view key, std::string_view v) {
  if (v == "true" || v == "1") return true;
  if (v == "false" || v == "0") return false;
  bad_value(key, v, "true or false");
}

double positive(std::string_view key, double x) {
  if (!(x > 0.0)) throw Error(std::string(key) + " must be positive (got " + format_double(x) + ")");
  return x;
}

double nonnegative(std::string_view key, double x) {
  if (!(x >= 0.0)) throw Error(std::string(key) + " must be nonnegative (got " + format_double(x) + ")");
  return x;
}

double open_unit(std::string_view key, double x) {
  if (!(x > 0.0 && x < 1.0)) throw Error(std::string(key) + " must lie in (0, 1) (got " + format_double(x) + ")");
  return x;
}

long long at_least(std::string_view key, long long x, long long lo) {
  if (x < lo) throw Error(std::string(key) + " must be at least " + std::to_string(lo) + " (got " + std::to_string(x) + ")");
  return x;
}

std::string opt_str(const std::optional<double>& v) { return v ? format_double(*v) : "auto"; }

std::optional<double> to_opt(std::string_view key, std::string_view v) {
  if (v == "auto") return std::nullopt;
  return nonnegative(key, to_double(key, v));
}

struct Key {
  std::string name;
  std::function<void(RunConfig&, std::string_view)> set;
  std::function<std::string(const RunConfig&)> get;
};

const std::vector<Key>& fixed_keys() {
  static const std::vector<Key> keys = {
      {"grid.n1", [](RunConfig& c, std::string_view v) { c.n1 = static_cast<int>(at_least("grid.n1", to_int("grid.n1", v), 2)); },
       [](const RunConfig& c) { return std::to_string(c.n1); }},
      {"grid.n2", [](RunConfig& c, std::string_view v) { c.n2 = static_cast<int>(at_least("grid.n2", to_int("grid.n2", v), 2)); },
       [](const RunConfig& c) { return std::to_string(c.n2); }},
      {"init.kind",
       [](RunConfig& c, std::string_view v) {
         if (v != "random" && v != "shear_x1" && v != "shear_x2" && v != "taylor_green" && v != "snapshot") {
           bad_value("init.kind", v, "random, shear_x1, shear_x2, taylor_green or snapshot");
         }
         c.init.kind = std::string(v);
       },
       [](const RunConfig& c) { return c.init.kind; }},
      {"init.energy", [](RunConfig& c, std::string_view v) { c.init.energy = nonnegative("init.energy", to_double("init.energy", v)); },
       [](const RunConfig& c) { return format_double(c.init.energy); }},
      {"init.seed", [](RunConfig& c, std::string_view v) { c.init.seed = to_u64("init.seed", v); },
       [](const RunConfig& c) { return std::to_string(c.init.seed); }},
      {"init.band", [](RunConfig& c, std::string_view v) { c.init.band = static_cast<int>(at_least("init.band", to_int("init.band", v), 1)); },
       [](const RunConfig& c) { return std::to_string(c.init.band); }},
      {"init.width", [](RunConfig& c, std::string_view v) { c.init.width = positive("init.width", to_double("init.width", v)); },
       [](const RunConfig& c) { return format_double(c.init.width); }},
      {"init.amplitude", [](RunConfig& c, std::string_view v) { c.init.amplitude = to_double("init.amplitude", v); },
       [](const RunConfig& c) { return format_double(c.init.amplitude); }},
      {"init.path", [](RunConfig& c, std::string_view v) { c.init.path = std::string(v); },
       [](const RunConfig& c) { return c.init.path; }},
      {"time.dt",
       [](RunConfig& c, std::string_view v) {
         c.det.dt = positive("time.dt", to_double("time.dt", v));
         c.sde.dt = c.det.dt;
       },
       [](const RunConfig& c) { return format_double(c.det.dt); }},
      {"time.t_end",
       [](RunConfig& c, std::string_view v) {
         c.det.t_end = nonnegative("time.t_end", to_double("time.t_end", v));
         c.sde.t_end = c.det.t_end;
       },
       [](const RunConfig& c) { return format_double(c.det.t_end); }},
      {"time.integrator",
       [](RunConfig& c, std::string_view v) {
         try {
           c.det.integrator = parse_integrator(v);
         } catch (const Error&) {
           bad_value("time.integrator", v, "if-euler, if-rk2 or if-rk4");
         }
       },
       [](const RunConfig& c) { return to_string(c.det.integrator); }},
      {"time.snapshot_every",
       [](RunConfig& c, std::string_view v) {
         c.det.snapshot_every = static_cast<int>(at_least("time.snapshot_every", to_int("time.snapshot_every", v), 0));
         c.sde.snapshot_every = c.det.snapshot_every;
       },
       [](const RunConfig& c) { return std::to_string(c.det.snapshot_every); }},
      {"model.eps_v", [](RunConfig& c, std::string_view v) { c.det.eps_v = nonnegative("model.eps_v", to_double("model.eps_v", v)); },
       [](const RunConfig& c) { return format_double(c.det.eps_v); }},
      {"model.dealias", [](RunConfig& c, std::string_view v) { c.det.dealias = to_bool("model.dealias", v); },
       [](const RunConfig& c) { return c.det.dealias ? "true" : "false"; }},
      {"sde.galerkin_n",
       [](RunConfig& c, std::string_view v) {
         c.sde.galerkin_n = static_cast<std::size_t>(at_least("sde.galerkin_n", to_int("sde.galerkin_n", v), 1));
       },
       [](const RunConfig& c) { return std::to_string(c.sde.galerkin_n); }},
      {"sde.seed", [](RunConfig& c, std::string_view v) { c.sde.seed = to_u64("sde.seed", v); },
       [](const RunConfig& c) { return std::to_string(c.sde.seed); }},
      {"sde.drop_nonlinearity",
       [](RunConfig& c, std::string_view v) { c.sde.drop_nonlinearity = to_bool("sde.drop_nonlinearity", v); },
       [](const RunConfig& c) { return c.sde.drop_nonlinearity ? "true" : "false"; }},
      {"sde.alpha_tilde", [](RunConfig& c, std::string_view v) { c.sde.alpha_tilde = open_unit("sde.alpha_tilde", to_double("sde.alpha_tilde", v)); },
       [](const RunConfig& c) { return format_double(c.sde.alpha_tilde); }},
      {"sde.alpha_hat", [](RunConfig& c, std::string_view v) { c.sde.alpha_hat = open_unit("sde.alpha_hat", to_double("sde.alpha_hat", v)); },
       [](const RunConfig& c) { return format_double(c.sde.alpha_hat); }},
      {"noise.g",
       [](RunConfig& c, std::string_view v) {
         try {
           c.noise.g = Nonlinearity::parse(v);
         } catch (const Error& e) {
           throw Error(std::string("noise.g: ") + e.what());
         }
       },
       [](const RunConfig& c) { return c.noise.g.to_string(); }},
      {"noise.eta", [](RunConfig& c, std::string_view v) { c.noise.eta = positive("noise.eta", to_double("noise.eta", v)); },
       [](const RunConfig& c) { return format_double(c.noise.eta); }},
      {"noise.m1", [](RunConfig& c, std::string_view v) { c.noise.m1_declared = to_opt("noise.m1", v); },
       [](const RunConfig& c) { return opt_str(c.noise.m1_declared); }},
      {"noise.m2", [](RunConfig& c, std::string_view v) { c.noise.m2_declared = to_opt("noise.m2", v); },
       [](const RunConfig& c) { return opt_str(c.noise.m2_declared); }},
      {"noise.cg", [](RunConfig& c, std::string_view v) { c.noise.cg_declared = to_opt("noise.cg", v); },
       [](const RunConfig& c) { return opt_str(c.noise.cg_declared); }},
      {"ensemble.size",
       [](RunConfig& c, std::string_view v) {
         c.ensemble.size = static_cast<std::size_t>(at_least("ensemble.size", to_int("ensemble.size", v), 1));
       },
       [](const RunConfig& c) { return std::to_string(c.ensemble.size); }},
      {"ensemble.base_seed", [](RunConfig& c, std::string_view v) { c.ensemble.base_seed = to_u64("ensemble.base_seed", v); },
       [](const RunConfig& c) { return std::to_string(c.ensemble.base_seed); }},
      {"ensemble.workers",
       [](RunConfig& c, std::string_view v) {
         c.ensemble.workers = static_cast<unsigned>(at_least("ensemble.workers", to_int("ensemble.workers", v), 0));
       },
       [](const RunConfig& c) { return std::to_string(c.ensemble.workers); }},
      {"ensemble.levels",
       [](RunConfig& c, std::string_view v) {
         std::vector<std::size_t> levels;
         std::size_t pos = 0;
         while (pos <= v.size()) {
           const auto comma = v.find(',', pos);
           const auto item = trim(v.substr(pos, comma == std::string_view::npos ? std::string_view::npos : comma - pos));
           levels.push_back(static_cast<std::size_t>(at_least("ensemble.levels", to_int("ensemble.levels", item), 1)));
           if (comma == std::string_view::npos) break;
           pos = comma + 1;
         }
         c.ensemble.levels = levels;
       },
       [](const RunConfig& c) {
         std::string s;
         for (std::size_t i = 0; i < c.ensemble.levels.size(); ++i) s += (i ? "," : "") + std::to_string(c.ensemble.levels[i]);
         return s;
       }},
      {"verify.samples",
       [](RunConfig& c, std::string_view v) {
         c.verify.samples = static_cast<std::size_t>(at_least("verify.samples", to_int("verify.samples", v), 1));
       },
       [](const RunConfig& c) { return std::to_string(c.verify.samples); }},
      {"verify.seed", [](RunConfig& c, std::string_view v) { c.verify.seed = to_u64("verify.seed", v); },
       [](const RunConfig& c) { return std::to_string(c.verify.seed); }},
      {"uniqueness.mode",
       [](RunConfig& c, std::string_view v) {
         if (v != "det" && v != "sde") bad_value("uniqueness.mode", v, "det or sde");
         c.uniqueness.mode = std::string(v);
       },
       [](const RunConfig& c) { return c.uniqueness.mode; }},
      {"uniqueness.perturbation",
       [](RunConfig& c, std::string_view v) { c.uniqueness.perturbation = nonnegative("uniqueness.perturbation", to_double("uniqueness.perturbation", v)); },
       [](const RunConfig& c) { return format_double(c.uniqueness.perturbation); }},
      {"uniqueness.tolerance",
       [](RunConfig& c, std::string_view v) { c.uniqueness.tolerance = nonnegative("uniqueness.tolerance", to_double("uniqueness.tolerance", v)); },
       [](const RunConfig& c) { return format_double(c.uniqueness.tolerance); }},
      {"oracle.n", [](RunConfig& c, std::string_view v) { c.oracle.n = static_cast<int>(at_least("oracle.n", to_int("oracle.n", v), 2)); },
       [](const RunConfig& c) { return std::to_string(c.oracle.n); }},
      {"oracle.fields",
       [](RunConfig& c, std::string_view v) {
         c.oracle.fields = static_cast<std::size_t>(at_least("oracle.fields", to_int("oracle.fields", v), 1));
       },
       [](const RunConfig& c) { return std::to_string(c.oracle.fields); }},
      {"oracle.seed", [](RunConfig& c, std::string_view v) { c.oracle.seed = to_u64("oracle.seed", v); },
       [](const RunConfig& c) { return std::to_string(c.oracle.seed); }},
      {"output.every",
       [](RunConfig& c, std::string_view v) { c.output_every = static_cast<int>(at_least("output.every", to_int("output.every", v), 1)); },
       [](const RunConfig& c) { return std::to_string(c.output_every); }},
  };
  return keys;
}

struct Entry {
  std::string value;
  int line = 0;
};

}  // namespace

RunConfig parse_config(std::string_view text) {
  std::map<std::string, Entry> entries;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    const auto nl = text.find('\n', pos);
    std::string_view line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() : nl + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw Error("line " + std::to_string(line_no) + ": expected 'section.key = value'");
    }
    const std::string key(trim(line.substr(0, eq)));
    const std::string value(trim(line.substr(eq + 1)));
    if (key.empty()) throw Error("line " + std::to_string(line_no) + ": empty key");
    if (entries.count(key) != 0) {
      throw Error("line " + std::to_string(line_no) + ": duplicate key '" + key + "' (first set on line " +
                  std::to_string(entries[key].line) + ")");
    }
    entries[key] = Entry{value, line_no};
  }

  RunConfig cfg;
  auto apply = [&](const std::string& key, const std::function<void(std::string_view)>& set) {
    const auto it = entries.find(key);
    if (it == entries.end()) return;
    try {
      set(it->second.value);
    } catch (const Error& e) {
      throw Error("line " + std::to_string(it->second.line) + ": " + e.what());
    }
    entries.erase(it);
  };

  for (const auto& k : fixed_keys()) apply(k.name, [&](std::string_view v) { k.set(cfg, v); });

  std::size_t modes = cfg.noise.n_modes();
  apply("noise.modes", [&](std::string_view v) {
    modes = static_cast<std::size_t>(at_least("noise.modes", to_int("noise.modes", v), 1));
  });
  if (modes != cfg.noise.n_modes()) {
    cfg.noise.c.assign(modes, FourierRecipe{});
    cfg.noise.b.assign(modes, FourierRecipe{});
  }
  for (std::size_t k = 0; k < modes; ++k) {
    for (const char* which : {"c", "b"}) {
      const std::string key = std::string("noise.") + which + std::to_string(k);
      apply(key, [&](std::string_view v) {
        try {
          (which[0] == 'c' ? cfg.noise.c : cfg.noise.b)[k] = FourierRecipe::parse(v);
        } catch (const Error& e) {
          throw Error(key + ": " + e.what());
        }
      });
    }
  }

  if (!entries.empty()) {
    const auto& [key, e] = *std::min_element(entries.begin(), entries.end(), [](const auto& a, const auto& b) {
      return a.second.line < b.second.line;
    });
    throw Error("line " + std::to_string(e.line) + ": unknown key '" + key + "'");
  }

  try {
    cfg.noise.validate();
  } catch (const Error& e) {
    throw Error(std::string("noise: ") + e.what());
  }
  if (cfg.init.kind == "snapshot" && cfg.init.path.empty()) throw Error("init.path: required when init.kind = snapshot");
  return cfg;
}

std::string echo_config(const RunConfig& cfg) {
  std::ostringstream os;
  std::string section;
  auto emit = [&](const std::string& key, const std::string& value) {
    const std::string sec = key.substr(0, key.find('.'));
    if (sec != section) {
      if (!section.empty()) os << '\n';
      section = sec;
    }
    os << key << " = " << value << '\n';
  };
  for (const auto& k : fixed_keys()) {
    emit(k.name, k.get(cfg));
    if (k.name == "noise.cg") {
      emit("noise.modes", std::to_string(cfg.noise.n_modes()));
      for (std::size_t m = 0; m < cfg.noise.n_modes(); ++m) {
        emit("noise.c" + std::to_string(m), cfg.noise.c[m].to_string());
        emit("noise.b" + std::to_string(m), cfg.noise.b[m].to_string());
      }
    }
  }
  return os.str();
}

bool operator==(const RunConfig& a, const RunConfig& b) { return echo_config(a) == echo_config(b); }

std::vector<std::string> config_warnings(const RunConfig& cfg) {
  std::vector<std::string> out;
  const auto k = condition_c_bounds(cfg.noise);
  const auto gate = condition_c_gate(k);
  if (!gate.k2_ok) out.push_back("noise: K2 = " + format_double(k.k2) + " violates K2 < 2/11");
  if (!gate.k2t_ok) out.push_back("noise: K2~ = " + format_double(k.k2t) + " violates K2~ < 2/5");
  if (!gate.l2_ok) out.push_back("noise: L2 = " + format_double(k.l2) + " violates L2 < 2/5");
  return out;
}

SpectralField build_initial(const RunConfig& cfg, std::size_t galerkin_n) {
  const TorusGrid grid(cfg.n1, cfg.n2);
  SpectralField u(grid);
  const auto& in = cfg.init;
  if (in.kind == "random") {
    u = random_solenoidal(grid, in.seed, RandomFieldSpec{in.band, in.width, in.energy});
  } else if (in.kind == "shear_x1") {
    u = shear_x1(grid, in.amplitude);
  } else if (in.kind == "shear_x2") {
    u = shear_x2(grid, in.amplitude);
  } else if (in.kind == "taylor_green") {
    u = taylor_green(grid, in.amplitude);
  } else {
    const Snapshot s = read_snapshot(in.path);
    if (!(s.field.grid() == grid)) throw Error("init.path: snapshot grid does not match grid.n1 x grid.n2");
    u = forward_transform(s.field);
  }
  if (galerkin_n > 0) {
    galerkin_project_inplace(u, galerkin_n);
    if (in.kind == "random") {
      const double e = l2_norm_sq(u);
      if (e > 0.0) u *= std::sqrt(in.energy / e);
    }
  }
  return u;
}

}  // namespace ansflow
