#include "osl/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <sstream>

namespace osl {

namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(first, last - first + 1));
}

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

double to_double(std::string_view key, std::string_view text) {
  double v = 0.0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (res.ec != std::errc{} || res.ptr != text.data() + text.size() ||
      !std::isfinite(v)) {
    throw ConfigError(std::string(key), 0,
                      "expected a number, got '" + std::string(text) + "'");
  }
  return v;
}

template <typename Int>
Int to_integer(std::string_view key, std::string_view text) {
  Int v{};
  const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (res.ec != std::errc{} || res.ptr != text.data() + text.size()) {
    throw ConfigError(std::string(key), 0,
                      "expected an integer, got '" + std::string(text) + "'");
  }
  return v;
}

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    out.push_back(trim(s.substr(start, pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

std::string format_positions(const std::vector<Vec3>& ps) {
  std::string out;
  for (std::size_t i = 0; i < ps.size(); ++i) {
    if (i) out += ';';
    out += format_double(ps[i].x()) + ',' + format_double(ps[i].y()) + ',' +
           format_double(ps[i].z());
  }
  return out;
}

std::vector<Vec3> parse_positions(std::string_view key, std::string_view text) {
  std::vector<Vec3> out;
  if (trim(text).empty()) return out;
  for (const auto& item : split(text, ';')) {
    const auto xyz = split(item, ',');
    if (xyz.size() != 3) {
      throw ConfigError(std::string(key), 0, "expected x,y,z triples separated by ';'");
    }
    out.emplace_back(to_double(key, xyz[0]), to_double(key, xyz[1]),
                     to_double(key, xyz[2]));
  }
  return out;
}

struct KeySpec {
  const char* name;
  std::function<std::string(const RunConfig&)> get;
  std::function<void(RunConfig&, std::string_view key, std::string_view)> set;
};

#define OSL_DOUBLE_KEY(NAME, FIELD)                                              \
  KeySpec {                                                                      \
    NAME, [](const RunConfig& c) { return format_double(c.FIELD); },             \
        [](RunConfig& c, std::string_view k, std::string_view v) {               \
          c.FIELD = to_double(k, v);                                             \
        }                                                                        \
  }

#define OSL_INT_KEY(NAME, FIELD, TYPE)                                           \
  KeySpec {                                                                      \
    NAME, [](const RunConfig& c) { return std::to_string(c.FIELD); },            \
        [](RunConfig& c, std::string_view k, std::string_view v) {               \
          c.FIELD = to_integer<TYPE>(k, v);                                      \
        }                                                                        \
  }

const std::vector<KeySpec>& key_specs() {
  static const std::vector<KeySpec> specs = {
      // plume
      OSL_DOUBLE_KEY("release_rate", plume.release_rate),
      OSL_DOUBLE_KEY("wind_speed", plume.wind_speed),
      OSL_DOUBLE_KEY("diffusivity", plume.diffusivity),
      OSL_DOUBLE_KEY("lifetime", plume.lifetime),
      OSL_DOUBLE_KEY("sensor_radius", plume.sensor_radius),
      OSL_DOUBLE_KEY("dt", plume.dt),
      // volume and source
      OSL_DOUBLE_KEY("lx", volume.lx),
      OSL_DOUBLE_KEY("ly", volume.ly),
      OSL_DOUBLE_KEY("lz", volume.lz),
      OSL_DOUBLE_KEY("g", volume.cell),
      OSL_DOUBLE_KEY("source_x", source.position.x()),
      OSL_DOUBLE_KEY("source_y", source.position.y()),
      OSL_DOUBLE_KEY("source_z", source.position.z()),
      // energy
      OSL_DOUBLE_KEY("flying_power", energy.flying_power),
      OSL_DOUBLE_KEY("hover_power", energy.hover_power),
      OSL_DOUBLE_KEY("turn_energy", energy.turn_energy),
      OSL_DOUBLE_KEY("hover_duration", energy.hover_duration),
      OSL_DOUBLE_KEY("capacitance", energy.capacitance),
      OSL_DOUBLE_KEY("cycles_per_bit", energy.cycles_per_bit),
      OSL_DOUBLE_KEY("cpu_frequency", energy.cpu_frequency),
      OSL_DOUBLE_KEY("transmit_power", energy.transmit_power),
      OSL_DOUBLE_KEY("transmit_rate", energy.transmit_rate),
      OSL_DOUBLE_KEY("energy_budget", energy.budget),
      // estimator
      OSL_INT_KEY("particles", estimator.particles, std::size_t),
      OSL_INT_KEY("min_particles", estimator.min_particles, std::size_t),
      OSL_INT_KEY("max_particles", estimator.max_particles, std::size_t),
      OSL_DOUBLE_KEY("gamma1", estimator.gamma1),
      OSL_DOUBLE_KEY("gamma2", estimator.gamma2),
      OSL_INT_KEY("cue_window", estimator.cue_window, int),
      OSL_DOUBLE_KEY("drift_scale", estimator.drift_scale),
      // planner
      OSL_DOUBLE_KEY("kappa1", planner.kappa1),
      OSL_DOUBLE_KEY("kappa2", planner.kappa2),
      OSL_INT_KEY("step_ceiling", planner.step_ceiling, int),
      OSL_DOUBLE_KEY("conc_threshold", planner.conc_threshold),
      // swarm
      OSL_INT_KEY("uav_count", swarm.uav_count, int),
      KeySpec{"initial_positions",
              [](const RunConfig& c) { return format_positions(c.swarm.initial_positions); },
              [](RunConfig& c, std::string_view k, std::string_view v) {
                c.swarm.initial_positions = parse_positions(k, v);
              }},
      OSL_DOUBLE_KEY("comm_radius", swarm.comm_radius),
      KeySpec{"algo",
              [](const RunConfig& c) { return std::string(to_string(c.swarm.variant)); },
              [](RunConfig& c, std::string_view k, std::string_view v) {
                const auto variant = parse_variant(v);
                if (!variant) {
                  throw ConfigError(std::string(k), 0,
                                    "unknown algorithm '" + std::string(v) +
                                        "' (expected muc-osl, col-inf, col-pf or adap-pp)");
                }
                c.swarm.variant = *variant;
              }},
      OSL_INT_KEY("k_max", swarm.k_max, int),
      OSL_DOUBLE_KEY("declare_spread", swarm.declare_spread),
      OSL_DOUBLE_KEY("success_tolerance", swarm.success_tolerance),
      OSL_DOUBLE_KEY("speed", swarm.speed),
      OSL_DOUBLE_KEY("turn_duration", swarm.turn_duration),
      OSL_DOUBLE_KEY("time_cap", swarm.time_cap),
      OSL_INT_KEY("seed", swarm.seed, std::uint64_t),
  };
  return specs;
}

#undef OSL_DOUBLE_KEY
#undef OSL_INT_KEY

const KeySpec* find_key(std::string_view key) {
  for (const auto& spec : key_specs()) {
    if (key == spec.name) return &spec;
  }
  return nullptr;
}

void require(bool ok, const char* key, const std::string& message) {
  if (!ok) throw ConfigError(key, 0, message);
}

}  // namespace

std::string_view to_string(Variant v) {
  switch (v) {
    case Variant::MucOsl: return "muc-osl";
    case Variant::ColInf: return "col-inf";
    case Variant::ColPf: return "col-pf";
    case Variant::AdapPp: return "adap-pp";
  }
  return "unknown";
}

std::optional<Variant> parse_variant(std::string_view name) {
  for (Variant v : all_variants()) {
    if (to_string(v) == name) return v;
  }
  return std::nullopt;
}

const std::vector<Variant>& all_variants() {
  static const std::vector<Variant> vs = {Variant::MucOsl, Variant::ColInf,
                                          Variant::ColPf, Variant::AdapPp};
  return vs;
}

bool uses_collaborative_filter(Variant v) {
  return v == Variant::MucOsl || v == Variant::ColPf;
}

bool uses_adaptive_step(Variant v) {
  return v == Variant::MucOsl || v == Variant::AdapPp;
}

ConfigError::ConfigError(std::string key, int line, const std::string& message)
    : std::runtime_error((line > 0 ? "line " + std::to_string(line) + ": " : std::string()) +
                         "key '" + key + "': " + message),
      key_(std::move(key)),
      line_(line) {}

void RunConfig::validate() const {
  auto wrap = [](const char* key, auto&& check) {
    try {
      check();
    } catch (const std::invalid_argument& e) {
      throw ConfigError(key, 0, e.what());
    }
  };
  require(plume.release_rate > 0, "release_rate", "must be positive");
  require(plume.wind_speed > 0, "wind_speed", "must be positive");
  require(plume.diffusivity > 0, "diffusivity", "must be positive");
  require(plume.lifetime > 0, "lifetime", "must be positive");
  require(plume.sensor_radius > 0, "sensor_radius", "must be positive");
  require(plume.dt > 0, "dt", "must be positive");
  require(volume.lx > 0, "lx", "must be positive");
  require(volume.ly > 0, "ly", "must be positive");
  require(volume.lz > 0, "lz", "must be positive");
  require(volume.cell > 0, "g", "must be positive");
  wrap("g", [&] { validate_volume(volume, plume); });
  require(volume.cell <= std::min({volume.lx, volume.ly, volume.lz}), "g",
          "must not exceed the smallest extent");
  require(source.position.x() >= 0 && source.position.x() <= volume.lx, "source_x",
          "must lie within [0, lx]");
  require(source.position.y() >= 0 && source.position.y() <= volume.ly, "source_y",
          "must lie within [0, ly]");
  require(source.position.z() >= 0 && source.position.z() <= volume.lz, "source_z",
          "must lie within [0, lz]");
  wrap("energy", [&] { energy.validate(); });

  require(estimator.min_particles >= 1, "min_particles", "must be at least 1");
  require(estimator.min_particles <= estimator.max_particles, "min_particles",
          "must not exceed max_particles");
  require(estimator.particles >= estimator.min_particles &&
              estimator.particles <= estimator.max_particles,
          "particles", "must lie within [min_particles, max_particles]");
  require(estimator.gamma1 > 0, "gamma1", "must be positive");
  require(estimator.gamma2 > 0, "gamma2", "must be positive");
  require(estimator.cue_window >= 1, "cue_window", "must be at least 1");
  require(estimator.drift_scale >= 0 && estimator.drift_scale <= 1, "drift_scale",
          "must lie in [0, 1]");

  require(planner.kappa1 >= 0, "kappa1", "must be non-negative");
  require(planner.kappa2 >= 0, "kappa2", "must be non-negative");
  require(planner.step_ceiling >= 1, "step_ceiling", "must be at least 1");
  require(planner.conc_threshold >= 0, "conc_threshold",
          "must be non-negative (0 selects the default)");

  require(swarm.uav_count >= 1, "uav_count", "must be at least 1");
  require(swarm.initial_positions.empty() ||
              static_cast<int>(swarm.initial_positions.size()) == swarm.uav_count,
          "initial_positions", "must list exactly uav_count positions");
  for (const auto& p : swarm.initial_positions) {
    require(volume.contains(p), "initial_positions", "position outside the volume");
  }
  require(swarm.comm_radius >= 0, "comm_radius", "must be non-negative");
  require(swarm.k_max >= 0, "k_max", "must be non-negative");
  require(swarm.declare_spread > 0, "declare_spread", "must be positive");
  require(swarm.success_tolerance > 0, "success_tolerance", "must be positive");
  require(swarm.speed > 0, "speed", "must be positive");
  require(swarm.turn_duration >= 0, "turn_duration", "must be non-negative");
  require(swarm.time_cap > 0, "time_cap", "must be positive");
}

double RunConfig::concentration_threshold() const {
  return planner.conc_threshold > 0 ? planner.conc_threshold
                                    : default_concentration_threshold(plume);
}

void set_config_value(RunConfig& config, std::string_view key,
                      std::string_view value) {
  if (key == "volume") {
    // Convenience alias: LXxLYxLZ.
    const auto parts = split(value, 'x');
    if (parts.size() != 3) {
      throw ConfigError("volume", 0, "expected LXxLYxLZ, e.g. 100x60x30");
    }
    config.volume.lx = to_double(key, parts[0]);
    config.volume.ly = to_double(key, parts[1]);
    config.volume.lz = to_double(key, parts[2]);
    return;
  }
  const KeySpec* spec = find_key(key);
  if (!spec) throw ConfigError(std::string(key), 0, "unknown key");
  spec->set(config, key, trim(value));
}

bool is_config_key(std::string_view key) {
  return key == "volume" || find_key(key) != nullptr;
}

std::vector<std::string> config_keys() {
  std::vector<std::string> out;
  for (const auto& spec : key_specs()) out.emplace_back(spec.name);
  return out;
}

RunConfig parse_config(std::string_view text) {
  RunConfig config;
  std::istringstream in{std::string(text)};
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const std::string body = trim(line);
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(body, number, "expected 'key = value'");
    }
    const std::string key = trim(std::string_view(body).substr(0, eq));
    const std::string value = trim(std::string_view(body).substr(eq + 1));
    try {
      set_config_value(config, key, value);
    } catch (const ConfigError& e) {
      const std::string what = e.what();
      const auto colon = what.find("': ");
      throw ConfigError(key, number,
                        colon == std::string::npos ? what : what.substr(colon + 3));
    }
  }
  try {
    config.validate();
  } catch (const ConfigError& e) {
    // Point at the line that set the offending key when there is one.
    int where = 0;
    std::istringstream again{std::string(text)};
    int n = 0;
    while (std::getline(again, line)) {
      ++n;
      const auto eq = line.find('=');
      if (eq != std::string::npos && trim(line.substr(0, eq)) == e.key()) where = n;
    }
    const std::string what = e.what();
    const auto colon = what.find("': ");
    throw ConfigError(e.key(), where,
                      colon == std::string::npos ? what : what.substr(colon + 3));
  }
  return config;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read config file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string serialize_config(const RunConfig& config) {
  std::string out;
  for (const auto& spec : key_specs()) {
    out += spec.name;
    out += " = ";
    out += spec.get(config);
    out += '\n';
  }
  return out;
}

std::string config_hash(const RunConfig& config) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : serialize_config(config)) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::vector<Vec3> default_initial_positions(int count, const SearchVolume& volume) {
  static const double kFirst[] = {10.0, 30.0, 60.0};
  std::vector<Vec3> out;
  for (int i = 0; i < count; ++i) {
    double x = i < 3 ? kFirst[i] : 60.0 + 20.0 * (i - 2);
    x = std::fmod(x, volume.lx + 1e-9);
    out.push_back(volume.clamp(Vec3(x, 10.0, 5.0)));
  }
  return out;
}

std::vector<Vec3> initial_positions(const RunConfig& config) {
  if (!config.swarm.initial_positions.empty()) return config.swarm.initial_positions;
  return default_initial_positions(config.swarm.uav_count, config.volume);
}

}  // namespace osl
