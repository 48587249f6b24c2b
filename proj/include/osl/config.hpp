#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "osl/energy.hpp"
#include "osl/geometry.hpp"
#include "osl/plume.hpp"

namespace osl {

enum class Variant { MucOsl, ColInf, ColPf, AdapPp };

std::string_view to_string(Variant v);
std::optional<Variant> parse_variant(std::string_view name);
const std::vector<Variant>& all_variants();

// Collaborative filter: adaptive particle count plus upwind and
// neighbour-guided particle moves, Gaussian summaries on the wire.
bool uses_collaborative_filter(Variant v);
// Adaptive step length; otherwise every move is one grid cell.
bool uses_adaptive_step(Variant v);

struct EstimatorParams {
  std::size_t particles = 100;
  std::size_t min_particles = 20;
  std::size_t max_particles = 160;
  double gamma1 = 1.8;
  double gamma2 = 4.0;
  int cue_window = 3;  // delta_c
  double drift_scale = 1.0;  // multiplies the upwind particle displacement
};

struct PlannerParams {
  double kappa1 = 1.0;   // entropy weight per metre of cloud spread
  double kappa2 = 10.0;  // metres per revisited measurement point
  int step_ceiling = 10;
  // 0 selects 1% of the rate at one typical length.
  double conc_threshold = 0.0;
};

struct SwarmConfig {
  int uav_count = 3;
  // Empty selects the default lower-left placement.
  std::vector<Vec3> initial_positions;
  double comm_radius = 200.0;
  Variant variant = Variant::MucOsl;
  int k_max = 800;
  double declare_spread = 5.0;     // delta_dec, m
  double success_tolerance = 5.0;  // eps_succ, m
  double speed = 1.0;              // m/s
  double turn_duration = 1.0;      // s per turn
  double time_cap = 1200.0;        // s per agent
  std::uint64_t seed = 1;
};

struct RunConfig {
  PlumeParams plume;
  SearchVolume volume;
  SourceConfig source;
  EnergyParams energy;
  EstimatorParams estimator;
  PlannerParams planner;
  SwarmConfig swarm;

  // Re-checks every module invariant; throws ConfigError naming the key.
  void validate() const;
  double concentration_threshold() const;
};

class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string key, int line, const std::string& message);
  const std::string& key() const { return key_; }
  int line() const { return line_; }

 private:
  std::string key_;
  int line_;
};

// `key = value` lines, `#` starts a comment. Absent keys keep their
// defaults; unknown keys, malformed values and invariant violations throw.
RunConfig parse_config(std::string_view text);
RunConfig load_config(const std::string& path);

// Canonical text form: every key, fixed order, shortest round-trip numbers.
std::string serialize_config(const RunConfig& config);

// Assigns one key (as from a config line or a sweep value). Throws
// ConfigError with line 0 on failure; does not re-validate.
void set_config_value(RunConfig& config, std::string_view key,
                      std::string_view value);
bool is_config_key(std::string_view key);
std::vector<std::string> config_keys();

// FNV-1a 64 of the canonical text, as 16 hex digits.
std::string config_hash(const RunConfig& config);

// Lower-left corner placement: (10,10,5), (30,10,5), (60,10,5), then every
// 20 m along x, wrapped into the volume.
std::vector<Vec3> default_initial_positions(int count,
                                            const SearchVolume& volume);
std::vector<Vec3> initial_positions(const RunConfig& config);

}  // namespace osl
