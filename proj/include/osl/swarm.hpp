#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "osl/config.hpp"
#include "osl/energy.hpp"
#include "osl/estimator.hpp"
#include "osl/planner.hpp"
#include "osl/rng.hpp"

namespace osl {

inline constexpr int kBitsPerValue = 32;

struct PayloadReport {
  int nominal_values = 0;  // values in the belief payload as published
  int actual_values = 0;   // values this implementation sends per exchange
};

// Per-exchange payload for a variant running with n particles: Gaussian
// summaries for the collaborative filter, raw particles otherwise.
PayloadReport payload_report(Variant variant, std::size_t n);

struct AgentState {
  int id = 0;
  Vec3 position = Vec3::Zero();
  bool cue_captured = false;
  ParticleCloud cloud;
  GaussianSummary summary;
  GaussianSummary prev_summary;
  MeasurementLog log;
  EnergyLedger ledger;
  double fly_time = 0.0;
  double hover_time = 0.0;
  double turn_time = 0.0;
  std::optional<DirectionAction> last_direction;
  bool halted = false;
  Detection last_detection;
  RngStream sensor_rng;
  RngStream filter_rng;

  double clock() const { return fly_time + hover_time + turn_time; }
};

struct TrajectoryRow {
  int iter = 0;
  int uav_id = 0;
  double x = 0, y = 0, z = 0;  // sensing position
  int detection = 0;
  std::size_t n_particles = 0;
  double ess = 0;
  double est_x = 0, est_y = 0, est_z = 0;
  double spread = 0;
  int dir_index = -1;  // -1 when the agent did not move
  int step = 0;
  bool turned = false;
  double t_cum = 0;
  double e_cum = 0;
};

enum class HaltReason { None, Declared, FalseDeclaration, Energy, TimeCap };
std::string_view to_string(HaltReason r);

struct AgentReport {
  int id = 0;
  EnergyLedger ledger;
  EnergyBreakdown energy;
  double fly_time = 0, hover_time = 0, turn_time = 0;
  Vec3 final_position = Vec3::Zero();
  HaltReason halt = HaltReason::None;
};

struct RunResult {
  std::uint64_t seed = 0;
  bool success = false;
  std::optional<double> search_time;
  std::optional<int> declaring_agent;
  std::optional<double> estimate_error;
  int iterations = 0;
  std::vector<AgentReport> agents;
  std::vector<TrajectoryRow> trajectory;
};

struct MCStats {
  std::optional<double> mean_search_time;  // over successful runs
  double success_rate = 0.0;
  int run_count = 0;
  int failures = 0;
  std::vector<RunResult> runs;  // indexed by run, seed = master + index
};

enum class Declaration { None, Success, Failure };

// Declares when the summary spread drops strictly below `spread_threshold`;
// the declaration succeeds when the mean is within `tolerance` of the source.
Declaration check_declaration(const GaussianSummary& summary,
                              const Vec3& true_source,
                              double spread_threshold, double tolerance);

// Symmetric, irreflexive neighbour sets: j in N(i) iff |u_i - u_j| <= radius.
std::vector<std::vector<int>> neighbors(std::span<const Vec3> positions,
                                        double comm_radius);

std::uint64_t agent_seed(std::uint64_t episode_seed, int agent_id);

// One search episode. Agents are stepped in ascending id order; every
// cross-agent read goes through messages snapshotted at the start of the
// iteration.
class Episode {
 public:
  Episode(const RunConfig& config, std::uint64_t seed);
  Episode(const RunConfig& config, std::uint64_t seed,
          std::span<const std::uint64_t> agent_seeds);

  // Runs one iteration. Returns false once the episode has finished.
  bool step();
  bool finished() const { return finished_; }
  int iteration() const { return k_; }
  double zeta() const { return zeta_; }
  int l_max() const { return l_max_; }

  const std::vector<AgentState>& agents() const { return agents_; }
  RunResult result() const;

 private:
  void finish_success(const AgentState& agent);
  void move_agent(AgentState& agent);

  RunConfig config_;
  std::uint64_t seed_;
  double zeta_ = 0.0;
  int l_max_ = 1;
  int k_ = 0;
  bool finished_ = false;
  std::vector<AgentState> agents_;
  std::vector<HaltReason> halt_;
  std::vector<TrajectoryRow> rows_;
  std::optional<int> winner_;
  std::optional<double> search_time_;
  std::optional<double> estimate_error_;
};

RunResult run_episode(const RunConfig& config, std::uint64_t seed);

// Runs `run_count` episodes seeded master_seed + index on `workers` threads.
// The result does not depend on the worker count.
MCStats monte_carlo(const RunConfig& config, int run_count,
                    std::uint64_t master_seed, int workers,
                    bool keep_trajectories = false);

MCStats aggregate(std::vector<RunResult> runs);

}  // namespace osl
