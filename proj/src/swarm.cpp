#include "osl/swarm.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <stdexcept>
#include <thread>

namespace osl {

PayloadReport payload_report(Variant variant, std::size_t n) {
  if (uses_collaborative_filter(variant)) {
    return {kSummaryPayloadValues, kMessagePayloadValues};
  }
  const int values = particle_payload_values(n);
  return {values, values};
}

std::string_view to_string(HaltReason r) {
  switch (r) {
    case HaltReason::None: return "active";
    case HaltReason::Declared: return "declared";
    case HaltReason::FalseDeclaration: return "false-declaration";
    case HaltReason::Energy: return "energy";
    case HaltReason::TimeCap: return "time-cap";
  }
  return "unknown";
}

Declaration check_declaration(const GaussianSummary& summary,
                              const Vec3& true_source,
                              double spread_threshold, double tolerance) {
  if (!(summary.spread() < spread_threshold)) return Declaration::None;
  return (summary.mean - true_source).norm() <= tolerance ? Declaration::Success
                                                          : Declaration::Failure;
}

std::vector<std::vector<int>> neighbors(std::span<const Vec3> positions,
                                        double comm_radius) {
  const int n = static_cast<int>(positions.size());
  std::vector<std::vector<int>> out(static_cast<std::size_t>(n));
  if (!(comm_radius > 0.0)) return out;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if ((positions[i] - positions[j]).norm() <= comm_radius) {
        out[i].push_back(j);
        out[j].push_back(i);
      }
    }
  }
  for (auto& s : out) std::sort(s.begin(), s.end());
  return out;
}

std::uint64_t agent_seed(std::uint64_t episode_seed, int agent_id) {
  return mix_seed(episode_seed, static_cast<std::uint64_t>(agent_id));
}

namespace {

std::vector<std::uint64_t> derive_agent_seeds(std::uint64_t seed, int count) {
  std::vector<std::uint64_t> out;
  for (int i = 0; i < count; ++i) out.push_back(agent_seed(seed, i));
  return out;
}

}  // namespace

Episode::Episode(const RunConfig& config, std::uint64_t seed)
    : Episode(config, seed, derive_agent_seeds(seed, config.swarm.uav_count)) {}

Episode::Episode(const RunConfig& config, std::uint64_t seed,
                 std::span<const std::uint64_t> agent_seeds)
    : config_(config), seed_(seed) {
  config_.validate();
  if (static_cast<int>(agent_seeds.size()) != config_.swarm.uav_count) {
    throw std::invalid_argument("one seed per agent is required");
  }
  zeta_ = diffusion_ratio(config_.plume, config_.source, config_.volume,
                          config_.concentration_threshold());
  l_max_ = max_step(zeta_, config_.planner.step_ceiling);

  const auto starts = initial_positions(config_);
  const auto& est = config_.estimator;
  for (int i = 0; i < config_.swarm.uav_count; ++i) {
    AgentState a;
    a.id = i;
    a.position = starts[static_cast<std::size_t>(i)];
    a.sensor_rng = RngStream(mix_seed(agent_seeds[i], 0));
    a.filter_rng = RngStream(mix_seed(agent_seeds[i], 1));
    a.cloud = make_uniform_cloud(est.particles, config_.volume, a.filter_rng,
                                 est.min_particles, est.max_particles);
    a.summary = fit_gaussian(a.cloud);
    a.prev_summary = a.summary;
    agents_.push_back(std::move(a));
  }
  halt_.assign(agents_.size(), HaltReason::None);
  if (config_.swarm.k_max <= 0) finished_ = true;
}

void Episode::finish_success(const AgentState& agent) {
  winner_ = agent.id;
  search_time_ = agent.clock();
  estimate_error_ = (agent.summary.mean - config_.source.position).norm();
  halt_[static_cast<std::size_t>(agent.id)] = HaltReason::Declared;
  finished_ = true;
}

void Episode::move_agent(AgentState& a) {
  const auto& vol = config_.volume;
  const auto& plan = config_.planner;
  const Vec3 estimate = a.summary.mean;
  const double h1 = entropy_weight(a.summary, plan.kappa1);
  const auto choice = choose_direction(a.position, a.cloud, config_.plume, vol, h1);

  StepAction step{1};
  if (uses_adaptive_step(config_.swarm.variant)) {
    const double h2 = revisit_weight((a.position - estimate).norm(),
                                     vol.diagonal(), plan.kappa2);
    step = choose_step(a.position, choice.direction, estimate, a.log, vol,
                       l_max_, h2);
  }
  const Vec3 target =
      vol.clamp(a.position + step.length * vol.cell * choice.direction.vector());
  const double distance = (target - a.position).norm();
  a.ledger.record_flight(distance, config_.swarm.speed);
  a.fly_time += distance / config_.swarm.speed;

  const bool turned = a.last_direction && *a.last_direction != choice.direction;
  if (turned) {
    a.ledger.record_turn();
    a.turn_time += config_.swarm.turn_duration;
  }
  a.last_direction = choice.direction;
  a.position = target;

  auto& row = rows_.back();
  row.dir_index = choice.direction.index();
  row.step = step.length;
  row.turned = turned;
}

bool Episode::step() {
  if (finished_) return false;
  ++k_;
  const auto& sw = config_.swarm;
  const auto& est = config_.estimator;
  const PayloadReport payload = payload_report(sw.variant, est.particles);
  const bool collaborative = uses_collaborative_filter(sw.variant);
  const double upwind_heading = std::atan2(upwind_direction().y(), upwind_direction().x());

  std::vector<int> active;
  for (const auto& a : agents_) {
    if (!a.halted) active.push_back(a.id);
  }
  if (active.empty()) {
    finished_ = true;
    return false;
  }

  // Sense.
  for (int id : active) {
    auto& a = agents_[static_cast<std::size_t>(id)];
    a.last_detection = sample_detection(a.sensor_rng, a.position, config_.plume,
                                        config_.source, k_);
    a.ledger.record_hover();
    a.hover_time += config_.energy.hover_duration;
    a.log.push_back(a.position);
    if (a.last_detection.count > 0) {
      a.cue_captured = true;
      a.cloud.cue_iterations.push_back(k_);
    }
  }

  // Snapshot what each agent broadcasts this iteration.
  std::vector<NeighborMessage> messages;
  std::vector<Vec3> positions;
  for (int id : active) {
    const auto& a = agents_[static_cast<std::size_t>(id)];
    messages.push_back({a.id, a.summary, a.position, a.last_detection.count,
                        a.cue_captured});
    positions.push_back(a.position);
  }
  const auto links = neighbors(positions, sw.comm_radius);

  for (std::size_t slot = 0; slot < active.size(); ++slot) {
    auto& a = agents_[static_cast<std::size_t>(active[slot])];
    TrajectoryRow row;
    row.iter = k_;
    row.uav_id = a.id;
    row.x = a.position.x();
    row.y = a.position.y();
    row.z = a.position.z();
    row.detection = a.last_detection.count;

    // A sensor sphere enclosing the source is a physical arrival.
    if ((a.position - config_.source.position).norm() < config_.plume.sensor_radius) {
      a.summary = fit_gaussian(a.cloud);
      row.n_particles = a.cloud.size();
      row.ess = effective_sample_size(a.cloud);
      row.t_cum = a.clock();
      row.e_cum = a.ledger.breakdown(config_.energy).total();
      rows_.push_back(row);
      a.halted = true;
      winner_ = a.id;
      search_time_ = a.clock();
      estimate_error_ = (a.summary.mean - config_.source.position).norm();
      halt_[static_cast<std::size_t>(a.id)] = HaltReason::Declared;
      finished_ = true;
      return false;
    }

    std::vector<WeightedMessage> inbox;
    for (int j : links[slot]) {
      const auto& msg = messages[static_cast<std::size_t>(j)];
      // Both beliefs are still the uniform prior on the first iteration.
      const ConfidenceFactor beta =
          k_ == 1 ? ConfidenceFactor{1.0} : confidence_factor(a.summary, msg.summary);
      inbox.push_back({msg, beta});
    }
    a.ledger.record_comm(static_cast<double>(payload.actual_values) * kBitsPerValue *
                         static_cast<double>(links[slot].size()));
    a.ledger.record_compute(static_cast<double>(particle_payload_values(a.cloud.size())) *
                            kBitsPerValue);

    update_weights(a.cloud, a.last_detection, a.position, inbox, config_.plume);
    resample_low_variance(a.cloud, a.filter_rng);
    if (collaborative) {
      const std::size_t n_move =
          select_move_count(a.cloud.size(), k_, sw.k_max, est.gamma1, est.gamma2);
      const auto selected = choose_subset(a.cloud.size(), n_move, a.filter_rng);
      env_pu(a.cloud, selected, upwind_heading, a.filter_rng, config_.volume,
             est.drift_scale);
      if (!a.cue_captured) {
        if (const auto gbest = global_best(inbox)) {
          col_pu(a.cloud, selected, *gbest, a.filter_rng, config_.volume);
        }
      }
      update_particle_count(a.cloud, a.position, estimate_source(a.cloud), k_,
                            est.cue_window, a.filter_rng);
    }
    a.prev_summary = a.summary;
    a.summary = fit_gaussian(a.cloud);

    row.n_particles = a.cloud.size();
    row.ess = effective_sample_size(a.cloud);
    row.est_x = a.summary.mean.x();
    row.est_y = a.summary.mean.y();
    row.est_z = a.summary.mean.z();
    row.spread = a.summary.spread();
    rows_.push_back(row);

    const auto outcome = check_declaration(a.summary, config_.source.position,
                                           sw.declare_spread, sw.success_tolerance);
    if (outcome == Declaration::Success) {
      rows_.back().t_cum = a.clock();
      rows_.back().e_cum = a.ledger.breakdown(config_.energy).total();
      a.halted = true;
      finish_success(a);
      return false;
    }
    if (outcome == Declaration::Failure) {
      a.halted = true;
      halt_[static_cast<std::size_t>(a.id)] = HaltReason::FalseDeclaration;
    } else {
      move_agent(a);
      if (total_and_budget(a.ledger, config_.energy).exhausted) {
        a.halted = true;
        halt_[static_cast<std::size_t>(a.id)] = HaltReason::Energy;
      } else if (a.clock() > sw.time_cap) {
        a.halted = true;
        halt_[static_cast<std::size_t>(a.id)] = HaltReason::TimeCap;
      }
    }
    rows_.back().t_cum = a.clock();
    rows_.back().e_cum = a.ledger.breakdown(config_.energy).total();
  }

  const bool any_active =
      std::any_of(agents_.begin(), agents_.end(), [](const AgentState& a) { return !a.halted; });
  if (!any_active || k_ >= sw.k_max) finished_ = true;
  return !finished_;
}

RunResult Episode::result() const {
  RunResult r;
  r.seed = seed_;
  r.success = winner_.has_value();
  r.search_time = search_time_;
  r.declaring_agent = winner_;
  r.estimate_error = estimate_error_;
  r.iterations = k_;
  r.trajectory = rows_;
  for (const auto& a : agents_) {
    AgentReport rep;
    rep.id = a.id;
    rep.ledger = a.ledger;
    rep.energy = a.ledger.breakdown(config_.energy);
    rep.fly_time = a.fly_time;
    rep.hover_time = a.hover_time;
    rep.turn_time = a.turn_time;
    rep.final_position = a.position;
    rep.halt = halt_[static_cast<std::size_t>(a.id)];
    r.agents.push_back(rep);
  }
  return r;
}

RunResult run_episode(const RunConfig& config, std::uint64_t seed) {
  Episode episode(config, seed);
  while (episode.step()) {
  }
  return episode.result();
}

MCStats aggregate(std::vector<RunResult> runs) {
  MCStats stats;
  stats.run_count = static_cast<int>(runs.size());
  double total = 0.0;
  int successes = 0;
  for (const auto& r : runs) {
    if (r.success && r.search_time) {
      total += *r.search_time;
      ++successes;
    }
  }
  stats.failures = stats.run_count - successes;
  stats.success_rate =
      stats.run_count > 0 ? static_cast<double>(successes) / stats.run_count : 0.0;
  if (successes > 0) stats.mean_search_time = total / successes;
  stats.runs = std::move(runs);
  return stats;
}

MCStats monte_carlo(const RunConfig& config, int run_count,
                    std::uint64_t master_seed, int workers,
                    bool keep_trajectories) {
  if (run_count < 1) throw std::invalid_argument("run_count must be at least 1");
  config.validate();
  std::vector<RunResult> runs(static_cast<std::size_t>(run_count));
  std::atomic<int> next{0};
  std::mutex error_mutex;
  std::exception_ptr error;
  auto work = [&] {
    for (int i = next.fetch_add(1); i < run_count; i = next.fetch_add(1)) {
      try {
        RunResult r = run_episode(config, master_seed + static_cast<std::uint64_t>(i));
        if (!keep_trajectories) r.trajectory.clear();
        runs[static_cast<std::size_t>(i)] = std::move(r);
      } catch (...) {
        const std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
        next.store(run_count);
      }
    }
  };
  const int n_threads = std::clamp(workers, 1, run_count);
  if (n_threads == 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (int t = 0; t < n_threads; ++t) pool.emplace_back(work);
  }
  if (error) std::rethrow_exception(error);
  return aggregate(std::move(runs));
}

}  // namespace osl
