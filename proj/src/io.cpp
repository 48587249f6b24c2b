#include "osl/io.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <stdexcept>

#include "json.hpp"

namespace osl {

namespace {

using json = nlohmann::ordered_json;

double round6(double v) { return std::strtod(format_number(v).c_str(), nullptr); }

json number_or_null(const std::optional<double>& v) {
  return v ? json(round6(*v)) : json(nullptr);
}

std::ofstream open_for_write(const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path);
  return out;
}

void finish_write(std::ofstream& out, const std::string& path) {
  out.flush();
  if (!out) throw std::runtime_error("failed writing " + path);
}

json energy_json(const EnergyBreakdown& e, double fly_distance, double hovers,
                 double turns) {
  json j;
  j["E_f"] = round6(e.flight);
  j["E_h"] = round6(e.hover);
  j["E_b"] = round6(e.turn);
  j["E_C"] = round6(e.compute);
  j["E_T"] = round6(e.comm);
  j["E_M"] = round6(e.movement());
  j["E"] = round6(e.total());
  j["fly_distance"] = round6(fly_distance);
  j["hover_points"] = round6(hovers);
  j["turn_points"] = round6(turns);
  return j;
}

}  // namespace

std::string format_number(double v) {
  if (v == 0.0) return "0";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

void write_trajectory(std::ostream& out, const RunResult& result,
                      const RunConfig& config) {
  out << "# seed=" << result.seed << " config_hash=" << config_hash(config) << '\n';
  out << kTrajectoryHeader << '\n';
  for (const auto& r : result.trajectory) {
    out << r.iter << ',' << r.uav_id << ',' << format_number(r.x) << ','
        << format_number(r.y) << ',' << format_number(r.z) << ',' << r.detection
        << ',' << r.n_particles << ',' << format_number(r.ess) << ','
        << format_number(r.est_x) << ',' << format_number(r.est_y) << ','
        << format_number(r.est_z) << ',' << format_number(r.spread) << ','
        << r.dir_index << ',' << r.step << ',' << (r.turned ? 1 : 0) << ','
        << format_number(r.t_cum) << ',' << format_number(r.e_cum) << '\n';
  }
}

void write_trajectory(const RunResult& result, const RunConfig& config,
                      const std::string& path) {
  auto out = open_for_write(path);
  write_trajectory(out, result, config);
  finish_write(out, path);
}

std::string summary_json(const MCStats& stats, const RunConfig& config) {
  json j;
  j["seed"] = stats.runs.empty() ? config.swarm.seed : stats.runs.front().seed;
  j["config_hash"] = config_hash(config);
  j["algo"] = std::string(to_string(config.swarm.variant));
  j["run_count"] = stats.run_count;
  j["successes"] = stats.run_count - stats.failures;
  j["failures"] = stats.failures;
  j["success_rate"] = round6(stats.success_rate);
  j["mean_search_time"] = number_or_null(stats.mean_search_time);

  json times = json::array();
  for (const auto& r : stats.runs) times.push_back(number_or_null(r.search_time));
  j["search_times"] = times;

  const auto payload = payload_report(config.swarm.variant, config.estimator.particles);
  j["payload_values"] = {{"nominal", payload.nominal_values},
                         {"actual", payload.actual_values}};

  // Means over runs, per agent and for the whole team.
  const std::size_t agents = static_cast<std::size_t>(config.swarm.uav_count);
  std::vector<EnergyLedger> per_agent(agents);
  EnergyLedger team;
  for (const auto& r : stats.runs) {
    for (const auto& a : r.agents) {
      per_agent[static_cast<std::size_t>(a.id)].merge(a.ledger);
      team.merge(a.ledger);
    }
  }
  const double runs = std::max(1, stats.run_count);
  auto mean_breakdown = [&](const EnergyLedger& l) {
    EnergyBreakdown e = l.breakdown(config.energy);
    e.flight /= runs;
    e.hover /= runs;
    e.turn /= runs;
    e.compute /= runs;
    e.comm /= runs;
    return energy_json(e, l.fly_distance() / runs,
                       static_cast<double>(l.hover_points()) / runs,
                       static_cast<double>(l.turn_points()) / runs);
  };
  json agent_array = json::array();
  for (std::size_t i = 0; i < agents; ++i) {
    json a = mean_breakdown(per_agent[i]);
    a["id"] = static_cast<int>(i);
    agent_array.push_back(a);
  }
  j["agent_energy"] = agent_array;
  j["team_energy"] = mean_breakdown(team);

  json cfg;
  const std::string text = serialize_config(config);
  std::size_t start = 0;
  while (start < text.size()) {
    const auto end = text.find('\n', start);
    const std::string line = text.substr(start, end - start);
    const auto eq = line.find(" = ");
    cfg[line.substr(0, eq)] = line.substr(eq + 3);
    start = end + 1;
  }
  j["config"] = cfg;
  return j.dump(2) + "\n";
}

void write_summary(const MCStats& stats, const RunConfig& config,
                   const std::string& path) {
  auto out = open_for_write(path);
  out << summary_json(stats, config);
  finish_write(out, path);
}

void write_sweep_table(std::ostream& out, const std::vector<SweepRow>& rows,
                       const RunConfig& base) {
  out << "# seed=" << base.swarm.seed << " config_hash=" << config_hash(base) << '\n';
  out << "key,value,variant,mst,sr,run_count,failures\n";
  for (const auto& r : rows) {
    out << r.key << ',' << r.value << ',' << to_string(r.variant) << ','
        << (r.stats.mean_search_time ? format_number(*r.stats.mean_search_time) : "")
        << ',' << format_number(r.stats.success_rate) << ',' << r.stats.run_count
        << ',' << r.stats.failures << '\n';
  }
}

void write_sweep_table(const std::vector<SweepRow>& rows, const RunConfig& base,
                       const std::string& path) {
  auto out = open_for_write(path);
  write_sweep_table(out, rows, base);
  finish_write(out, path);
}

}  // namespace osl
