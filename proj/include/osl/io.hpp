#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "osl/config.hpp"
#include "osl/swarm.hpp"

namespace osl {

inline constexpr const char* kTrajectoryHeader =
    "iter,uav_id,x,y,z,detection,n_particles,ess,est_x,est_y,est_z,spread,"
    "dir_index,step,turned,t_cum,e_cum";

// Six significant digits, as used in every output file.
std::string format_number(double v);

// Trajectory CSV: a `# seed=... config_hash=...` provenance line, the fixed
// header, then one row per (iter, uav_id).
void write_trajectory(std::ostream& out, const RunResult& result,
                      const RunConfig& config);
void write_trajectory(const RunResult& result, const RunConfig& config,
                      const std::string& path);

// Batch summary as one JSON object.
std::string summary_json(const MCStats& stats, const RunConfig& config);
void write_summary(const MCStats& stats, const RunConfig& config,
                   const std::string& path);

struct SweepRow {
  std::string key;
  std::string value;
  Variant variant = Variant::MucOsl;
  MCStats stats;
};

// Combined sweep table: key,value,variant,mst,sr,run_count,failures.
void write_sweep_table(std::ostream& out, const std::vector<SweepRow>& rows,
                       const RunConfig& base);
void write_sweep_table(const std::vector<SweepRow>& rows, const RunConfig& base,
                       const std::string& path);

}  // namespace osl
