#include "osl/planner.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace osl {

int DirectionAction::index() const {
  // Base-3 digits of (offset + 1); the zero offset (13) is skipped.
  const int raw = (offset[0] + 1) * 9 + (offset[1] + 1) * 3 + (offset[2] + 1);
  return raw < 13 ? raw : raw - 1;
}

const std::array<DirectionAction, 26>& direction_set() {
  static const std::array<DirectionAction, 26> set = [] {
    std::array<DirectionAction, 26> out{};
    std::size_t i = 0;
    for (int dx = -1; dx <= 1; ++dx)
      for (int dy = -1; dy <= 1; ++dy)
        for (int dz = -1; dz <= 1; ++dz)
          if (dx != 0 || dy != 0 || dz != 0) out[i++].offset = {dx, dy, dz};
    return out;
  }();
  return set;
}

double entropy(const ParticleCloud& cloud) {
  double h = 0.0;
  for (const auto& p : cloud.particles) {
    if (p.weight > 0.0) h -= p.weight * std::log(p.weight);
  }
  return h;
}

double distance_to_estimate(const Vec3& pos, const ParticleCloud& cloud) {
  return (pos - estimate_source(cloud)).norm();
}

double value_function(const Vec3& pos, const ParticleCloud& cloud, double h1) {
  return distance_to_estimate(pos, cloud) + h1 * entropy(cloud);
}

double expected_next_value(const Vec3& candidate, const ParticleCloud& cloud,
                           const PlumeParams& plume, double h1) {
  const std::size_t n = cloud.size();
  if (n == 0) return 0.0;
  const EncounterModel model(plume);

  std::vector<double> mean(n);
  std::vector<double> pmf(n);
  for (std::size_t i = 0; i < n; ++i) {
    mean[i] = model.expected_count(candidate, cloud.particles[i].position);
    pmf[i] = std::exp(-mean[i]);
  }

  double expected = 0.0;
  double cumulative = 0.0;
  for (int d = 0; d <= kMaxPredictedCount; ++d) {
    if (d > 0) {
      for (std::size_t i = 0; i < n; ++i) pmf[i] *= mean[i] / d;
    }
    double predictive = 0.0;
    for (std::size_t i = 0; i < n; ++i) predictive += cloud.particles[i].weight * pmf[i];

    if (predictive > 0.0) {
      // Own-measurement-only posterior for outcome d.
      Vec3 est = Vec3::Zero();
      double h = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        const double w = cloud.particles[i].weight * pmf[i] / predictive;
        est += w * cloud.particles[i].position;
        if (w > 0.0) h -= w * std::log(w);
      }
      const double value = (candidate - est).norm() + h1 * h;
      expected += predictive * value;
    }
    cumulative += predictive;
    if (cumulative >= kPredictiveMass) break;
  }
  return expected;
}

DirectionChoice choose_direction(const Vec3& agent_pos,
                                 const ParticleCloud& cloud,
                                 const PlumeParams& plume,
                                 const SearchVolume& volume, double h1) {
  const double current = value_function(agent_pos, cloud, h1);
  DirectionChoice best;
  bool found = false;
  for (const auto& dir : direction_set()) {
    const Vec3 candidate = agent_pos + volume.cell * dir.vector();
    if (!volume.contains(candidate)) continue;
    ++best.candidates;
    const double reward =
        current - expected_next_value(candidate, cloud, plume, h1);
    // Strict comparison keeps the lexicographically smallest offset on ties.
    if (!found || reward > best.reward) {
      best.direction = dir;
      best.reward = reward;
      found = true;
    }
  }
  if (!found) throw std::logic_error("no direction keeps the agent inside the volume");
  return best;
}

int max_step(double zeta, int ceiling) {
  ceiling = std::max(1, ceiling);
  if (zeta >= 0.1) return 1;
  if (zeta <= 0.0) return ceiling;
  const int l = static_cast<int>(std::floor(0.1 / zeta + 1e-9));
  return std::clamp(l, 1, ceiling);
}

std::vector<int> sphere_point_counts(const Vec3& agent_pos,
                                     const DirectionAction& direction,
                                     std::span<const Vec3> log, double g,
                                     int l_max) {
  std::vector<int> out(static_cast<std::size_t>(std::max(0, l_max)), 0);
  const Vec3 v = direction.vector();
  int previous = 0;
  for (int l = 1; l <= l_max; ++l) {
    const Vec3 centre = agent_pos + 0.5 * l * g * v;
    const double radius = 0.5 * l * g * v.norm();
    const double r2 = radius * radius;
    int inside = 0;
    for (const auto& p : log) {
      if ((p - centre).squaredNorm() < r2) ++inside;
    }
    out[static_cast<std::size_t>(l - 1)] = inside - previous;
    previous = inside;
  }
  return out;
}

StepAction choose_step(const Vec3& agent_pos, const DirectionAction& direction,
                       const Vec3& estimate, std::span<const Vec3> log,
                       const SearchVolume& volume, int l_max, double h2) {
  if (l_max <= 1) return {1};
  const auto z = sphere_point_counts(agent_pos, direction, log, volume.cell, l_max);
  const Vec3 v = direction.vector();
  StepAction best{1};
  double best_reward = 0.0;
  bool found = false;
  for (int l = 1; l <= l_max; ++l) {
    const Vec3 endpoint = agent_pos + l * volume.cell * v;
    if (!volume.contains(endpoint)) continue;
    const double reward =
        (endpoint - estimate).norm() + h2 * z[static_cast<std::size_t>(l - 1)];
    if (!found || reward < best_reward) {
      best = {l};
      best_reward = reward;
      found = true;
    }
  }
  return best;
}

double entropy_weight(const GaussianSummary& summary, double kappa1) {
  return kappa1 * summary.spread();
}

double revisit_weight(double distance_now, double volume_diagonal,
                      double kappa2) {
  if (!(volume_diagonal > 0.0)) return kappa2;
  return kappa2 * std::min(1.0, distance_now / volume_diagonal);
}

}  // namespace osl
