#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

#include "osl/estimator.hpp"
#include "osl/geometry.hpp"
#include "osl/plume.hpp"

namespace osl {

// One of the 26 neighbouring grid directions.
struct DirectionAction {
  std::array<int, 3> offset{1, 0, 0};

  Vec3 vector() const { return {double(offset[0]), double(offset[1]), double(offset[2])}; }
  // Position in the lexicographic enumeration of all 26 offsets.
  int index() const;

  bool operator==(const DirectionAction&) const = default;
};

// All 26 directions in ascending lexicographic order of their offsets.
const std::array<DirectionAction, 26>& direction_set();

struct StepAction {
  int length = 1;  // grid cells
};

using MeasurementLog = std::vector<Vec3>;

struct DirectionChoice {
  DirectionAction direction;
  double reward = 0.0;
  int candidates = 0;  // in-volume candidates evaluated
};

double entropy(const ParticleCloud& cloud);
double distance_to_estimate(const Vec3& pos, const ParticleCloud& cloud);
double value_function(const Vec3& pos, const ParticleCloud& cloud, double h1);

inline constexpr double kPredictiveMass = 0.999;
inline constexpr int kMaxPredictedCount = 50;

// Expected value function after one hypothetical own measurement at
// `candidate`, summed over d = 0..d_max of the posterior predictive.
double expected_next_value(const Vec3& candidate, const ParticleCloud& cloud,
                           const PlumeParams& plume, double h1);

DirectionChoice choose_direction(const Vec3& agent_pos,
                                 const ParticleCloud& cloud,
                                 const PlumeParams& plume,
                                 const SearchVolume& volume, double h1);

int max_step(double zeta, int ceiling = 10);

// Z(l) for l = 1..l_max: logged points strictly inside the sphere whose
// diameter joins agent_pos and agent_pos + l*g*offset, minus those already
// inside the sphere for l - 1.
std::vector<int> sphere_point_counts(const Vec3& agent_pos,
                                     const DirectionAction& direction,
                                     std::span<const Vec3> log, double g,
                                     int l_max);

StepAction choose_step(const Vec3& agent_pos, const DirectionAction& direction,
                       const Vec3& estimate, std::span<const Vec3> log,
                       const SearchVolume& volume, int l_max, double h2);

// Entropy weight: grows with cloud spread, vanishes as the cloud converges.
double entropy_weight(const GaussianSummary& summary, double kappa1);
// Revisit penalty: shrinks as the agent approaches the estimate.
double revisit_weight(double distance_now, double volume_diagonal,
                      double kappa2);

}  // namespace osl
