#pragma once

#include <stdexcept>

#include "osl/geometry.hpp"
#include "osl/rng.hpp"

namespace osl {

// Rate-based plume constants. Wind blows along -y; the upwind unit vector
// is +y, so the advection factor exceeds one downwind (y < y_source).
//
// release_rate is treated as a count rate: a * Q / |u - r_s| is read in 1/s.
struct PlumeParams {
  double release_rate = 5.0;   // Q
  double wind_speed = 1.0;     // V, m/s
  double diffusivity = 1.0;    // D, m^2/s
  double lifetime = 100.0;     // tau, s
  double sensor_radius = 1.0;  // a, m
  double dt = 1.0;             // sensing interval, s

  void validate() const;
};

struct SourceConfig {
  Vec3 position = Vec3(10.0, 30.0, 25.0);
};

struct Detection {
  int count = 0;
  Vec3 sensed_at = Vec3::Zero();
  int iteration = 0;
};

// Raised when a rate is requested closer to the source than the sensor radius.
class CoincidentPositionError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

inline Vec3 upwind_direction() { return Vec3::UnitY(); }

// Checks the volume on its own and the grid constraint cell < 2 sqrt(D tau).
void validate_volume(const SearchVolume& volume, const PlumeParams& params);
void validate_source(const SourceConfig& source, const SearchVolume& volume);

double typical_length(const PlumeParams& params);

double mean_encounter_rate(const Vec3& sensor, const PlumeParams& params,
                           const SourceConfig& source);

// Probability of `count` encounters in one interval; zero beyond the
// 1 - 1e-12 upper quantile.
double detection_pmf(int count, double rate, double dt);

// Smallest d whose Poisson(mean) CDF reaches 1 - 1e-12.
int poisson_upper_bound(double mean);

// Untruncated log Poisson pmf. Returns -inf for mean == 0 and count > 0.
double log_poisson_pmf(int count, double mean);

Detection sample_detection(RngStream& rng, const Vec3& sensor,
                           const PlumeParams& params,
                           const SourceConfig& source, int iteration);

double default_concentration_threshold(const PlumeParams& params);

// Fraction of grid cells whose centre rate exceeds `threshold`.
double diffusion_ratio(const PlumeParams& params, const SourceConfig& source,
                       const SearchVolume& volume, double threshold);

// Hot-path evaluator used by the filter and the planner. The source-sensor
// distance is floored at the sensor radius so hypotheses sitting on top of
// the sensor stay finite.
class EncounterModel {
 public:
  explicit EncounterModel(const PlumeParams& params);

  double log_rate(const Vec3& sensor, const Vec3& source) const;
  double expected_count(const Vec3& sensor, const Vec3& source) const;
  double dt() const { return dt_; }

 private:
  double log_aq_;
  double advection_;  // V / (2D)
  double inv_length_;
  double radius_;
  double dt_;
};

}  // namespace osl
