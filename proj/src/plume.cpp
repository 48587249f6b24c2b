#include "osl/plume.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace osl {

namespace {

constexpr double kTailMass = 1e-12;

void require_positive(double v, const char* name) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw std::invalid_argument(std::string(name) + " must be positive");
  }
}

}  // namespace

void PlumeParams::validate() const {
  require_positive(release_rate, "release_rate");
  require_positive(wind_speed, "wind_speed");
  require_positive(diffusivity, "diffusivity");
  require_positive(lifetime, "lifetime");
  require_positive(sensor_radius, "sensor_radius");
  require_positive(dt, "dt");
}

void validate_volume(const SearchVolume& volume, const PlumeParams& params) {
  require_positive(volume.lx, "lx");
  require_positive(volume.ly, "ly");
  require_positive(volume.lz, "lz");
  require_positive(volume.cell, "cell");
  const double limit = 2.0 * std::sqrt(params.diffusivity * params.lifetime);
  if (!(volume.cell < limit)) {
    throw std::invalid_argument("cell must be below 2*sqrt(D*tau) = " +
                                std::to_string(limit));
  }
}

void validate_source(const SourceConfig& source, const SearchVolume& volume) {
  if (!source.position.allFinite() || !volume.contains(source.position)) {
    throw std::invalid_argument("source position lies outside the volume");
  }
}

double typical_length(const PlumeParams& p) {
  const double D = p.diffusivity;
  const double tau = p.lifetime;
  const double V = p.wind_speed;
  return std::sqrt(D * tau / (1.0 + V * V * tau / (4.0 * D)));
}

double mean_encounter_rate(const Vec3& sensor, const PlumeParams& p,
                           const SourceConfig& source) {
  const Vec3 delta = sensor - source.position;
  const double r = delta.norm();
  if (r < p.sensor_radius) {
    throw CoincidentPositionError("sensor overlaps the source");
  }
  const double lambda = typical_length(p);
  const double advection =
      std::exp(-delta.y() * p.wind_speed / (2.0 * p.diffusivity));
  return p.sensor_radius * p.release_rate / r * advection *
         std::exp(-r / lambda);
}

double log_poisson_pmf(int count, double mean) {
  if (count < 0) return -std::numeric_limits<double>::infinity();
  if (mean <= 0.0) {
    return count == 0 ? 0.0 : -std::numeric_limits<double>::infinity();
  }
  return count * std::log(mean) - mean - std::lgamma(count + 1.0);
}

int poisson_upper_bound(double mean) {
  if (mean <= 0.0) return 0;
  double cdf = 0.0;
  int d = 0;
  for (;; ++d) {
    cdf += std::exp(log_poisson_pmf(d, mean));
    if (cdf >= 1.0 - kTailMass) return d;
    // Past the mode the remaining mass only shrinks; guard against
    // rounding stalls far in the tail.
    if (d > mean + 60.0 * std::sqrt(mean) + 60.0) return d;
  }
}

double detection_pmf(int count, double rate, double dt) {
  if (count < 0) return 0.0;
  const double mean = rate * dt;
  if (count > poisson_upper_bound(mean)) return 0.0;
  return std::exp(log_poisson_pmf(count, mean));
}

Detection sample_detection(RngStream& rng, const Vec3& sensor,
                           const PlumeParams& params,
                           const SourceConfig& source, int iteration) {
  const EncounterModel model(params);
  const double mean = model.expected_count(sensor, source.position);
  Detection det;
  det.sensed_at = sensor;
  det.iteration = iteration;

  const double u = rng.uniform();
  if (mean <= 0.0) return det;
  if (mean > 500.0) {
    // Normal approximation; e^-mean underflows the inversion below.
    const double z = rng.normal();
    det.count = static_cast<int>(std::max(0.0, std::floor(mean + std::sqrt(mean) * z + 0.5)));
    return det;
  }
  // Inversion by sequential search over the CDF.
  double p = std::exp(-mean);
  double cdf = p;
  int d = 0;
  const int bound = poisson_upper_bound(mean);
  while (u >= cdf && d < bound) {
    ++d;
    p *= mean / d;
    cdf += p;
  }
  det.count = d;
  return det;
}

double default_concentration_threshold(const PlumeParams& p) {
  return 0.01 * p.sensor_radius * p.release_rate / typical_length(p);
}

double diffusion_ratio(const PlumeParams& params, const SourceConfig& source,
                       const SearchVolume& volume, double threshold) {
  if (!(threshold > 0.0)) {
    throw std::invalid_argument("concentration threshold must be positive");
  }
  const EncounterModel model(params);
  auto cells = [&](double extent) {
    return std::max(1, static_cast<int>(std::ceil(extent / volume.cell - 1e-9)));
  };
  const int nx = cells(volume.lx);
  const int ny = cells(volume.ly);
  const int nz = cells(volume.lz);
  const double hx = volume.lx / nx;
  const double hy = volume.ly / ny;
  const double hz = volume.lz / nz;
  const double log_threshold = std::log(threshold);

  long above = 0;
  for (int i = 0; i < nx; ++i) {
    for (int j = 0; j < ny; ++j) {
      for (int k = 0; k < nz; ++k) {
        const Vec3 centre((i + 0.5) * hx, (j + 0.5) * hy, (k + 0.5) * hz);
        if (model.log_rate(centre, source.position) > log_threshold) ++above;
      }
    }
  }
  return static_cast<double>(above) / (static_cast<double>(nx) * ny * nz);
}

EncounterModel::EncounterModel(const PlumeParams& p)
    : log_aq_(std::log(p.sensor_radius * p.release_rate)),
      advection_(p.wind_speed / (2.0 * p.diffusivity)),
      inv_length_(1.0 / typical_length(p)),
      radius_(p.sensor_radius),
      dt_(p.dt) {}

double EncounterModel::log_rate(const Vec3& sensor, const Vec3& source) const {
  const Vec3 delta = sensor - source;
  const double r = std::max(delta.norm(), radius_);
  return log_aq_ - std::log(r) - delta.y() * advection_ - r * inv_length_;
}

double EncounterModel::expected_count(const Vec3& sensor,
                                      const Vec3& source) const {
  return std::exp(log_rate(sensor, source)) * dt_;
}

}  // namespace osl
