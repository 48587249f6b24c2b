#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "osl/geometry.hpp"
#include "osl/plume.hpp"
#include "osl/rng.hpp"

namespace osl {

// Diagonal regularizer added to every fitted covariance and to both KL
// operands (m^2).
inline constexpr double kCovarianceRegularizer = 1e-6;
inline constexpr double kMinConfidence = 1e-300;

struct Particle {
  Vec3 position = Vec3::Zero();
  double weight = 0.0;
};

struct ParticleCloud {
  std::vector<Particle> particles;
  std::size_t min_count = 20;
  std::size_t max_count = 160;
  // Iteration index of every captured cue, in capture order.
  std::vector<int> cue_iterations;

  std::size_t size() const { return particles.size(); }
  std::size_t cue_count() const { return cue_iterations.size(); }
};

// (mu, Sigma) belief summary. Sigma is kept as its six unique entries in the
// order xx, xy, xz, yy, yz, zz.
struct GaussianSummary {
  Vec3 mean = Vec3::Zero();
  std::array<double, 6> cov{1.0, 0.0, 0.0, 1.0, 0.0, 1.0};

  Mat3 covariance() const;
  static GaussianSummary from(const Vec3& mean, const Mat3& cov);
  double spread() const { return std::sqrt(std::max(0.0, cov[0] + cov[3] + cov[5])); }

  bool operator==(const GaussianSummary&) const = default;
};

// What an agent broadcasts each iteration. The Gaussian is the fused belief;
// position, detection and cue flag are needed by the receiver's likelihood.
struct NeighborMessage {
  int sender = 0;
  GaussianSummary summary;
  Vec3 sender_pos = Vec3::Zero();
  int detection = 0;
  bool cue_captured = false;
};

struct ConfidenceFactor {
  double beta = 1.0;
};

struct WeightedMessage {
  NeighborMessage message;
  ConfidenceFactor confidence;
};

class SingularCovarianceError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Values per exchange: the bare (mu, full Sigma) payload, the payload this
// implementation actually sends, and the raw-particle payload of a
// conventional filter (three coordinates and one weight per particle).
inline constexpr int kSummaryPayloadValues = 12;
inline constexpr int kMessagePayloadValues = 14;
inline constexpr int particle_payload_values(std::size_t n) {
  return static_cast<int>(4 * n);
}

ParticleCloud make_uniform_cloud(std::size_t count, const SearchVolume& volume,
                                 RngStream& rng, std::size_t min_count,
                                 std::size_t max_count);

double kl_gaussian(const GaussianSummary& p, const GaussianSummary& q);
ConfidenceFactor confidence_factor(const GaussianSummary& own_prev,
                                   const GaussianSummary& neighbor_prev);

// Multiplies each weight by the own-measurement likelihood and by every
// neighbour likelihood raised to its confidence, then normalizes.
// Falls back to uniform weights if every product vanishes.
void update_weights(ParticleCloud& cloud, const Detection& own_detection,
                    const Vec3& own_pos, std::span<const WeightedMessage> messages,
                    const PlumeParams& plume);

void normalize_weights(ParticleCloud& cloud);

double effective_sample_size(const ParticleCloud& cloud);

// Systematic resampling indices for a single offset u in [0, 1).
std::vector<std::size_t> systematic_indices(std::span<const double> weights,
                                            double u);

// Resamples with the low-variance scheme when ESS < N/2. Returns true if a
// resample happened; weights are then uniform.
bool resample_low_variance(ParticleCloud& cloud, RngStream& rng);

std::size_t select_move_count(std::size_t n, int k, int k_max, double gamma1,
                              double gamma2);

// Uniform random subset of `count` particle indices, in ascending order.
std::vector<std::size_t> choose_subset(std::size_t n, std::size_t count,
                                       RngStream& rng);

// Upwind drift for one particle: x += rand*x*cos(theta),
// y += rand*y*sin(theta), z fixed, then clamped to the volume.
Vec3 env_pu_step(const Vec3& pos, double rand, double theta,
                 const SearchVolume& volume);
// rand is drawn from U[0, scale]; scale = 1 is the unscaled rule.
void env_pu(ParticleCloud& cloud, std::span<const std::size_t> selected,
            double upwind_heading, RngStream& rng, const SearchVolume& volume,
            double scale = 1.0);

Vec3 col_pu_step(const Vec3& pos, double rand, const Vec3& gbest);
void col_pu(ParticleCloud& cloud, std::span<const std::size_t> selected,
            const Vec3& gbest, RngStream& rng, const SearchVolume& volume);

// Confidence-weighted mean of cue-captured neighbours' means, with the
// confidences renormalized to sum to one. Empty if no neighbour has a cue.
std::optional<Vec3> global_best(std::span<const WeightedMessage> messages);

double cue_frequency(const ParticleCloud& cloud, int k, int delta_c);
double distance_gap(const Vec3& agent_pos, const Vec3& estimate);

// Shrinks the cloud to clamp(floor(N * f_dist * (1 - f_cue)), N_min, N_max),
// never growing it. Dropped particles are a uniform random subset.
void update_particle_count(ParticleCloud& cloud, const Vec3& agent_pos,
                           const Vec3& estimate, int k, int delta_c,
                           RngStream& rng);

Vec3 estimate_source(const ParticleCloud& cloud);
GaussianSummary fit_gaussian(const ParticleCloud& cloud);

}  // namespace osl
