#include "osl/estimator.hpp"

#include <Eigen/Cholesky>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

namespace osl {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double total_weight(const ParticleCloud& cloud) {
  double sum = 0.0;
  for (const auto& p : cloud.particles) sum += p.weight;
  return sum;
}

void set_uniform(ParticleCloud& cloud) {
  const double w = 1.0 / static_cast<double>(cloud.size());
  for (auto& p : cloud.particles) p.weight = w;
}

}  // namespace

Mat3 GaussianSummary::covariance() const {
  Mat3 m;
  m << cov[0], cov[1], cov[2],
       cov[1], cov[3], cov[4],
       cov[2], cov[4], cov[5];
  return m;
}

GaussianSummary GaussianSummary::from(const Vec3& mean, const Mat3& c) {
  GaussianSummary g;
  g.mean = mean;
  g.cov = {c(0, 0), 0.5 * (c(0, 1) + c(1, 0)), 0.5 * (c(0, 2) + c(2, 0)),
           c(1, 1), 0.5 * (c(1, 2) + c(2, 1)), c(2, 2)};
  return g;
}

ParticleCloud make_uniform_cloud(std::size_t count, const SearchVolume& volume,
                                 RngStream& rng, std::size_t min_count,
                                 std::size_t max_count) {
  if (count == 0) throw std::invalid_argument("particle count must be positive");
  ParticleCloud cloud;
  cloud.min_count = min_count;
  cloud.max_count = max_count;
  cloud.particles.resize(count);
  for (auto& p : cloud.particles) {
    const double x = rng.uniform(0.0, volume.lx);
    const double y = rng.uniform(0.0, volume.ly);
    const double z = rng.uniform(0.0, volume.lz);
    p.position = Vec3(x, y, z);
  }
  set_uniform(cloud);
  return cloud;
}

double kl_gaussian(const GaussianSummary& p, const GaussianSummary& q) {
  if (p == q) return 0.0;
  const Mat3 reg = kCovarianceRegularizer * Mat3::Identity();
  const Mat3 sp = p.covariance() + reg;
  const Mat3 sq = q.covariance() + reg;

  const Eigen::LLT<Mat3> lp(sp);
  const Eigen::LLT<Mat3> lq(sq);
  if (lp.info() != Eigen::Success || lq.info() != Eigen::Success) {
    throw SingularCovarianceError("covariance is not positive definite");
  }
  auto log_det = [](const Eigen::LLT<Mat3>& llt) {
    const Mat3 l = llt.matrixL();
    return 2.0 * (std::log(l(0, 0)) + std::log(l(1, 1)) + std::log(l(2, 2)));
  };
  const Vec3 diff = q.mean - p.mean;
  const double trace_term = lq.solve(sp).trace();
  const double mahalanobis = diff.dot(lq.solve(diff));
  const double kl =
      0.5 * (trace_term + mahalanobis - 3.0 + log_det(lq) - log_det(lp));
  return std::max(0.0, kl);
}

ConfidenceFactor confidence_factor(const GaussianSummary& own_prev,
                                   const GaussianSummary& neighbor_prev) {
  const double kl = kl_gaussian(own_prev, neighbor_prev);
  return {std::max(std::exp(-kl), kMinConfidence)};
}

void normalize_weights(ParticleCloud& cloud) {
  const double sum = total_weight(cloud);
  if (!(sum > 0.0) || !std::isfinite(sum)) {
    set_uniform(cloud);
    return;
  }
  for (auto& p : cloud.particles) p.weight /= sum;
}

void update_weights(ParticleCloud& cloud, const Detection& own_detection,
                    const Vec3& own_pos, std::span<const WeightedMessage> messages,
                    const PlumeParams& plume) {
  if (cloud.particles.empty()) return;
  const EncounterModel model(plume);

  // The product is accumulated in log space and shifted by its maximum
  // before exponentiating, so long products of small likelihoods do not
  // underflow before normalization.
  std::vector<double> log_w(cloud.size());
  double max_log = kNegInf;
  for (std::size_t n = 0; n < cloud.size(); ++n) {
    const Vec3& o = cloud.particles[n].position;
    const double prior = cloud.particles[n].weight;
    double lw = prior > 0.0 ? std::log(prior) : kNegInf;
    lw += log_poisson_pmf(own_detection.count, model.expected_count(own_pos, o));
    for (const auto& wm : messages) {
      const double beta = wm.confidence.beta;
      const double ll = log_poisson_pmf(
          wm.message.detection, model.expected_count(wm.message.sender_pos, o));
      // 0 * -inf stays -inf: a neighbour with zero confidence still cannot
      // revive an impossible hypothesis.
      lw += (ll == kNegInf) ? kNegInf : beta * ll;
    }
    log_w[n] = lw;
    max_log = std::max(max_log, lw);
  }

  if (max_log == kNegInf || std::isnan(max_log)) {
    set_uniform(cloud);
    return;
  }
  double sum = 0.0;
  for (std::size_t n = 0; n < cloud.size(); ++n) {
    const double w = std::exp(log_w[n] - max_log);
    cloud.particles[n].weight = w;
    sum += w;
  }
  for (auto& p : cloud.particles) p.weight /= sum;
}

double effective_sample_size(const ParticleCloud& cloud) {
  double sq = 0.0;
  for (const auto& p : cloud.particles) sq += p.weight * p.weight;
  return sq > 0.0 ? 1.0 / sq : 0.0;
}

std::vector<std::size_t> systematic_indices(std::span<const double> weights,
                                            double u) {
  const std::size_t n = weights.size();
  std::vector<std::size_t> out;
  if (n == 0) return out;
  out.reserve(n);
  // Work in units of 1/N: the m-th pointer sits at u + m and particle i
  // owns the half-open slot [N*C_{i-1}, N*C_i).
  const double scale = static_cast<double>(n);
  std::size_t i = 0;
  double upper = weights[0] * scale;
  for (std::size_t m = 0; m < n; ++m) {
    const double pointer = u + static_cast<double>(m);
    while (pointer >= upper && i + 1 < n) {
      ++i;
      upper += weights[i] * scale;
    }
    out.push_back(i);
  }
  return out;
}

bool resample_low_variance(ParticleCloud& cloud, RngStream& rng) {
  const std::size_t n = cloud.size();
  if (n == 0) return false;
  if (!(effective_sample_size(cloud) < 0.5 * static_cast<double>(n))) return false;

  std::vector<double> weights(n);
  for (std::size_t i = 0; i < n; ++i) weights[i] = cloud.particles[i].weight;
  const auto idx = systematic_indices(weights, rng.uniform());

  std::vector<Particle> next(n);
  for (std::size_t m = 0; m < n; ++m) next[m] = cloud.particles[idx[m]];
  cloud.particles = std::move(next);
  set_uniform(cloud);
  return true;
}

std::size_t select_move_count(std::size_t n, int k, int k_max, double gamma1,
                              double gamma2) {
  if (k_max <= 0) return 0;
  const double ratio = std::clamp(static_cast<double>(k) / k_max, 0.0, 1.0);
  const double frac = std::pow(1.0 - std::pow(ratio, gamma1), gamma2);
  return static_cast<std::size_t>(std::floor(static_cast<double>(n) * frac));
}

std::vector<std::size_t> choose_subset(std::size_t n, std::size_t count,
                                       RngStream& rng) {
  count = std::min(count, n);
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  for (std::size_t i = 0; i < count; ++i) {
    const std::size_t j = i + rng.index(n - i);
    std::swap(idx[i], idx[j]);
  }
  idx.resize(count);
  std::sort(idx.begin(), idx.end());
  return idx;
}

Vec3 env_pu_step(const Vec3& pos, double rand, double theta,
                 const SearchVolume& volume) {
  Vec3 out = pos;
  out.x() = pos.x() + rand * pos.x() * std::cos(theta);
  out.y() = pos.y() + rand * pos.y() * std::sin(theta);
  out = volume.clamp(out);
  out.z() = pos.z();
  return out;
}

void env_pu(ParticleCloud& cloud, std::span<const std::size_t> selected,
            double upwind_heading, RngStream& rng, const SearchVolume& volume,
            double scale) {
  constexpr double kSpread = std::numbers::pi / 4.0;
  for (std::size_t i : selected) {
    const double rand = scale * rng.uniform();
    const double theta = upwind_heading + rng.uniform(-kSpread, kSpread);
    auto& p = cloud.particles[i];
    p.position = env_pu_step(p.position, rand, theta, volume);
  }
}

Vec3 col_pu_step(const Vec3& pos, double rand, const Vec3& gbest) {
  return pos + rand * (gbest - pos);
}

void col_pu(ParticleCloud& cloud, std::span<const std::size_t> selected,
            const Vec3& gbest, RngStream& rng, const SearchVolume& volume) {
  for (std::size_t i : selected) {
    auto& p = cloud.particles[i];
    p.position = volume.clamp(col_pu_step(p.position, rng.uniform(), gbest));
  }
}

std::optional<Vec3> global_best(std::span<const WeightedMessage> messages) {
  double total = 0.0;
  Vec3 acc = Vec3::Zero();
  for (const auto& wm : messages) {
    if (!wm.message.cue_captured) continue;
    total += wm.confidence.beta;
    acc += wm.confidence.beta * wm.message.summary.mean;
  }
  if (!(total > 0.0)) return std::nullopt;
  return acc / total;
}

double cue_frequency(const ParticleCloud& cloud, int k, int delta_c) {
  const int m = static_cast<int>(cloud.cue_count());
  if (delta_c <= 0 || m < delta_c) return 0.0;
  // k_{m - delta_c}: iteration of the (m - delta_c)-th cue; the zeroth cue
  // is taken to be the start of the episode.
  const int reference =
      (m == delta_c) ? 0 : cloud.cue_iterations[static_cast<std::size_t>(m - delta_c - 1)];
  const int span = k - reference;
  if (span <= 0) return 1.0;
  return std::min(1.0, static_cast<double>(delta_c) / span);
}

double distance_gap(const Vec3& agent_pos, const Vec3& estimate) {
  const double d = (agent_pos - estimate).norm();
  return d > 0.0 ? std::exp(-1.0 / d) : 0.0;
}

void update_particle_count(ParticleCloud& cloud, const Vec3& agent_pos,
                           const Vec3& estimate, int k, int delta_c,
                           RngStream& rng) {
  const std::size_t n = cloud.size();
  if (n == 0) return;
  const double f_dist = distance_gap(agent_pos, estimate);
  const double f_cue = cue_frequency(cloud, k, delta_c);
  const double raw = std::floor(static_cast<double>(n) * f_dist * (1.0 - f_cue));
  std::size_t target = static_cast<std::size_t>(std::max(0.0, raw));
  target = std::clamp(target, cloud.min_count, cloud.max_count);
  target = std::min(target, n);
  if (target >= n) return;

  const auto keep = choose_subset(n, target, rng);
  std::vector<Particle> kept;
  kept.reserve(target);
  for (std::size_t i : keep) kept.push_back(cloud.particles[i]);
  cloud.particles = std::move(kept);
  normalize_weights(cloud);
}

Vec3 estimate_source(const ParticleCloud& cloud) {
  Vec3 acc = Vec3::Zero();
  double total = 0.0;
  for (const auto& p : cloud.particles) {
    acc += p.weight * p.position;
    total += p.weight;
  }
  return total > 0.0 ? Vec3(acc / total) : acc;
}

GaussianSummary fit_gaussian(const ParticleCloud& cloud) {
  const Vec3 mu = estimate_source(cloud);
  Mat3 cov = Mat3::Zero();
  double total = 0.0;
  for (const auto& p : cloud.particles) {
    const Vec3 d = p.position - mu;
    cov.noalias() += p.weight * (d * d.transpose());
    total += p.weight;
  }
  if (total > 0.0) cov /= total;
  cov += kCovarianceRegularizer * Mat3::Identity();
  return GaussianSummary::from(mu, cov);
}

}  // namespace osl
