#include <algorithm>
#include <cmath>
#include <vector>

#include "doctest.h"
#include "oracles.hpp"
#include "osl/planner.hpp"

using namespace osl;

namespace {

ParticleCloud cloud_of(std::vector<Vec3> points, std::vector<double> weights = {}) {
  ParticleCloud c;
  for (std::size_t i = 0; i < points.size(); ++i) {
    c.particles.push_back({points[i], weights.empty() ? 1.0 / points.size() : weights[i]});
  }
  return c;
}

oracle::Point pt(const Vec3& v) { return {v.x(), v.y(), v.z()}; }

}  // namespace

TEST_SUITE("planner") {

TEST_CASE("direction set is the lexicographic neighbourhood") {
  const auto& set = direction_set();
  CHECK(set.front().offset == std::array<int, 3>{-1, -1, -1});
  CHECK(set.back().offset == std::array<int, 3>{1, 1, 1});
  for (int i = 0; i < 26; ++i) CHECK(set[i].index() == i);
  for (int i = 1; i < 26; ++i) CHECK(set[i - 1].offset < set[i].offset);
}

TEST_CASE("entropy closed forms") {
  std::vector<Vec3> pts(8, Vec3::Zero());
  CHECK(entropy(cloud_of(pts)) == doctest::Approx(std::log(8.0)).epsilon(1e-14));
  CHECK(entropy(cloud_of({Vec3::Zero()})) == 0.0);
  const double p = 0.3;
  CHECK(entropy(cloud_of({Vec3::Zero(), Vec3::Zero()}, {p, 1 - p})) ==
        doctest::Approx(-p * std::log(p) - (1 - p) * std::log(1 - p)).epsilon(1e-14));
  CHECK(entropy(cloud_of({Vec3::Zero(), Vec3::Zero(), Vec3::Zero()}, {0.5, 0.5, 0.0})) ==
        doctest::Approx(std::log(2.0)).epsilon(1e-14));

  // Permutation invariance and the ln N bound.
  RngStream rng(3);
  for (int t = 0; t < 20; ++t) {
    std::vector<double> w(12);
    double s = 0;
    for (auto& x : w) s += (x = rng.uniform());
    for (auto& x : w) x /= s;
    auto c = cloud_of(std::vector<Vec3>(12, Vec3::Zero()), w);
    const double h = entropy(c);
    CHECK(h <= std::log(12.0) + 1e-12);
    std::reverse(c.particles.begin(), c.particles.end());
    CHECK(entropy(c) == doctest::Approx(h).epsilon(1e-14));
  }
}

TEST_CASE("value function") {
  auto c = cloud_of({Vec3(0, 0, 0), Vec3(6, 8, 0)});
  const Vec3 pos(3, 4, 10);
  CHECK(distance_to_estimate(pos, c) == doctest::Approx(10.0));
  CHECK(value_function(pos, c, 2.0) == doctest::Approx(10.0 + 2.0 * std::log(2.0)));
}

TEST_CASE("expected value against exhaustive enumeration") {
  RngStream rng(12);
  for (int t = 0; t < 40; ++t) {
    const std::size_t n = 1 + rng.index(5);
    std::vector<Vec3> pts;
    std::vector<double> w;
    double s = 0;
    for (std::size_t i = 0; i < n; ++i) {
      // Keep particles near the candidate so several counts carry mass.
      pts.emplace_back(10 + rng.uniform(-4, 4), 30 + rng.uniform(-2, 15),
                       25 + rng.uniform(-4, 4));
      w.push_back(rng.uniform() + 0.05);
      s += w.back();
    }
    for (auto& x : w) x /= s;
    const auto cloud = cloud_of(pts, w);
    const Vec3 cand(10 + rng.uniform(-3, 3), 24 + rng.uniform(-4, 4), 25);
    const double h1 = rng.uniform(0, 20);
    const double got = expected_next_value(cand, cloud, PlumeParams{}, h1);
    std::vector<oracle::Point> raw;
    for (const auto& q : pts) raw.push_back(pt(q));
    const double want = oracle::expected_value(pt(cand), raw, w, oracle::Plume{}, h1);
    CHECK(got == doctest::Approx(want).epsilon(1e-10));
  }
}

TEST_CASE("single known particle reduces to distance descent") {
  const Vec3 target(47, 33, 21);
  const auto cloud = cloud_of({target});
  const Vec3 agent(20, 20, 15);
  const SearchVolume vol;
  const auto choice = choose_direction(agent, cloud, PlumeParams{}, vol, 0.0);

  // Hand oracle: the nearest in-volume candidate to the target.
  DirectionAction best;
  double best_d = INFINITY;
  for (const auto& dir : direction_set()) {
    const Vec3 c = agent + vol.cell * dir.vector();
    if (!vol.contains(c)) continue;
    const double d = (c - target).norm();
    if (d < best_d) {
      best_d = d;
      best = dir;
    }
  }
  CHECK(choice.direction == best);
  CHECK(choice.direction.offset == std::array<int, 3>{1, 1, 1});
  CHECK(choice.candidates == 26);
}

TEST_CASE("ties go to the smallest offset") {
  PlumeParams quiet;
  quiet.release_rate = 1e-300;
  const Vec3 agent(50, 30, 15);
  const auto cloud = cloud_of({agent});
  const auto choice = choose_direction(agent, cloud, quiet, SearchVolume{}, 0.0);
  // Face neighbours are nearest and tie; (-1, 0, 0) is the first of them.
  CHECK(choice.direction.offset == std::array<int, 3>{-1, 0, 0});
}

TEST_CASE("corner agent sees seven candidates and never leaves the box") {
  const SearchVolume vol;
  const auto cloud = cloud_of({Vec3(50, 30, 15)});
  const auto c = choose_direction(Vec3(0, 0, 0), cloud, PlumeParams{}, vol, 1.0);
  CHECK(c.candidates == 7);

  RngStream rng(5);
  SearchVolume cells;
  for (int t = 0; t < 200; ++t) {
    const Vec3 agent(10.0 * rng.index(11), 10.0 * rng.index(7), 10.0 * rng.index(4));
    const auto cl = cloud_of({Vec3(rng.uniform(0, 100), rng.uniform(0, 60), rng.uniform(0, 30)),
                              Vec3(rng.uniform(0, 100), rng.uniform(0, 60), rng.uniform(0, 30))});
    const auto ch = choose_direction(agent, cl, PlumeParams{}, cells, rng.uniform(0, 30));
    CHECK(cells.contains(agent + cells.cell * ch.direction.vector()));
  }
}

TEST_CASE("maximum step table") {
  CHECK(max_step(0.5) == 1);
  CHECK(max_step(0.1) == 1);
  CHECK(max_step(0.02) == 5);
  CHECK(max_step(0.05) == 2);
  CHECK(max_step(0.0) == 10);
  CHECK(max_step(0.0, 4) == 4);
  CHECK(max_step(0.001) == 10);
}

TEST_CASE("sphere counts") {
  const DirectionAction dir{{1, 0, 0}};
  const Vec3 agent(10, 10, 10);
  const auto none = sphere_point_counts(agent, dir, {}, 10.0, 4);
  CHECK(none == std::vector<int>{0, 0, 0, 0});

  const std::vector<Vec3> mid{Vec3(15, 10, 10)};
  CHECK(sphere_point_counts(agent, dir, mid, 10.0, 4) == std::vector<int>{1, 0, 0, 0});

  // The agent's own position lies on every sphere, so it is never inside.
  const std::vector<Vec3> self{agent};
  CHECK(sphere_point_counts(agent, dir, self, 10.0, 3) == std::vector<int>{0, 0, 0});
}

TEST_CASE("sphere counts against brute-force containment and telescoping") {
  RngStream rng(21);
  for (int t = 0; t < 30; ++t) {
    std::vector<Vec3> log;
    for (int i = 0; i < 20; ++i) {
      log.emplace_back(rng.uniform(0, 100), rng.uniform(0, 60), rng.uniform(0, 30));
    }
    const Vec3 agent(rng.uniform(0, 100), rng.uniform(0, 60), rng.uniform(0, 30));
    const DirectionAction dir = direction_set()[rng.index(26)];
    const int l_max = 1 + static_cast<int>(rng.index(8));
    const double g = 10.0;
    const auto z = sphere_point_counts(agent, dir, log, g, l_max);

    int running = 0;
    for (int l = 1; l <= l_max; ++l) {
      const Vec3 end = agent + l * g * dir.vector();
      const Vec3 centre = 0.5 * (agent + end);
      const double radius = 0.5 * (end - agent).norm();
      int inside = 0;
      for (const auto& p : log) inside += (p - centre).norm() < radius;
      CHECK(running + z[l - 1] == inside);
      running = inside;
    }
    int sum = 0;
    for (int v : z) sum += v;
    CHECK(sum == running);
  }
}

TEST_CASE("step choice") {
  const SearchVolume vol;
  const DirectionAction dir{{1, 0, 0}};
  const Vec3 agent(10, 30, 15);
  CHECK(choose_step(agent, dir, Vec3(90, 30, 15), {}, vol, 1, 10.0).length == 1);
  // Estimate beyond l_max cells along the direction: the longest step wins.
  CHECK(choose_step(agent, dir, Vec3(95, 30, 15), {}, vol, 5, 10.0).length == 5);
  // With h2 = 0 the distance-minimizing feasible step wins.
  CHECK(choose_step(agent, dir, Vec3(42, 30, 15), {}, vol, 8, 0.0).length == 3);
  // Endpoints outside the box are skipped.
  CHECK(choose_step(Vec3(80, 30, 15), dir, Vec3(200, 30, 15), {}, vol, 5, 0.0).length == 2);
  // Equal rewards pick the shorter step: 35 is 5 from both 30 and 40.
  CHECK(choose_step(agent, dir, Vec3(35, 30, 15), {}, vol, 4, 0.0).length == 2);
}

TEST_CASE("revisit penalty steers away from logged points") {
  const SearchVolume vol;
  const DirectionAction dir{{1, 0, 0}};
  const Vec3 agent(10, 30, 15);
  // Point inside the l = 3 sphere but not the l = 2 one.
  const std::vector<Vec3> log{Vec3(35, 30, 15)};
  const auto z = sphere_point_counts(agent, dir, log, vol.cell, 4);
  CHECK(z == std::vector<int>{0, 0, 1, 0});
  // Rewards for estimate at x = 40: 20, 10, 0 + h2, 10.
  CHECK(choose_step(agent, dir, Vec3(40, 30, 15), log, vol, 4, 0.0).length == 3);
  CHECK(choose_step(agent, dir, Vec3(40, 30, 15), log, vol, 4, 20.0).length == 2);
}

TEST_CASE("weights") {
  GaussianSummary s;
  s.cov = {4.0, 0, 0, 9.0, 0, 12.0};
  CHECK(entropy_weight(s, 1.0) == doctest::Approx(5.0));
  CHECK(entropy_weight(s, 2.0) == doctest::Approx(10.0));
  CHECK(revisit_weight(50.0, 100.0, 10.0) == doctest::Approx(5.0));
  CHECK(revisit_weight(500.0, 100.0, 10.0) == doctest::Approx(10.0));
  CHECK(revisit_weight(0.0, 100.0, 10.0) == 0.0);
}

}
