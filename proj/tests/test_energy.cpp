#include <cmath>

#include "doctest.h"
#include "osl/energy.hpp"

using namespace osl;

namespace {

EnergyLedger movement(int hovers, double metres, int turns) {
  EnergyLedger l;
  l.record_flight(metres, 1.0);
  for (int i = 0; i < hovers; ++i) l.record_hover();
  for (int i = 0; i < turns; ++i) l.record_turn();
  return l;
}

}  // namespace

TEST_SUITE("energy") {

TEST_CASE("movement table rows") {
  const EnergyParams p;
  const auto col_inf = movement(261, 893.0, 223).breakdown(p);
  CHECK(col_inf.flight == doctest::Approx(592.059).epsilon(1e-9));
  CHECK(col_inf.hover == doctest::Approx(122.67).epsilon(1e-9));
  CHECK(std::abs(col_inf.movement() - 1476.27) <= 0.01);

  const auto muc = movement(216, 907.0, 190).breakdown(p);
  CHECK(muc.flight == doctest::Approx(601.341).epsilon(1e-9));
  CHECK(std::abs(muc.movement() - 1351.71) <= 0.01);
}

TEST_CASE("flight energy is power times time") {
  EnergyParams p;
  EnergyLedger l;
  l.record_flight(30.0, 2.0);
  l.record_flight(10.0, 0.5);
  CHECK(l.fly_distance() == 40.0);
  CHECK(l.fly_time() == 35.0);
  CHECK(l.breakdown(p).flight == doctest::Approx(0.663 * 35.0).epsilon(1e-15));
  CHECK_THROWS(l.record_flight(1.0, 0.0));
}

TEST_CASE("computation and communication") {
  EnergyParams p;
  EnergyLedger l;
  l.record_compute(12800.0);
  l.record_comm(448.0);
  const auto e = l.breakdown(p);
  CHECK(e.compute == doctest::Approx(1e-28 * 1000.0 * 1e18 * 12800.0).epsilon(1e-12));
  CHECK(e.comm == doctest::Approx(1e-4 * 448.0 / 1e6).epsilon(1e-12));
  CHECK(e.total() == doctest::Approx(e.compute + e.comm).epsilon(1e-15));
}

TEST_CASE("budget is exceeded only strictly above the limit") {
  EnergyParams p;
  p.budget = 0.47 * 3;
  EnergyLedger l;
  for (int i = 0; i < 3; ++i) l.record_hover();
  CHECK_FALSE(total_and_budget(l, p).exhausted);
  l.record_compute(1.0);
  CHECK(total_and_budget(l, p).exhausted);
}

TEST_CASE("merge adds every counter") {
  EnergyParams p;
  auto a = movement(3, 10.0, 1);
  const auto b = movement(2, 5.0, 4);
  a.merge(b);
  CHECK(a.hover_points() == 5);
  CHECK(a.turn_points() == 5);
  CHECK(a.fly_distance() == 15.0);
  CHECK(a.breakdown(p).movement() ==
        doctest::Approx(0.663 * 15 + 0.47 * 5 + 3.415 * 5).epsilon(1e-12));
}

TEST_CASE("params must be positive") {
  EnergyParams p;
  CHECK_NOTHROW(p.validate());
  p.hover_power = 0.0;
  CHECK_THROWS(p.validate());
}

}
