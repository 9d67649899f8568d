#include "dsm/core.hpp"
#include "dsm/schedules.hpp"

#include <doctest.h>

#include <cmath>

using dsm::Schedule;

TEST_CASE("schedule values") {
  const auto p = Schedule::power(1.0, 0.25);
  CHECK(p.value(0.0) == 1.0);
  CHECK(p.value(15.0) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(Schedule::exponential(2.0, 0.1).value(0.0) == 2.0);
  CHECK(Schedule::exponential(2.0, 0.1).value(10.0) == doctest::Approx(2.0 * std::exp(-1.0)));
  CHECK(Schedule::constant(3.0).value(1e6) == 3.0);
  CHECK_THROWS_AS(p.value(-1.0), dsm::UsageError);
}

TEST_CASE("schedule derivatives") {
  CHECK(Schedule::constant(1.0).derivative(7.0) == 0.0);
  CHECK(Schedule::exponential(1.0, 0.1).derivative(0.0) == doctest::Approx(-0.1));
  CHECK(Schedule::power(1.0, 0.25).derivative(0.0) == doctest::Approx(-0.25));
  CHECK_THROWS_AS(Schedule::power(1.0, 0.25).derivative(-0.5), dsm::UsageError);

  const Schedule all[] = {Schedule::power(2.0, 0.4), Schedule::exponential(1.5, 0.3),
                          Schedule::constant(0.7)};
  for (const auto& s : all) {
    for (double t : {0.5, 1.0, 3.0, 20.0}) {
      const double h = 1e-5;
      const double fd = (s.value(t + h) - s.value(t - h)) / (2 * h);
      CHECK(s.derivative(t) == doctest::Approx(fd).epsilon(1e-7));
    }
  }
}

TEST_CASE("construction rejects non-positive a0") {
  CHECK_THROWS_AS(Schedule::power(0.0, 0.25), dsm::UsageError);
  CHECK_THROWS_AS(Schedule::exponential(-1.0, 0.1), dsm::UsageError);
  CHECK(Schedule::power(2.0, 0.25).cap() > 2.0);
}

TEST_CASE("parse_schedule_kind") {
  CHECK(dsm::parse_schedule_kind("power") == dsm::ScheduleKind::kPower);
  CHECK(dsm::parse_schedule_kind("exponential") == dsm::ScheduleKind::kExponential);
  CHECK(dsm::parse_schedule_kind("constant") == dsm::ScheduleKind::kConstant);
  CHECK_THROWS_AS(dsm::parse_schedule_kind("linear"), dsm::UsageError);
  CHECK(dsm::to_string(dsm::ScheduleKind::kExponential) == "exponential");
}

TEST_CASE("admissibility examples") {
  const auto ok = dsm::check_admissible(Schedule::power(1.0, 0.25), 1000.0, 1001);
  CHECK(ok.max_ratio == doctest::Approx(0.25));
  CHECK(ok.positive);
  CHECK(ok.decays);
  CHECK(ok.pass_2_2);
  CHECK(ok.pass_3_3);
  CHECK_FALSE(ok.warning);

  const auto steep = dsm::check_admissible(Schedule::power(1.0, 0.75), 1000.0, 1001);
  CHECK(steep.max_ratio == doctest::Approx(0.75));
  CHECK_FALSE(steep.pass_2_2);
  CHECK_FALSE(steep.notes.empty());

  const auto flat = dsm::check_admissible(Schedule::constant(1.0), 1000.0, 1001);
  CHECK(flat.max_ratio == 0.0);
  CHECK(flat.pass_2_2);
  CHECK_FALSE(flat.pass_3_3);

  const auto near = dsm::check_admissible(Schedule::exponential(1.0, 0.48), 100.0, 101);
  CHECK(near.pass_2_2);
  CHECK(near.warning);

  const auto growing = dsm::check_admissible(Schedule::exponential(1.0, -0.1), 100.0, 101);
  CHECK_FALSE(growing.below_cap);
  CHECK_FALSE(growing.pass_2_2);
}

TEST_CASE("ratio property: sampled ratio never exceeds the closed-form supremum") {
  for (double b : {0.05, 0.25, 0.49}) {
    const auto s = Schedule::power(1.0, b);
    for (double t = 0.0; t < 50.0; t += 0.37) {
      CHECK(std::abs(s.derivative(t)) / s.value(t) <= s.sup_ratio() + 1e-15);
      CHECK(s.value(t) > 0.0);
      CHECK(s.value(t) < s.cap());
    }
    CHECK(s.value(1e12) < s.value(1e6));
    CHECK(s.decays());
  }
}
