#include <algorithm>
#include <vector>

#include <catch2/catch_amalgamated.hpp>

#include <swarmsense/energy.hpp>
#include <swarmsense/rng.hpp>

#include "helpers.hpp"

using namespace swarmsense;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

TEST_CASE("induced hover power of the reference drone") {
  CHECK_THAT(induced_hover_power(DroneSpec{}),
             WithinRel(4.824017913466774, 1e-12));
}

TEST_CASE("calibration reproduces the measured powers") {
  EnergyModel model = testutil::reference_model();
  CHECK(model.hover_power_w == 31.80);
  CHECK_THAT(model.maneuver_power_w, WithinRel(31.92, 1e-12));
  CHECK_THAT(model.propulsive_efficiency, WithinRel(0.1618797957539186, 1e-12));
  CHECK(model.avionics_power_w == 2.0);
}

TEST_CASE("calibration rejects impossible targets") {
  DroneSpec spec;
  CHECK_THROWS_AS(calibrate(spec, 1.5, 2.0), NumericError);   // below avionics
  CHECK_THROWS_AS(calibrate(spec, 31.8, 2.0, 0.9), NumericError);
  CHECK_THROWS_AS(calibrate(spec, 31.8, -1.0), NumericError);
}

TEST_CASE("battery capacity and endurance") {
  DroneSpec spec;
  CHECK_THAT(battery_energy(spec), WithinRel(15048.0, 1e-12));
  CHECK_THAT(usable_battery_energy(spec), WithinRel(13543.2, 1e-12));

  double endurance = usable_battery_energy(spec) / 31.80;
  CHECK_THAT(endurance, WithinRel(425.88679245283015, 1e-12));
  CHECK(endurance >= 400.0);
  CHECK(endurance <= 450.0);
}

TEST_CASE("drone validation catches nonsense parameters") {
  auto broken = [](auto mutate) {
    DroneSpec spec;
    mutate(spec);
    return spec;
  };
  CHECK_THROWS_AS(validate(broken([](DroneSpec& s) { s.mass_kg = 0.0; })), ConfigError);
  CHECK_THROWS_AS(validate(broken([](DroneSpec& s) { s.prop_count = 0; })), ConfigError);
  CHECK_THROWS_AS(validate(broken([](DroneSpec& s) { s.usable_fraction = 1.1; })), ConfigError);
  CHECK_THROWS_AS(validate(broken([](DroneSpec& s) { s.ground_speed_mps = -1; })), ConfigError);
  CHECK_NOTHROW(validate(DroneSpec{}));
}

TEST_CASE("route length of a closed tour") {
  SensingMap map = testutil::reference_map();
  CHECK(route_length(map, {}) == 0.0);
  CHECK_THAT(route_length(map, {1}), WithinRel(0.84, 1e-12));
  // out and back along one edge, twice
  CHECK_THAT(route_length(map, {1, 0, 4}), WithinRel(0.42 * 2 + 0.295 * 2, 1e-12));
}

TEST_CASE("plan energy for a single-cell trip") {
  SensingMap map = testutil::reference_map();
  EnergyModel model = testutil::reference_model();
  DroneSpec spec;

  Plan plan;
  plan.route = {1};
  plan.hover.assign(16, 0.0);
  plan.hover[1] = 13.0;

  EnergyEstimate e = plan_energy(plan, model, map, spec);
  CHECK_THAT(e.travel_time_s, WithinRel(8.4, 1e-12));
  CHECK(e.hover_time_s == 13.0);
  CHECK_THAT(e.travel_energy_j, WithinRel(268.128, 1e-12));
  CHECK_THAT(e.hover_energy_j, WithinRel(413.4, 1e-12));
  CHECK_THAT(e.total_energy_j, WithinRel(681.528, 1e-12));
}

TEST_CASE("plan energy validates the plan against the map") {
  SensingMap map = testutil::reference_map();
  EnergyModel model = testutil::reference_model();
  DroneSpec spec;

  Plan bad_cell;
  bad_cell.route = {17};
  CHECK_THROWS_AS(plan_energy(bad_cell, model, map, spec), ConfigError);

  Plan bad_hover;
  bad_hover.route = {1};
  bad_hover.hover = {13.0, 13.0};
  CHECK_THROWS_AS(plan_energy(bad_hover, model, map, spec), ConfigError);

  Plan no_hover;  // pure travel is allowed
  no_hover.route = {1};
  EnergyEstimate e = plan_energy(no_hover, model, map, spec);
  CHECK(e.hover_energy_j == 0.0);
  CHECK(e.travel_energy_j > 0.0);
}

static std::vector<int> random_route(Rng& rng, int len) {
  std::vector<int> cells{0, 4, 6, 7, 8, 9, 10, 11, 12, 13, 14, 15};
  rng.shuffle(cells);
  cells.resize(len);
  return cells;
}

TEST_CASE("splicing two routes shifts energy by the connecting legs only") {
  SensingMap map = testutil::reference_map();
  EnergyModel model = testutil::reference_model();
  DroneSpec spec;
  Rng rng(7);

  for (int trial = 0; trial < 50; ++trial) {
    auto a = random_route(rng, 3);
    auto b = random_route(rng, 3);
    Plan pa, pb, pab;
    pa.route = a;
    pb.route = b;
    pab.route = a;
    pab.route.insert(pab.route.end(), b.begin(), b.end());

    double ea = plan_energy(pa, model, map, spec).total_energy_j;
    double eb = plan_energy(pb, model, map, spec).total_energy_j;
    double eab = plan_energy(pab, model, map, spec).total_energy_j;
    int dep = map.departure_cell;
    double splice = distance(map, a.back(), b.front()) -
                    distance(map, a.back(), dep) - distance(map, dep, b.front());
    double expected = ea + eb + model.maneuver_power_w * splice / spec.ground_speed_mps;
    CHECK_THAT(eab, WithinRel(expected, 1e-9));
  }
}

TEST_CASE("reversing a route leaves its energy unchanged") {
  SensingMap map = testutil::reference_map();
  EnergyModel model = testutil::reference_model();
  DroneSpec spec;
  Rng rng(8);

  for (int trial = 0; trial < 20; ++trial) {
    Plan fwd;
    fwd.route = random_route(rng, 5);
    Plan rev = fwd;
    std::reverse(rev.route.begin(), rev.route.end());
    CHECK_THAT(plan_energy(rev, model, map, spec).total_energy_j,
               WithinRel(plan_energy(fwd, model, map, spec).total_energy_j, 1e-12));
  }
}

TEST_CASE("each added hover second costs exactly the hover power") {
  SensingMap map = testutil::reference_map();
  EnergyModel model = testutil::reference_model();
  DroneSpec spec;

  Plan plan;
  plan.route = {4, 8, 9};
  plan.hover.assign(16, 0.0);
  for (int c : plan.route) plan.hover[c] = 13.0;
  double base = plan_energy(plan, model, map, spec).total_energy_j;
  plan.hover[8] += 1.0;
  double more = plan_energy(plan, model, map, spec).total_energy_j;
  CHECK_THAT(more - base, WithinRel(model.hover_power_w, 1e-9));
}

TEST_CASE("battery feasibility honours both limits") {
  // Narrow two-cell map stretched so one round trip takes 342 s of travel.
  SensingMap map = build_map(1, 2, 34.2, 1.0, 0);
  EnergyModel model = testutil::reference_model();
  DroneSpec spec;

  auto with_hover = [&](double seconds) {
    Plan plan;
    plan.route = {1};
    plan.hover.assign(2, 0.0);
    plan.hover[1] = seconds;
    return plan;
  };

  CHECK(battery_feasible(with_hover(77.0), model, map, spec));   // 419 s, 13.4 kJ
  CHECK_FALSE(battery_feasible(with_hover(90.0), model, map, spec));  // over 420 s

  spec.max_flight_time_s = 1000.0;  // now only the energy limit binds
  CHECK(battery_feasible(with_hover(82.0), model, map, spec));   // 13524 J
  CHECK_FALSE(battery_feasible(with_hover(83.0), model, map, spec));  // 13556 J
}
