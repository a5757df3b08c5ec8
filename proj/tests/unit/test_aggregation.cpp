#include <cmath>
#include <map>
#include <vector>

#include "doctest.h"
#include "helpers.hpp"
#include "vremix/aggregation.hpp"
#include "vremix/errors.hpp"
#include "vremix/stats.hpp"

using namespace vremix;

namespace {

GridMetadata three_point_metadata() {
  GridMetadata md;
  md.points = {GridpointInfo{"g1", 45.0, 9.0, ZoneId{"N"}},
               GridpointInfo{"g2", 45.5, 9.5, ZoneId{"N"}},
               GridpointInfo{"g3", 41.0, 14.0, ZoneId{"S"}}};
  return md;
}

GridPower three_point_power() {
  GridPower p;
  p.start = utc_hour({2010, 6, 1});
  p.gridpoint_ids = {"g1", "g2", "g3"};
  p.power_w.resize(2, 3);
  p.power_w << 1000.0, 250.0, 300.0,  //
      2000.0, 0.0, 150.0;
  return p;
}

}  // namespace

TEST_SUITE("aggregation") {

TEST_CASE("single-gridpoint zones normalize power by nominal capacity") {
  GridMetadata md;
  md.points = {GridpointInfo{"g1", 45.0, 9.0, ZoneId{"N"}}};
  GridPower p;
  p.start = utc_hour({2010, 6, 1});
  p.gridpoint_ids = {"g1"};
  p.power_w.resize(3, 1);
  p.power_w << 0.0, 500.0, 1000.0;

  auto zones = aggregate_zones(p, md, {1000.0}, {ZoneId{"N"}});
  REQUIRE(zones.size() == 1);
  const HourlySeries& cf = zones.at("N");
  CHECK(cf.start == p.start);
  CHECK(cf.values == std::vector<double>{0.0, 0.5, 1.0});
}

TEST_CASE("zonal capacity factors are capacity-weighted") {
  auto zones = aggregate_zones(three_point_power(), three_point_metadata(),
                               {2000.0, 500.0, 1000.0},
                               {ZoneId{"N"}, ZoneId{"S"}});
  REQUIRE(zones.size() == 2);
  // Zone N holds 2500 W of nominal power.
  CHECK(zones.at("N").values == std::vector<double>{0.5, 0.8});
  CHECK(zones.at("S").values == std::vector<double>{0.3, 0.15});

  // Doubling every nominal power halves the capacity factor.
  auto doubled = aggregate_zones(three_point_power(), three_point_metadata(),
                                 {4000.0, 1000.0, 2000.0},
                                 {ZoneId{"N"}, ZoneId{"S"}});
  CHECK(doubled.at("N").values == std::vector<double>{0.25, 0.4});
}

TEST_CASE("zonal aggregation rejects malformed input") {
  GridMetadata md = three_point_metadata();
  GridPower p = three_point_power();
  std::vector<double> nominal{2000.0, 500.0, 1000.0};
  std::vector<ZoneId> zones{ZoneId{"N"}, ZoneId{"S"}};

  CHECK_THROWS_AS(aggregate_zones(GridPower{}, md, {}, zones), EmptySeries);
  CHECK_THROWS_AS(aggregate_zones(p, md, {2000.0, 500.0}, zones),
                  ValidationError);
  CHECK_THROWS_AS(aggregate_zones(p, md, nominal, {}), ConfigError);
  CHECK_THROWS_AS(aggregate_zones(p, md, {2000.0, 0.0, 1000.0}, zones),
                  ValidationError);

  GridPower unknown = p;
  unknown.gridpoint_ids[1] = "nowhere";
  CHECK_THROWS_AS(aggregate_zones(unknown, md, nominal, zones),
                  ValidationError);

  std::vector<ZoneId> extra{ZoneId{"N"}, ZoneId{"S"}, ZoneId{"E"}};
  CHECK_THROWS_AS(aggregate_zones(p, md, nominal, extra), ConfigError);

  GridPower nan = p;
  nan.power_w(1, 0) = std::nan("");
  CHECK_THROWS_AS(aggregate_zones(nan, md, nominal, zones), ValidationError);
}

TEST_CASE("bias correction rescales the series onto the target mean") {
  HourlySeries cf = testutil::hourly(utc_hour({2010, 1, 1}),
                                     {0.05, 0.15, 0.1});
  BiasCorrection b = bias_correct(cf, 0.121);

  CHECK(b.factor == doctest::Approx(1.21).epsilon(1e-14));
  CHECK(b.target == 0.121);
  CHECK(b.clipped == 0);
  CHECK(b.corrected.start == cf.start);
  CHECK(sample_mean(b.corrected) == doctest::Approx(0.121).epsilon(1e-14));

  // Without clipping the correction is a pure scaling: the variance picks
  // up the squared factor.
  double mean0 = sample_mean(cf), mean1 = sample_mean(b.corrected);
  double v0 = 0.0, v1 = 0.0;
  for (std::size_t t = 0; t < cf.size(); ++t) {
    v0 += (cf[t] - mean0) * (cf[t] - mean0);
    v1 += (b.corrected[t] - mean1) * (b.corrected[t] - mean1);
  }
  CHECK(v1 == doctest::Approx(b.factor * b.factor * v0).epsilon(1e-12));
}

TEST_CASE("bias correction to the current mean is the identity") {
  HourlySeries cf = testutil::seeded_hourly(55, 200, 0.01, 0.8);
  BiasCorrection b = bias_correct(cf, sample_mean(cf));
  CHECK(b.factor == 1.0);
  CHECK(b.clipped == 0);
  CHECK(b.corrected.values == cf.values);
}

TEST_CASE("bias correction clips above one and counts the clipped hours") {
  HourlySeries cf = testutil::hourly(utc_hour({2010, 1, 1}), {0.5, 0.9});
  BiasCorrection b = bias_correct(cf, 0.9);  // factor 9/7
  CHECK(b.clipped == 1);
  CHECK(b.corrected.values[1] == 1.0);
  CHECK(b.corrected.values[0] == doctest::Approx(0.5 * 0.9 / 0.7).epsilon(1e-14));
  // Clipping loses mass: the corrected mean falls below the target.
  CHECK(sample_mean(b.corrected) < 0.9);
}

TEST_CASE("bias correction rejects bad targets and degenerate series") {
  HourlySeries cf = testutil::hourly(utc_hour({2010, 1, 1}), {0.2, 0.4});
  CHECK_THROWS_AS(bias_correct(HourlySeries{}, 0.3), EmptySeries);
  CHECK_THROWS_AS(bias_correct(cf, 0.0), ValidationError);
  CHECK_THROWS_AS(bias_correct(cf, 1.0), ValidationError);
  CHECK_THROWS_AS(bias_correct(cf, -0.2), ValidationError);

  HourlySeries zero = testutil::hourly(utc_hour({2010, 1, 1}), {0.0, 0.0});
  CHECK_THROWS_AS(bias_correct(zero, 0.3), DomainError);
}

TEST_CASE("zone temperatures average gridpoints and convert to Celsius") {
  GridMetadata md = three_point_metadata();
  GridSeries t;
  t.variable = ClimateVariable::Temperature2m;
  t.sampling = Sampling::Daily;
  t.start = utc_hour({2010, 3, 5});
  t.gridpoint_ids = {"g1", "g2", "g3"};
  t.values.resize(2, 3);
  t.values << 283.0, 285.0, 290.0,  //
      280.0, 282.0, 288.0;

  auto zones = zone_daily_temperature_c(t, md, {ZoneId{"N"}, ZoneId{"S"}});
  REQUIRE(zones.size() == 2);
  const DailySeries& north = zones.at("N");
  CHECK(north.start == Date{2010, 3, 5});
  REQUIRE(north.size() == 2);
  CHECK(north[0] == 284.0 - 273.15);
  CHECK(north[1] == 281.0 - 273.15);
  CHECK(zones.at("S")[0] == 290.0 - 273.15);
  CHECK(zones.at("S")[1] == 288.0 - 273.15);
}

TEST_CASE("hourly temperatures are averaged into days first") {
  GridMetadata md;
  md.points = {GridpointInfo{"g1", 45.0, 9.0, ZoneId{"N"}}};
  GridSeries t;
  t.variable = ClimateVariable::Temperature2m;
  t.sampling = Sampling::Hourly;
  t.start = utc_hour({2010, 3, 5});
  t.gridpoint_ids = {"g1"};
  t.values.resize(48, 1);
  for (int h = 0; h < 24; ++h) t.values(h, 0) = 280.0;
  for (int h = 24; h < 48; ++h) t.values(h, 0) = 290.0;

  auto zones = zone_daily_temperature_c(t, md, {ZoneId{"N"}});
  const DailySeries& s = zones.at("N");
  REQUIRE(s.size() == 2);
  CHECK(s[0] == 280.0 - 273.15);
  CHECK(s[1] == 290.0 - 273.15);
}

TEST_CASE("zone temperature conversion rejects malformed input") {
  GridMetadata md = three_point_metadata();
  GridSeries t;
  t.variable = ClimateVariable::Temperature2m;
  t.sampling = Sampling::Daily;
  t.start = utc_hour({2010, 3, 5});
  t.gridpoint_ids = {"g1", "g2", "g3"};
  t.values.resize(1, 3);
  t.values << 283.0, 285.0, 290.0;

  GridSeries wrong = t;
  wrong.variable = ClimateVariable::WindSpeed10m;
  CHECK_THROWS_AS(zone_daily_temperature_c(wrong, md, {ZoneId{"N"}}),
                  ValidationError);

  GridSeries empty = t;
  empty.values.resize(0, 3);
  CHECK_THROWS_AS(zone_daily_temperature_c(empty, md, {ZoneId{"N"}}),
                  EmptySeries);

  GridSeries offset = t;
  offset.sampling = Sampling::Hourly;
  offset.values.resize(24, 3);
  offset.values.setConstant(280.0);
  offset.start = utc_hour({2010, 3, 5}, 6);
  CHECK_THROWS_AS(zone_daily_temperature_c(offset, md, {ZoneId{"N"}}),
                  ValidationError);

  GridSeries ragged = t;
  ragged.sampling = Sampling::Hourly;
  ragged.values.resize(25, 3);
  ragged.values.setConstant(280.0);
  CHECK_THROWS_AS(zone_daily_temperature_c(ragged, md, {ZoneId{"N"}}),
                  ValidationError);

  GridSeries unknown = t;
  unknown.gridpoint_ids[2] = "nowhere";
  CHECK_THROWS_AS(zone_daily_temperature_c(unknown, md, {ZoneId{"N"}}),
                  ValidationError);

  CHECK_THROWS_AS(zone_daily_temperature_c(t, md, {ZoneId{"E"}}), ConfigError);
}

}  // TEST_SUITE("aggregation")
