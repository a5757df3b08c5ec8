#include <cmath>
#include <vector>

#include "doctest.h"
#include "helpers.hpp"
#include "vremix/errors.hpp"
#include "vremix/intraday.hpp"
#include "vremix/wind.hpp"

using namespace vremix;
using testutil::TempDir;

TEST_SUITE("wind") {

TEST_CASE("hub-height extrapolation") {
  CHECK(extrapolate_hub_height(5.0, 80.0, 80.0, 1.0 / 7.0) == 5.0);
  CHECK(extrapolate_hub_height(0.0, 10.0, 101.0, 1.0 / 7.0) == 0.0);
  // Direct evaluation of the power law: 6 * 10.1^(1/7).
  double v = extrapolate_hub_height(6.0, 10.0, 101.0, 1.0 / 7.0);
  CHECK(v == doctest::Approx(6.0 * std::pow(10.1, 1.0 / 7.0)).epsilon(1e-15));
  CHECK(v == doctest::Approx(8.318).epsilon(1e-4));
  CHECK_THROWS_AS(extrapolate_hub_height(5.0, 0.0, 101.0, 1.0 / 7.0),
                  DomainError);
  CHECK_THROWS_AS(extrapolate_hub_height(5.0, 10.0, -1.0, 1.0 / 7.0),
                  DomainError);
  CHECK_THROWS_AS(extrapolate_hub_height(-2.0, 10.0, 101.0, 1.0 / 7.0),
                  DomainError);
}

TEST_CASE("moist-air density") {
  // Standard atmosphere: 101325 Pa at 15 C, dry air.
  double rho = air_density({288.15, 101325.0, 0.0});
  CHECK(rho == doctest::Approx(1.2250).epsilon(5e-4));
  CHECK(rho == doctest::Approx(101325.0 / (287.058 * 288.15)).epsilon(1e-15));

  // Humidity strictly lowers density at fixed T, p.
  double humid = air_density({288.15, 101325.0, 0.01});
  CHECK(humid < rho);

  // Density is linear in pressure.
  double doubled = air_density({288.15, 2.0 * 101325.0, 0.0});
  CHECK(doubled == doctest::Approx(2.0 * rho).epsilon(1e-15));

  CHECK_THROWS_AS(air_density({0.0, 101325.0, 0.0}), DomainError);
  CHECK_THROWS_AS(air_density({288.15, 0.0, 0.0}), DomainError);
  CHECK_THROWS_AS(air_density({288.15, 101325.0, 0.2}), DomainError);
}

TEST_CASE("density-corrected speed") {
  CHECK(density_corrected_speed(7.5, 1.225, 1.225) == 7.5);
  CHECK(density_corrected_speed(5.0, 8.0 * 1.225, 1.225) ==
        doctest::Approx(10.0).epsilon(1e-15));
  CHECK(density_corrected_speed(10.0, 0.9 * 1.225, 1.225) ==
        doctest::Approx(10.0 * std::cbrt(0.9)).epsilon(1e-15));
  CHECK(density_corrected_speed(10.0, 0.9 * 1.225, 1.225) ==
        doctest::Approx(9.655).epsilon(1e-4));
  CHECK_THROWS_AS(density_corrected_speed(10.0, 0.0, 1.225), DomainError);
  CHECK_THROWS_AS(density_corrected_speed(10.0, 1.2, -1.0), DomainError);
}

TEST_CASE("power curve transfer honors cut-in, knots, and cut-out") {
  PowerCurve curve = PowerCurve::swt23_101();
  CHECK(curve.nominal_power_w() == 2300e3);
  CHECK(curve.cut_in_ms() == 3.0);
  CHECK(curve.cut_out_ms() == 25.0);

  CHECK(curve(0.0) == 0.0);
  CHECK(curve(2.999) == 0.0);          // below cut-in
  CHECK(curve(3.0) == 0.0);            // first knot
  CHECK(curve(8.0) == 1375e3);         // knot value
  CHECK(curve(12.0) == 2300e3);        // rated
  CHECK(curve(20.0) == 2300e3);        // plateau
  CHECK(curve(25.0) == 0.0);           // cut-out preserved
  CHECK(curve(30.0) == 0.0);           // beyond cut-out
  CHECK(curve(4.5) == doctest::Approx(0.5 * (120e3 + 310e3)).epsilon(1e-15));
  CHECK_THROWS_AS(curve(-1.0), DomainError);
}

TEST_CASE("power curve is monotone below rated and bounded everywhere") {
  PowerCurve curve = PowerCurve::swt23_101();
  double prev = 0.0;
  for (double v = 0.0; v <= 12.0; v += 0.01) {
    double p = curve(v);
    CHECK(p >= prev - 1e-12);
    prev = p;
  }
  for (double v = 0.0; v <= 30.0; v += 0.01) {
    double p = curve(v);
    CHECK(p >= 0.0);
    CHECK(p <= curve.nominal_power_w());
  }
}

TEST_CASE("power curve construction rejects malformed tables") {
  CHECK_THROWS_AS(PowerCurve({3.0}, {0.0}, 1e6, 3.0, 25.0), ValidationError);
  CHECK_THROWS_AS(PowerCurve({3.0, 3.0}, {0.0, 1e5}, 1e6, 3.0, 25.0),
                  ValidationError);
  CHECK_THROWS_AS(PowerCurve({3.0, 4.0}, {1e5, 0.0}, 1e6, 3.0, 25.0),
                  ValidationError);
  CHECK_THROWS_AS(PowerCurve({3.0, 4.0}, {0.0, 2e6}, 1e6, 3.0, 25.0),
                  ValidationError);
  CHECK_THROWS_AS(PowerCurve({3.0, 4.0}, {0.0, 1e5}, 1e6, 25.0, 3.0),
                  ValidationError);
}

TEST_CASE("power curve file round trip") {
  TempDir dir("curve");
  PowerCurve curve = PowerCurve::swt23_101();
  auto path = dir.file("curve.csv");
  curve.save(path);
  PowerCurve back = PowerCurve::load(path);
  CHECK(back.nominal_power_w() == curve.nominal_power_w());
  CHECK(back.cut_in_ms() == curve.cut_in_ms());
  CHECK(back.cut_out_ms() == curve.cut_out_ms());
  REQUIRE(back.speeds() == curve.speeds());
  CHECK(back.powers() == curve.powers());

  auto no_meta = dir.file("bare.csv");
  testutil::write_file(no_meta, "speed_ms,power_w\n3,0\n12,2300000\n");
  CHECK_THROWS_AS(PowerCurve::load(no_meta), ParseError);
}

TEST_CASE("hourly input: zero wind gives zero power, rated wind nominal power") {
  WindFields f;
  f.daily = false;
  f.start = utc_hour({2010, 1, 1});
  f.gridpoint_ids = {"g1"};
  f.speed_ms = Eigen::MatrixXd::Zero(48, 1);
  PowerCurve curve = PowerCurve::swt23_101();
  WindModelConfig cfg;

  GridPower zero = hourly_wind_power(f, curve, cfg, nullptr, 1);
  CHECK(zero.power_w.rows() == 48);
  CHECK(zero.power_w.cwiseAbs().maxCoeff() == 0.0);

  // A reference speed whose hub extrapolation lands on the rated plateau.
  f.speed_ms.setConstant(12.0);
  GridPower rated = hourly_wind_power(f, curve, cfg, nullptr, 1);
  CHECK(rated.power_w.minCoeff() == curve.nominal_power_w());
  CHECK(rated.power_w.maxCoeff() == curve.nominal_power_w());
}

TEST_CASE("hourly input equals the pointwise transform chain") {
  WindFields f;
  f.daily = false;
  f.start = utc_hour({2010, 1, 1});
  f.gridpoint_ids = {"g1", "g2"};
  f.speed_ms.resize(24, 2);
  for (int t = 0; t < 24; ++t) {
    f.speed_ms(t, 0) = 0.3 * t;
    f.speed_ms(t, 1) = 8.0 - 0.2 * t;
  }
  PowerCurve curve = PowerCurve::swt23_101();
  WindModelConfig cfg;
  GridPower out = hourly_wind_power(f, curve, cfg, nullptr, 99);
  for (int t = 0; t < 24; ++t)
    for (int g = 0; g < 2; ++g) {
      double hub = extrapolate_hub_height(f.speed_ms(t, g),
                                          cfg.reference_height_m,
                                          cfg.hub_height_m,
                                          cfg.power_law_exponent);
      CHECK(out.power_w(t, g) == curve(hub));
    }
}

TEST_CASE("daily densities scale the hourly speeds before the curve") {
  WindFields f;
  f.daily = false;
  f.start = utc_hour({2010, 1, 1});
  f.gridpoint_ids = {"g1"};
  f.speed_ms = Eigen::MatrixXd::Constant(24, 1, 5.0);
  // One day of density inputs: cold dense air boosts effective speed.
  f.temperature_k = Eigen::MatrixXd::Constant(1, 1, 260.0);
  f.pressure_pa = Eigen::MatrixXd::Constant(1, 1, 101325.0);
  f.specific_humidity = Eigen::MatrixXd::Constant(1, 1, 0.0);
  PowerCurve curve = PowerCurve::swt23_101();
  WindModelConfig cfg;
  GridPower out = hourly_wind_power(f, curve, cfg, nullptr, 1);

  double rho = air_density({260.0, 101325.0, 0.0});
  double hub = extrapolate_hub_height(5.0, 10.0, 101.0, 1.0 / 7.0);
  double expected = curve(density_corrected_speed(hub, rho, cfg.rho0_kg_m3));
  CHECK(rho > cfg.rho0_kg_m3);
  for (int t = 0; t < 24; ++t) CHECK(out.power_w(t, 0) == expected);
}

TEST_CASE("daily input requires a matching sampler and midnight start") {
  WindFields f;
  f.daily = true;
  f.start = utc_hour({2010, 1, 1});
  f.gridpoint_ids = {"g1"};
  f.speed_ms = Eigen::MatrixXd::Constant(3, 1, 8.0);
  PowerCurve curve = PowerCurve::swt23_101();
  CHECK_THROWS_AS(hourly_wind_power(f, curve, WindModelConfig{}, nullptr, 1),
                  ConfigError);

  WeibullCopulaParams other;
  other.gridpoint_ids = {"g9"};
  other.shape = Eigen::VectorXd::Constant(1, 2.0);
  other.correlation = Eigen::MatrixXd::Identity(1, 1);
  IntradaySampler mismatched(other);
  CHECK_THROWS_AS(hourly_wind_power(f, curve, WindModelConfig{}, &mismatched, 1),
                  ConfigError);

  WeibullCopulaParams ok = other;
  ok.gridpoint_ids = {"g1"};
  IntradaySampler sampler(ok);
  WindFields shifted = f;
  shifted.start = utc_hour({2010, 1, 1}, 6);
  CHECK_THROWS_AS(hourly_wind_power(shifted, curve, WindModelConfig{}, &sampler, 1),
                  ValidationError);
}

TEST_CASE("field validation rejects shape mismatches") {
  WindFields f;
  f.daily = false;
  f.start = utc_hour({2010, 1, 1});
  f.gridpoint_ids = {"g1", "g2"};
  f.speed_ms = Eigen::MatrixXd::Constant(24, 1, 5.0);  // 1 column, 2 ids
  PowerCurve curve = PowerCurve::swt23_101();
  CHECK_THROWS_AS(hourly_wind_power(f, curve, WindModelConfig{}, nullptr, 1),
                  ValidationError);

  WindFields partial;
  partial.daily = true;
  partial.start = utc_hour({2010, 1, 1});
  partial.gridpoint_ids = {"g1"};
  partial.speed_ms = Eigen::MatrixXd::Constant(3, 1, 8.0);
  partial.temperature_k = Eigen::MatrixXd::Constant(3, 1, 280.0);
  CHECK_THROWS_AS(hourly_wind_power(partial, curve, WindModelConfig{}, nullptr, 1),
                  ConfigError);
}

TEST_CASE("daily input expands through the sampler with the mean preserved") {
  const int days = 10000;
  WeibullCopulaParams params;
  params.gridpoint_ids = {"g1"};
  params.shape = Eigen::VectorXd::Constant(1, 2.0);
  params.correlation = Eigen::MatrixXd::Identity(1, 1);
  IntradaySampler sampler(params);

  WindFields f;
  f.daily = true;
  f.start = utc_hour({2010, 1, 1});
  f.gridpoint_ids = {"g1"};
  f.speed_ms = Eigen::MatrixXd::Constant(days, 1, 8.0);

  // A linear probe curve isolates the sampled speeds from curve shape:
  // power = speed for speeds below the plateau.
  PowerCurve probe({0.001, 1000.0}, {0.001, 1000.0}, 1000.0, 0.001, 1e6);
  WindModelConfig cfg;
  cfg.hub_height_m = cfg.reference_height_m;  // identity extrapolation
  GridPower out = hourly_wind_power(f, probe, cfg, &sampler, 7);

  REQUIRE(out.power_w.rows() == days * 24);
  double mean = out.power_w.col(0).mean();
  // Monte-Carlo convergence of the sampler's mean constraint (target 8).
  CHECK(mean == doctest::Approx(8.0).epsilon(0.01));
}

}  // TEST_SUITE("wind")
