#include <string>
#include <vector>

#include "doctest.h"
#include "helpers.hpp"
#include "vremix/config.hpp"
#include "vremix/errors.hpp"

using namespace vremix;

namespace {

// Smallest configuration that passes full-study validation.
const char* kMinimalConfig = R"(
[study]
zones = NORD, SUD
metadata_file = meta.csv

[demand]
observations_file = obs.csv
temperature_file = temp.csv
)";

StudyConfig parse(const std::string& text) {
  ConfigFile file = ConfigFile::from_string(text);
  return parse_study_config(file);
}

}  // namespace

TEST_SUITE("config") {

TEST_CASE("error hierarchy roots in the library base error") {
  CHECK_THROWS_AS(throw ConfigError("x"), Error);
  CHECK_THROWS_AS(throw ParseError("x"), Error);
  CHECK_THROWS_AS(throw NumericalError("x"), std::runtime_error);
}

TEST_CASE("sectioned key-value parsing") {
  ConfigFile f = ConfigFile::from_string(
      "# comment\n"
      "[study]\n"
      "zones = A ,B\n"
      "seed = 7\n"
      "; another comment\n"
      "[optimizer]\n"
      "step = 0.01\n"
      "flag = true\n");
  CHECK(f.has("study", "zones"));
  CHECK(!f.has("study", "missing"));
  CHECK(f.get_string("study", "zones") == "A ,B");
  CHECK(f.get_int("study", "seed", 0) == 7);
  CHECK(f.get_double("optimizer", "step") == 0.01);
  CHECK(f.get_bool("optimizer", "flag", false));
  CHECK(f.get_double("optimizer", "absent", 2.5) == 2.5);
  CHECK(f.get_optional("study", "nope") == std::nullopt);
}

TEST_CASE("unknown keys are rejected wholesale") {
  ConfigFile f = ConfigFile::from_string(
      "[study]\nzones = A\ntypo_key = 3\n");
  (void)f.get_string("study", "zones");
  CHECK_THROWS_WITH_AS(f.reject_unknown({"study"}),
                       doctest::Contains("typo_key"), ConfigError);

  ConfigFile g = ConfigFile::from_string("[mystery]\nk = 1\n");
  CHECK_THROWS_WITH_AS(g.reject_unknown({"study"}),
                       doctest::Contains("mystery"), ConfigError);
}

TEST_CASE("list splitting trims and rejects empties") {
  CHECK(split_list("a, b ,c", "t") ==
        std::vector<std::string>{"a", "b", "c"});
  CHECK_THROWS_AS(split_list("a,,b", "t"), ConfigError);
  CHECK_THROWS_AS(split_list("", "t"), ConfigError);
}

TEST_CASE("minimal study config fills defaults") {
  StudyConfig cfg = parse(kMinimalConfig);
  REQUIRE(cfg.zones.size() == 2);
  CHECK(cfg.zones[0].name == "NORD");
  CHECK(cfg.technologies.size() == 2);
  CHECK(cfg.technologies[0].name == "pv");
  CHECK(cfg.seed == 42);
  CHECK(cfg.optimizer.step == 0.001);
  CHECK(!cfg.optimizer.total_capacity_mw.has_value());
  CHECK(cfg.optimizer.strategies ==
        std::vector<Strategy>{Strategy::Global, Strategy::Technology,
                              Strategy::Base});
  CHECK(cfg.demand.cv_blocks == 7);
  CHECK(cfg.wind.hub_height_m == 101.0);
  CHECK(cfg.pv.constants.nominal_power_w == 250.0);

  ComponentIndex idx = cfg.component_index();
  REQUIRE(idx.size() == 4);
  CHECK(idx.at(0).zone.name == "NORD");
  CHECK(idx.at(0).tech.name == "pv");
  CHECK(idx.at(3).zone.name == "SUD");
  CHECK(idx.at(3).tech.name == "wind");
}

TEST_CASE("strategy list parses named subsets") {
  StudyConfig cfg = parse(std::string(kMinimalConfig) +
                          "[optimizer]\nstrategy = technology, base\n");
  CHECK(cfg.optimizer.strategies ==
        std::vector<Strategy>{Strategy::Technology, Strategy::Base});
}

TEST_CASE("pv reference efficiency is recomputed from power and area") {
  StudyConfig cfg = parse(std::string(kMinimalConfig) +
                          "[pv]\nnominal_power_w = 300\nmodule_area_m2 = 2\n");
  CHECK(cfg.pv.constants.reference_efficiency ==
        doctest::Approx(300.0 / 2000.0).epsilon(1e-15));
}

TEST_CASE("wind speed input forms are mutually exclusive") {
  CHECK_THROWS_AS(parse(std::string(kMinimalConfig) +
                        "[wind]\nspeed_file = s.csv\nu_file = u.csv\n"
                        "v_file = v.csv\n"),
                  ConfigError);
  CHECK_THROWS_AS(
      parse(std::string(kMinimalConfig) + "[wind]\nu_file = u.csv\n"),
      ConfigError);
  CHECK_NOTHROW(parse(std::string(kMinimalConfig) +
                      "[wind]\nu_file = u.csv\nv_file = v.csv\n"));
}

TEST_CASE("density trio must be complete or absent") {
  CHECK_THROWS_AS(parse(std::string(kMinimalConfig) +
                        "[wind]\nspeed_file = s.csv\n"
                        "temperature_file = t.csv\n"),
                  ConfigError);
  CHECK_NOTHROW(parse(std::string(kMinimalConfig) +
                      "[wind]\nspeed_file = s.csv\ntemperature_file = t.csv\n"
                      "pressure_file = p.csv\nhumidity_file = q.csv\n"));
}

TEST_CASE("intraday parameter files come in pairs") {
  CHECK_THROWS_AS(parse(std::string(kMinimalConfig) +
                        "[wind]\nspeed_file = s.csv\n"
                        "intraday_shape_file = shape.csv\n"),
                  ConfigError);
}

TEST_CASE("numeric validation rules") {
  CHECK_THROWS_AS(parse(std::string(kMinimalConfig) +
                        "[optimizer]\nstep = 0\n"),
                  ConfigError);
  CHECK_THROWS_AS(parse(std::string(kMinimalConfig) +
                        "[optimizer]\nstep = 1.5\n"),
                  ConfigError);
  CHECK_THROWS_AS(parse(std::string(kMinimalConfig) +
                        "[demand]\nobservations_file = o.csv\n"
                        "temperature_file = t.csv\ncv_blocks = 1\n"),
                  ConfigError);
  CHECK_THROWS_AS(parse(std::string(kMinimalConfig) +
                        "[analysis]\nconv_share = 1.2\n"),
                  ConfigError);
  CHECK_THROWS_AS(parse(std::string(kMinimalConfig) +
                        "[analysis]\nsat_share = 0\n"),
                  ConfigError);
}

TEST_CASE("period bounds must be ordered") {
  StudyConfig ok = parse(
      "[study]\nzones = A\nmetadata_file = m.csv\n"
      "period_start = 2001-01-01\nperiod_end = 2002-12-31\n"
      "[demand]\nobservations_file = o.csv\ntemperature_file = t.csv\n");
  CHECK(ok.period_start == Date{2001, 1, 1});
  CHECK(ok.period_end == Date{2002, 12, 31});
  CHECK_THROWS_AS(
      parse("[study]\nzones = A\nmetadata_file = m.csv\n"
            "period_start = 2003-01-01\nperiod_end = 2002-12-31\n"
            "[demand]\nobservations_file = o.csv\ntemperature_file = t.csv\n"),
      ConfigError);
}

TEST_CASE("duplicate zones are rejected") {
  CHECK_THROWS_AS(
      parse("[study]\nzones = A, A\nmetadata_file = m.csv\n"
            "[demand]\nobservations_file = o.csv\ntemperature_file = t.csv\n"),
      ConfigError);
}

}  // TEST_SUITE("config")
