#include <doctest.h>

#include "irssense/harness.hpp"

#include <charconv>
#include <sstream>

using namespace irssense;

TEST_CASE("a one-key config fills every default") {
  const auto cfg = config_from_json_text(R"({"architecture": "active"})");
  CHECK(cfg.scenario.architecture == Architecture::active);
  CHECK(cfg.scenario.irs_elements.num_elements == 128);
  CHECK(cfg.scenario.irs_sensors.num_elements == 8);
  CHECK(cfg.scenario.bs_irs_distance_m == doctest::Approx(100.0));
  CHECK((cfg.scenario.controller_position - Vec3(0.0, 0.5, 0.0)).norm() < 1e-12);
  CHECK(cfg.trials == 200);
  CHECK(cfg.experiment == ExperimentKind::beampattern);
  CHECK(cfg.architectures.size() == 1);
  REQUIRE(cfg.distances_m.size() == 10);
  CHECK(cfg.distances_m.front() == doctest::Approx(5.0));
  CHECK(cfg.distances_m.back() == doctest::Approx(50.0));
  CHECK_NOTHROW(cfg.validate());
}

TEST_CASE("an empty config covers all architectures") {
  const auto cfg = config_from_json_text("{}");
  CHECK(cfg.architectures.size() == 3);
}

TEST_CASE("unknown keys are rejected with their field path") {
  CHECK_THROWS_WITH_AS(config_from_json_text(R"({"scenario": {"x": 1}})"),
                       doctest::Contains("unknown config key: scenario.x"),
                       std::invalid_argument);
  CHECK_THROWS_WITH_AS(config_from_json_text(R"({"bogus": 1})"),
                       doctest::Contains("unknown config key: bogus"),
                       std::invalid_argument);
  CHECK_THROWS_WITH_AS(config_from_json_text("not json"),
                       doctest::Contains("not valid JSON"), std::invalid_argument);
}

TEST_CASE("validation names the offending field") {
  auto cfg = config_from_json_text("{}");
  cfg.trials = 0;
  CHECK_THROWS_WITH_AS(cfg.validate(), doctest::Contains("trials"),
                       std::invalid_argument);

  CHECK_THROWS_AS(
      config_from_json_text(R"({"distances_m": [10.0, 5.0]})").validate(),
      std::invalid_argument);
  CHECK_THROWS_AS(config_from_json_text(R"({"algorithms": ["fft"]})"),
                  std::invalid_argument);
}

TEST_CASE("subspace algorithms are refused for passive sensing") {
  CHECK_THROWS_AS(config_from_json_text(
                      R"({"architectures": ["passive"], "algorithms": ["music"]})")
                      .validate(),
                  std::invalid_argument);
  CHECK_NOTHROW(config_from_json_text(
                    R"({"architectures": ["passive"], "algorithms": ["mle"]})")
                    .validate());
}

TEST_CASE("missing config files surface as I/O errors") {
  CHECK_THROWS_AS(load_config("/no/such/config.json"), std::runtime_error);
}

TEST_CASE("format_double round-trips exactly") {
  for (double v : {0.0, 1.0, -30.125, 1e-12, 0.1, 3.0e8, -7.25e-5}) {
    const std::string s = format_double(v);
    double back = 0.0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), back);
    REQUIRE(res.ec == std::errc{});
    CHECK(back == v);
  }
}

TEST_CASE("worker count honors the environment cap") {
  CHECK(worker_count() >= 1);
}

TEST_CASE("beampattern rows cover each architecture over the grid") {
  auto cfg = config_from_json_text(
      R"({"experiment": "beampattern", "grid_step_deg": 1.0,
          "architectures": ["active", "semi_passive"]})");
  const auto rows = run_beampattern(cfg);
  CHECK(rows.size() == 2 * 180);
  std::ostringstream os;
  write_beampattern_csv(rows, os);
  const std::string text = os.str();
  CHECK(text.rfind("angle_deg,architecture,power_dbw\n", 0) == 0);
  CHECK(std::count(text.begin(), text.end(), '\n') == 1 + 2 * 180);
}

TEST_CASE("rmse sweep output is reproducible and well formed") {
  auto cfg = config_from_json_text(
      R"({"experiment": "rmse", "architectures": ["active"],
          "algorithms": ["esprit"], "trials": 4, "distances_m": [5.0, 10.0],
          "seed": 17})");
  const auto rows = run_rmse_sweep(cfg);
  REQUIRE(rows.size() == 2);
  for (const auto& r : rows) {
    CHECK(r.trials == 4);
    CHECK(r.algorithm == "esprit");
    CHECK(r.rmse_deg >= 0.0);
    CHECK(r.resolved_fraction >= 0.0);
    CHECK(r.resolved_fraction <= 1.0);
  }

  std::ostringstream a, b;
  write_rmse_csv(rows, a);
  write_rmse_csv(run_rmse_sweep(cfg), b);
  CHECK(a.str() == b.str());
  CHECK(a.str().rfind("distance_m,architecture,algorithm,rmse_deg,trials,resolved_fraction\n",
                      0) == 0);
}
