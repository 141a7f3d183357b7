#include <doctest.h>

#include "irssense/estimate.hpp"

#include <numbers>

using namespace irssense;

namespace {

Scenario noiseless_defaults(Architecture arch) {
  Scenario scn = Scenario::defaults(arch);
  scn.budget.noise_power_w = 1e-30;
  return scn;
}

Eigen::MatrixXcd covariance_for(const Scenario& scn, int t_snapshots) {
  const auto sched = dft_schedule(scn.irs_elements.num_elements).cycled(t_snapshots);
  RngStream rng = derive_stream(scn.master_seed, 0, "cov");
  return sample_covariance(simulate(scn, sched, rng));
}

// Repeats a single codeword so the reflection never changes between snapshots.
ReflectionSchedule constant_schedule(int n, int t_snapshots) {
  ReflectionSchedule s = dft_schedule(n).cycled(t_snapshots);
  for (int t = 1; t < t_snapshots; ++t) {
    s.coefficients.row(t) = s.coefficients.row(0);
  }
  return s;
}

}  // namespace

TEST_CASE("sample covariance basics") {
  SnapshotSet one;
  one.samples = Eigen::MatrixXcd::Zero(4, 1);
  one.samples(1, 0) = cd(1.0, 2.0);
  const Eigen::MatrixXcd r1 = sample_covariance(one);
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(r1);
  CHECK(svd.singularValues()(1) < 1e-12 * svd.singularValues()(0));
  CHECK((r1 - r1.adjoint()).norm() < 1e-15);

  SnapshotSet empty;
  empty.samples = Eigen::MatrixXcd::Zero(4, 0);
  CHECK_THROWS_AS(sample_covariance(empty), std::invalid_argument);
}

TEST_CASE("noise-only covariance approaches sigma^2 I") {
  Scenario scn = Scenario::defaults(Architecture::active);
  scn.targets.clear();
  scn.budget.noise_power_w = 1e-10;
  const auto sched = dft_schedule(128).cycled(20000);
  RngStream rng = derive_stream(11, 0, "noise-cov");
  const Eigen::MatrixXcd r = sample_covariance(simulate(scn, sched, rng));
  for (int i = 0; i < r.rows(); ++i) {
    CHECK(r(i, i).real() == doctest::Approx(1e-10).epsilon(0.02));
    for (int j = 0; j < r.cols(); ++j) {
      if (i != j) CHECK(std::abs(r(i, j)) < 0.05 * 1e-10);
    }
  }
}

TEST_CASE("MUSIC recovers a noiseless single target to millidegrees") {
  Scenario scn = noiseless_defaults(Architecture::active);
  scn.targets = {Target{30.0, 10.0, 1.0}};
  const Eigen::MatrixXcd r = covariance_for(scn, 128);
  const auto res = music_estimate(r, scn.irs_sensors, 1);
  REQUIRE(res.angles_deg.size() == 1);
  CHECK(std::abs(res.angles_deg[0] - 30.0) < 1e-3);
  CHECK_FALSE(res.ambiguity_flag);
}

TEST_CASE("MUSIC separates two noiseless targets five degrees apart") {
  Scenario scn = noiseless_defaults(Architecture::active);
  scn.targets = {Target{60.0, 10.0, 1.0}, Target{65.0, 10.0, 1.0}};
  const Eigen::MatrixXcd r = covariance_for(scn, 128);
  const auto res = music_estimate(r, scn.irs_sensors, 2);
  REQUIRE(res.angles_deg.size() == 2);
  CHECK(std::abs(res.angles_deg[0] - 60.0) < 1e-2);
  CHECK(std::abs(res.angles_deg[1] - 65.0) < 1e-2);
  CHECK_FALSE(res.ambiguity_flag);
}

TEST_CASE("MUSIC flags a featureless covariance") {
  const auto geom = ArrayGeometry::ula(8, 0.09993);
  const auto res = music_estimate(Eigen::MatrixXcd::Identity(8, 8), geom, 1);
  CHECK(res.ambiguity_flag);
}

TEST_CASE("MUSIC is invariant to covariance scaling") {
  Scenario scn = Scenario::defaults(Architecture::active);
  scn.targets = {Target{22.0, 10.0, 1.0}};
  scn.budget.noise_power_w = 1e-14;
  const Eigen::MatrixXcd r = covariance_for(scn, 128);
  const auto a = music_estimate(r, scn.irs_sensors, 1);
  const auto b = music_estimate(3.0 * r, scn.irs_sensors, 1);
  CHECK(std::abs(a.angles_deg[0] - b.angles_deg[0]) < 1e-9);
}

TEST_CASE("MUSIC validates its arguments") {
  const auto geom = ArrayGeometry::ula(8, 0.09993);
  const Eigen::MatrixXcd r = Eigen::MatrixXcd::Identity(8, 8);
  CHECK_THROWS_AS(music_estimate(r, geom, 0), std::invalid_argument);
  CHECK_THROWS_AS(music_estimate(r, geom, 8), std::invalid_argument);
  CHECK_THROWS_AS(music_estimate(r, geom, 1, 0.0), std::invalid_argument);
}

TEST_CASE("ESPRIT recovers noiseless angles to microdegrees") {
  Scenario scn = noiseless_defaults(Architecture::active);
  scn.targets = {Target{30.0, 10.0, 1.0}};
  const Eigen::MatrixXcd r = covariance_for(scn, 128);
  const auto res = esprit_estimate(r, scn.irs_sensors, 1);
  REQUIRE(res.angles_deg.size() == 1);
  CHECK(std::abs(res.angles_deg[0] - 30.0) < 1e-6);

  scn.targets = {Target{60.0, 10.0, 1.0}, Target{65.0, 10.0, 1.0}};
  const auto res2 = esprit_estimate(covariance_for(scn, 128), scn.irs_sensors, 2);
  REQUIRE(res2.angles_deg.size() == 2);
  CHECK(std::abs(res2.angles_deg[0] - 60.0) < 1e-6);
  CHECK(std::abs(res2.angles_deg[1] - 65.0) < 1e-6);
}

TEST_CASE("ESPRIT is invariant to covariance scaling") {
  Scenario scn = Scenario::defaults(Architecture::semi_passive);
  scn.targets = {Target{-40.0, 10.0, 1.0}};
  scn.budget.noise_power_w = 1e-14;
  const Eigen::MatrixXcd r = covariance_for(scn, 128);
  const auto a = esprit_estimate(r, scn.irs_sensors, 1);
  const auto b = esprit_estimate(0.25 * r, scn.irs_sensors, 1);
  CHECK(std::abs(a.angles_deg[0] - b.angles_deg[0]) < 1e-9);
}

TEST_CASE("MLE recovers a noiseless semi-passive target") {
  Scenario scn = noiseless_defaults(Architecture::semi_passive);
  scn.targets = {Target{30.0, 10.0, 1.0}};
  const auto sched = dft_schedule(128);
  RngStream rng(1);
  const SnapshotSet snaps = simulate(scn, sched, rng);
  const auto res = mle_estimate(snaps, scn, 1);
  REQUIRE(res.angles_deg.size() == 1);
  CHECK(std::abs(res.angles_deg[0] - 30.0) < 1e-3);
  CHECK_FALSE(res.ambiguity_flag);
}

TEST_CASE("MLE rejects mismatched inputs") {
  Scenario scn = noiseless_defaults(Architecture::active);
  scn.targets = {Target{30.0, 10.0, 1.0}};
  const auto sched = dft_schedule(128);
  RngStream rng(1);
  const SnapshotSet snaps = simulate(scn, sched, rng);

  Scenario semi = scn;
  semi.architecture = Architecture::semi_passive;
  CHECK_THROWS_AS(mle_estimate(snaps, semi, 1), std::invalid_argument);

  const MleWorkspace ws(scn, sched, 1, 1.0);
  CHECK_THROWS_AS(mle_estimate(snaps, scn, 2, 1.0, &ws), std::invalid_argument);
  CHECK_THROWS_AS(MleWorkspace(scn, sched, 3, 1.0), std::invalid_argument);
}

TEST_CASE("passive MLE flags a static reflection as ambiguous") {
  Scenario scn = Scenario::defaults(Architecture::passive);
  scn.targets = {Target{30.0, 10.0, 1.0}};
  scn.budget.noise_power_w = 1e-14;
  const auto sched = constant_schedule(128, 64);
  RngStream rng(1);
  const SnapshotSet snaps = simulate(scn, sched, rng);
  const auto res = mle_estimate(snaps, scn, 1, 0.5);
  CHECK(res.ambiguity_flag);
}

TEST_CASE("passive MLE localizes under a time-varying schedule") {
  Scenario scn = Scenario::defaults(Architecture::passive);
  scn.targets = {Target{30.0, 5.0, 1.0}};
  scn.budget.noise_power_w = 1e-13;
  const auto sched = dft_schedule(128);
  RngStream rng = derive_stream(3, 0, "passive-mle");
  const SnapshotSet snaps = simulate(scn, sched, rng);
  const auto res = mle_estimate(snaps, scn, 1, 0.2);
  REQUIRE(res.angles_deg.size() == 1);
  CHECK(std::abs(res.angles_deg[0] - 30.0) < 0.5);
}

TEST_CASE("numeric CRLB matches the closed-form single-source bound") {
  // Mean model gain * a(theta) * s^T for a half-wavelength ULA. The bound
  // on theta with the complex gain profiled out has a textbook closed form.
  const double lambda = 0.1;
  const int m = 8;
  const auto geom = ArrayGeometry::ula(m, lambda);
  RngStream rng(41);
  Eigen::VectorXcd s(32);
  for (int t = 0; t < s.size(); ++t) s(t) = rng.cgaussian(1.0);
  const auto model = [&](double ang) {
    return Eigen::MatrixXcd(plane_wave_steering(geom, ang) * s.transpose());
  };
  const cd gain(2.0, 1.0);
  const double noise = 0.01;
  const double theta = 25.0;

  double sk = 0.0, sk2 = 0.0;
  for (int k = 0; k < m; ++k) {
    sk += k;
    sk2 += double(k) * k;
  }
  const double c = std::numbers::pi * std::cos(deg2rad(theta)) * std::numbers::pi / 180.0;
  const double proj = c * c * (sk2 - sk * sk / m);
  const double closed =
      noise / (2.0 * std::norm(gain) * s.squaredNorm() * proj);

  const double numeric = crlb_numeric_model(model, theta, gain, noise);
  CHECK(numeric == doctest::Approx(closed).epsilon(1e-4));

  // Doubling the transmit power halves the bound.
  const double half = crlb_numeric_model(model, theta, gain * std::sqrt(2.0), noise);
  CHECK(half == doctest::Approx(numeric / 2.0).epsilon(1e-9));
}

TEST_CASE("CRLB orders the architectures and scales with noise") {
  Scenario scn = Scenario::defaults(Architecture::active);
  scn.targets = {Target{30.0, 10.0, 1.0}};
  const auto sched = dft_schedule(128);
  const double active = crlb_numeric(scn, sched, 0);
  CHECK(active > 0.0);

  Scenario semi = scn;
  semi.architecture = Architecture::semi_passive;
  CHECK(crlb_numeric(semi, sched, 0) > active);

  Scenario loud = scn;
  loud.budget.noise_power_w /= 4.0;
  CHECK(crlb_numeric(loud, sched, 0) == doctest::Approx(active / 4.0).epsilon(1e-6));

  CHECK_THROWS_AS(crlb_numeric(scn, sched, 1), std::invalid_argument);
}

TEST_CASE("passive CRLB is singular for a static reflection") {
  Scenario scn = Scenario::defaults(Architecture::passive);
  scn.targets = {Target{30.0, 10.0, 1.0}};
  const auto sched = constant_schedule(128, 64);
  CHECK_THROWS_AS(crlb_numeric(scn, sched, 0), UnidentifiableError);
}

TEST_CASE("matched errors use the best pairing") {
  // Greedy by index would pair 64 with 60; the best pairing is crosswise.
  const auto e = matched_errors({64.0, 61.0}, {60.0, 65.0});
  REQUIRE(e.size() == 2);
  CHECK(e[0] == doctest::Approx(-1.0));
  CHECK(e[1] == doctest::Approx(1.0));
  CHECK_THROWS_AS(matched_errors({1.0}, {1.0, 2.0}), std::invalid_argument);
}
