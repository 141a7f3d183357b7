#include <doctest.h>

#include "irssense/geometry.hpp"

#include <numbers>

using namespace irssense;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_CASE("ula places elements along the axis with element 0 at the reference") {
  const auto g = ArrayGeometry::ula(4, 0.1, Vec3(1.0, 2.0, 0.0));
  CHECK(g.spacing_m == doctest::Approx(0.05));
  CHECK(g.aperture_m() == doctest::Approx(0.15));
  CHECK((g.element_position(0) - Vec3(1.0, 2.0, 0.0)).norm() == doctest::Approx(0.0));
  CHECK((g.element_position(3) - Vec3(1.15, 2.0, 0.0)).norm() == doctest::Approx(0.0));
}

TEST_CASE("geometry validation rejects bad fields") {
  auto g = ArrayGeometry::ula(4, 0.1);
  g.num_elements = 0;
  CHECK_THROWS_AS(g.validate(), std::invalid_argument);
  g = ArrayGeometry::ula(4, 0.1);
  g.spacing_m = 0.0;
  CHECK_THROWS_AS(g.validate(), std::invalid_argument);
  g = ArrayGeometry::ula(4, 0.1);
  g.wavelength_m = -1.0;
  CHECK_THROWS_AS(g.validate(), std::invalid_argument);
}

TEST_CASE("broadside steering is all ones") {
  const auto g = ArrayGeometry::ula(4, 0.1);
  const auto a = plane_wave_steering(g, 0.0);
  REQUIRE(a.size() == 4);
  for (int k = 0; k < 4; ++k) {
    CHECK(a(k).real() == doctest::Approx(1.0));
    CHECK(a(k).imag() == doctest::Approx(0.0));
  }
}

TEST_CASE("half-wavelength pair at 30 degrees gives a quarter-turn phase") {
  const auto g = ArrayGeometry::ula(2, 0.1);
  const auto a = plane_wave_steering(g, 30.0);
  CHECK(a(0) == cd(1.0, 0.0));
  // 2*pi*(1/2)*sin(30 deg) = pi/2
  CHECK(a(1).real() == doctest::Approx(0.0).scale(1.0));
  CHECK(a(1).imag() == doctest::Approx(1.0));
}

TEST_CASE("steering vectors on the DFT grid are orthogonal") {
  const auto g = ArrayGeometry::ula(8, 0.1);
  const double s1 = 0.1;
  const double s2 = s1 + 2.0 / 8;  // sin-space offset of one DFT bin
  const auto a1 = plane_wave_steering(g, rad2deg(std::asin(s1)));
  const auto a2 = plane_wave_steering(g, rad2deg(std::asin(s2)));
  CHECK(std::abs(a1.dot(a2)) < 1e-10);
}

TEST_CASE("steering rejects endfire angles") {
  const auto g = ArrayGeometry::ula(4, 0.1);
  CHECK_THROWS_AS(plane_wave_steering(g, 90.0), std::invalid_argument);
  CHECK_THROWS_AS(plane_wave_steering(g, -95.0), std::invalid_argument);
}

TEST_CASE("steering entries are unit modulus and conjugate-mirror") {
  const auto g = ArrayGeometry::ula(16, 0.09993);
  for (double ang : {-71.3, -10.0, 3.7, 45.0, 89.0}) {
    const auto a = plane_wave_steering(g, ang);
    const auto am = plane_wave_steering(g, -ang);
    for (int k = 0; k < 16; ++k) {
      CHECK(std::abs(std::abs(a(k)) - 1.0) < 1e-12);
      CHECK(std::abs(std::conj(a(k)) - am(k)) < 1e-12);
    }
  }
}

TEST_CASE("spherical wave magnitude at one meter") {
  const auto g = ArrayGeometry::ula(1, 0.1);
  const auto v = spherical_wave_vector(g, Vec3(0.0, 1.0, 0.0));
  CHECK(std::abs(v(0)) == doctest::Approx(0.1 / (4 * kPi)));
  CHECK(std::abs(v(0)) == doctest::Approx(7.9577e-3).epsilon(1e-4));
}

TEST_CASE("spherical wave is symmetric about the array midpoint") {
  const auto g = ArrayGeometry::ula(6, 0.1);
  const Vec3 mid = 0.5 * (g.element_position(0) + g.element_position(5));
  const auto v = spherical_wave_vector(g, mid + Vec3(0.0, 2.0, 0.0));
  for (int k = 0; k < 3; ++k) CHECK(std::abs(v(k) - v(5 - k)) < 1e-15);
}

TEST_CASE("spherical wave rejects a source on an element") {
  const auto g = ArrayGeometry::ula(4, 0.1);
  CHECK_THROWS_AS(spherical_wave_vector(g, g.element_position(2)), std::invalid_argument);
}

TEST_CASE("spherical wave converges to the plane wave in the far field") {
  const auto g = ArrayGeometry::ula(8, 0.1);
  const double ang = 25.0;
  const double dist = 1e4 * g.aperture_m();
  const Vec3 src(dist * std::sin(deg2rad(ang)), dist * std::cos(deg2rad(ang)), 0.0);
  const auto v = spherical_wave_vector(g, src);
  const auto a = plane_wave_steering(g, ang);
  // Common reference-element factor carries the bulk phase and amplitude.
  const cd ref = v(0);
  for (int k = 0; k < 8; ++k) {
    CHECK(std::abs(v(k) / ref - a(k)) < 1e-3);
  }
}

TEST_CASE("bearing recovers the placement angle") {
  const auto g = ArrayGeometry::ula(8, 0.1);
  for (double ang : {-60.0, 0.0, 30.0, 65.0}) {
    const Vec3 p(10.0 * std::sin(deg2rad(ang)), 10.0 * std::cos(deg2rad(ang)), 0.0);
    CHECK(bearing_deg(g, p) == doctest::Approx(ang).epsilon(1e-12));
  }
}
