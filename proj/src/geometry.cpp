#include "irssense/geometry.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace irssense {

namespace {
constexpr double kPi = std::numbers::pi;
}

double deg2rad(double deg) { return deg * kPi / 180.0; }
double rad2deg(double rad) { return rad * 180.0 / kPi; }

ArrayGeometry ArrayGeometry::ula(int num_elements, double wavelength_m,
                                 const Vec3& reference_position,
                                 const Vec3& orientation) {
  ArrayGeometry g;
  g.num_elements = num_elements;
  g.wavelength_m = wavelength_m;
  g.spacing_m = wavelength_m / 2.0;
  g.reference_position = reference_position;
  g.orientation = orientation.normalized();
  g.validate();
  return g;
}

Vec3 ArrayGeometry::element_position(int k) const {
  return reference_position + static_cast<double>(k) * spacing_m * orientation;
}

void ArrayGeometry::validate() const {
  if (num_elements < 1) throw std::invalid_argument("num_elements must be >= 1");
  if (!(spacing_m > 0.0)) throw std::invalid_argument("spacing must be > 0");
  if (!(wavelength_m > 0.0)) throw std::invalid_argument("wavelength must be > 0");
  if (std::abs(orientation.norm() - 1.0) > 1e-9) {
    throw std::invalid_argument("orientation must be a unit vector");
  }
}

double bearing_deg(const ArrayGeometry& geom, const Vec3& point) {
  const Vec3 d = point - geom.reference_position;
  const double r = d.norm();
  if (!(r > 0.0)) throw std::invalid_argument("point coincides with array reference");
  const double s = d.dot(geom.orientation) / r;
  return rad2deg(std::asin(std::clamp(s, -1.0, 1.0)));
}

Eigen::VectorXcd plane_wave_steering(const ArrayGeometry& geom, double angle_deg) {
  geom.validate();
  if (!(std::abs(angle_deg) < 90.0)) {
    throw std::invalid_argument("steering angle must satisfy |angle| < 90 deg");
  }
  const double phase_step =
      2.0 * kPi * (geom.spacing_m / geom.wavelength_m) * std::sin(deg2rad(angle_deg));
  Eigen::VectorXcd a(geom.num_elements);
  for (int k = 0; k < geom.num_elements; ++k) {
    a(k) = std::polar(1.0, phase_step * static_cast<double>(k));
  }
  return a;
}

Eigen::VectorXcd spherical_wave_vector(const ArrayGeometry& geom,
                                       const Vec3& source_position) {
  geom.validate();
  Eigen::VectorXcd v(geom.num_elements);
  for (int k = 0; k < geom.num_elements; ++k) {
    const double d = (source_position - geom.element_position(k)).norm();
    if (!(d > 0.0)) {
      throw std::invalid_argument("source coincides with an array element");
    }
    const double amp = geom.wavelength_m / (4.0 * kPi * d);
    v(k) = std::polar(amp, -2.0 * kPi * d / geom.wavelength_m);
  }
  return v;
}

}  // namespace irssense
