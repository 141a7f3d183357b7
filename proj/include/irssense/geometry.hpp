#pragma once

#include <Eigen/Dense>
#include <complex>

namespace irssense {

using cd = std::complex<double>;
using Vec3 = Eigen::Vector3d;

inline constexpr double kSpeedOfLight = 299792458.0;
inline constexpr double kDefaultCarrierHz = 3.0e9;

double deg2rad(double deg);
double rad2deg(double rad);

// Uniform linear array in the horizontal plane. Element k sits at
// reference_position + k * spacing * orientation; element 0 is the phase
// reference. Angles are measured from array broadside.
struct ArrayGeometry {
  int num_elements = 1;
  double spacing_m = 0.0;
  Vec3 reference_position = Vec3::Zero();
  Vec3 orientation = Vec3::UnitX();
  double wavelength_m = 0.0;

  // Half-wavelength ULA along +x at the given reference point.
  static ArrayGeometry ula(int num_elements, double wavelength_m,
                           const Vec3& reference_position = Vec3::Zero(),
                           const Vec3& orientation = Vec3::UnitX());

  Vec3 element_position(int k) const;
  double aperture_m() const { return (num_elements - 1) * spacing_m; }
  void validate() const;  // throws std::invalid_argument
};

// Broadside-referenced arrival/departure angle of a point seen from the
// array reference, in degrees.
double bearing_deg(const ArrayGeometry& geom, const Vec3& point);

// Plane-wave steering vector: entry k = exp(+j*2*pi*(d/lambda)*k*sin(angle)).
// Rejects |angle_deg| >= 90.
Eigen::VectorXcd plane_wave_steering(const ArrayGeometry& geom, double angle_deg);

// Spherical (near-field) response from a point source: entry k =
// (lambda/(4*pi*d_k)) * exp(-j*2*pi*d_k/lambda). Rejects sources coincident
// with an element.
Eigen::VectorXcd spherical_wave_vector(const ArrayGeometry& geom,
                                       const Vec3& source_position);

}  // namespace irssense
