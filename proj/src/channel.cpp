#include "irssense/channel.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace irssense {

namespace {
constexpr double kPi = std::numbers::pi;
}

void Target::validate() const {
  if (!(distance_m > 0.0)) throw std::invalid_argument("target distance must be > 0");
  if (!(rcs_m2 > 0.0)) throw std::invalid_argument("target rcs must be > 0");
  if (!(std::abs(angle_deg) < 90.0)) {
    throw std::invalid_argument("target angle must satisfy |angle| < 90 deg");
  }
}

void LinkBudget::validate() const {
  if (!(tx_power_w > 0.0)) throw std::invalid_argument("tx_power_w must be > 0");
  if (!(noise_power_w > 0.0)) throw std::invalid_argument("noise_power_w must be > 0");
}

double one_way_amplitude(double distance_m, double wavelength_m) {
  if (!(distance_m > 0.0)) throw std::invalid_argument("distance must be > 0");
  if (!(wavelength_m > 0.0)) throw std::invalid_argument("wavelength must be > 0");
  return wavelength_m / (4.0 * kPi * distance_m);
}

double reflectivity_amplitude(double rcs_m2, double wavelength_m) {
  if (!(rcs_m2 > 0.0)) throw std::invalid_argument("rcs must be > 0");
  if (!(wavelength_m > 0.0)) throw std::invalid_argument("wavelength must be > 0");
  return std::sqrt(4.0 * kPi * rcs_m2) / wavelength_m;
}

cd segment_response(double distance_m, double wavelength_m) {
  const double amp = one_way_amplitude(distance_m, wavelength_m);
  return std::polar(amp, -2.0 * kPi * distance_m / wavelength_m);
}

Eigen::MatrixXcd los_matrix(const ArrayGeometry& rx, const ArrayGeometry& tx,
                            double near_field_factor) {
  rx.validate();
  tx.validate();
  const Vec3 sep = tx.reference_position - rx.reference_position;
  const double d = sep.norm();
  if (!(d > 0.0)) {
    throw std::invalid_argument("rx and tx reference positions coincide");
  }
  const double aperture = std::max(rx.aperture_m(), tx.aperture_m());
  if (d < near_field_factor * aperture) {
    // Near field: exact per-element-pair spherical responses.
    Eigen::MatrixXcd h(rx.num_elements, tx.num_elements);
    for (int n = 0; n < tx.num_elements; ++n) {
      h.col(n) = spherical_wave_vector(rx, tx.element_position(n));
    }
    return h;
  }
  const cd a = segment_response(d, rx.wavelength_m);
  const Eigen::VectorXcd brx = plane_wave_steering(rx, bearing_deg(rx, tx.reference_position));
  const Eigen::VectorXcd atx = plane_wave_steering(tx, bearing_deg(tx, rx.reference_position));
  return a * brx * atx.transpose();
}

}  // namespace irssense
