#pragma once

#include "irssense/geometry.hpp"

namespace irssense {

// Point target, angle relative to IRS broadside, distance from the IRS
// reference element. RCS uses the power convention (m^2).
struct Target {
  double angle_deg = 0.0;
  double distance_m = 0.0;
  double rcs_m2 = 1.0;
  void validate() const;
};

struct LinkBudget {
  // Transmit power is EIRP-like: elements are unit-gain, so antenna and
  // processing gains of a practical radar front end are folded in here.
  double tx_power_w = 1.0e7;
  double noise_power_w = 1e-12;  // per receive element, complex baseband
  void validate() const;
};

// Free-space one-way amplitude lambda/(4*pi*d).
double one_way_amplitude(double distance_m, double wavelength_m);

// Target reflectivity amplitude sqrt(4*pi*rcs)/lambda, chosen so
// |one_way(d1) * rho * one_way(d2)|^2 equals the bistatic radar equation
// lambda^2*sigma/((4*pi)^3*d1^2*d2^2) with unit antenna gains.
double reflectivity_amplitude(double rcs_m2, double wavelength_m);

// One-way amplitude with the outgoing propagation phase e^{-j*2*pi*d/lambda}.
cd segment_response(double distance_m, double wavelength_m);

// LoS channel matrix (rx.num_elements x tx.num_elements). Far field: rank-1
// outer product of arrival/departure steering vectors scaled by the
// reference-to-reference segment response. When the separation is below
// near_field_factor times the larger aperture, per-element spherical
// responses are used instead.
Eigen::MatrixXcd los_matrix(const ArrayGeometry& rx, const ArrayGeometry& tx,
                            double near_field_factor = 10.0);

}  // namespace irssense
