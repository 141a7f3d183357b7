#pragma once

#include "irssense/geometry.hpp"

#include <string>
#include <utility>
#include <vector>

namespace irssense {

// Time sequence of unit-modulus reflection coefficients, snapshot-major:
// row t holds the codeword applied during snapshot t.
struct ReflectionSchedule {
  Eigen::MatrixXcd coefficients;  // T x N
  std::string label;

  int snapshots() const { return static_cast<int>(coefficients.rows()); }
  int elements() const { return static_cast<int>(coefficients.cols()); }
  // Throws unless every entry is unit-modulus to 1e-12 and T >= 1.
  void validate() const;
  // Repeats rows cyclically until the schedule covers t snapshots.
  ReflectionSchedule cycled(int t) const;
};

// N-snapshot schedule whose rows are the columns of the N-point DFT matrix,
// entry (t, n) = exp(-j*2*pi*t*n/N). The time-averaged beampattern is
// angle-independent.
ReflectionSchedule dft_schedule(int n_elements);

// Phase-aligning codeword: entry n = exp(-j*(arg(incident_n) + arg(a_n))),
// maximizing |a(theta)^T diag(phi) incident| = sum_n |incident_n| over all
// unit-modulus phi. Rejects zero incident entries.
Eigen::VectorXcd directional_codeword(const Eigen::VectorXcd& incident,
                                      double target_angle_deg,
                                      const ArrayGeometry& geom);

// Flat wide beam over [angle_lo, angle_hi]: contiguous subarrays each steer
// to the center of one subregion. n_subarrays must divide the element count.
Eigen::VectorXcd wide_beam_codeword(double angle_lo_deg, double angle_hi_deg,
                                    int n_subarrays, const ArrayGeometry& geom,
                                    const Eigen::VectorXcd& incident);

// Two-stage wide-then-narrow scan plan over (-60, 60) degrees by default.
class HierarchicalPlan {
 public:
  HierarchicalPlan(int n_sectors, int fine_per_sector, const ArrayGeometry& geom,
                   const Eigen::VectorXcd& incident, double span_lo_deg = -60.0,
                   double span_hi_deg = 60.0);

  const ReflectionSchedule& stage1() const { return stage1_; }
  int n_sectors() const { return static_cast<int>(sectors_.size()); }
  int fine_per_sector() const { return fine_per_sector_; }
  std::pair<double, double> sector(int i) const { return sectors_.at(i); }

  // Fine directional codewords gridding the given sector.
  ReflectionSchedule stage2(int sector_index) const;
  std::vector<double> fine_angles(int sector_index) const;

 private:
  ReflectionSchedule stage1_;
  std::vector<std::pair<double, double>> sectors_;
  int fine_per_sector_;
  ArrayGeometry geom_;
  Eigen::VectorXcd incident_;
};

}  // namespace irssense
