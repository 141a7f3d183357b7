#pragma once

#include "irssense/simulate.hpp"

#include <functional>
#include <stdexcept>

namespace irssense {

// Raised when the Fisher information matrix is numerically singular, e.g.
// for passive sensing with a single LoS BS-IRS path and a static reflection.
class UnidentifiableError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct EstimationResult {
  std::vector<double> angles_deg;  // sorted ascending, size = requested K
  std::vector<std::pair<double, double>> spectrum;  // optional (angle, value)
  bool ambiguity_flag = false;
  std::vector<double> eigenvalues;  // diagnostics, descending
  double ambiguity_span_deg = 5.0;
};

// (1/T) sum_t y_t y_t^H
Eigen::MatrixXcd sample_covariance(const SnapshotSet& snapshots);

// MUSIC pseudo-spectrum grid search with golden-section peak refinement to
// 1e-4 degrees. Peaks must be separated by at least 1 degree; if fewer than
// k_sources peaks are found the result is filled in grid-argmax order and
// the ambiguity flag is set.
EstimationResult music_estimate(const Eigen::MatrixXcd& r, const ArrayGeometry& geom,
                                int k_sources, double grid_step_deg = 0.1);

// LS-ESPRIT on the maximum-overlap subarrays of a ULA. Grid-free.
EstimationResult esprit_estimate(const Eigen::MatrixXcd& r, const ArrayGeometry& geom,
                                 int k_sources);

// Grid-angle signatures, norms, and cross-Gram for the concentrated MLE.
// The heavy part is data-independent, so Monte Carlo loops should build one
// workspace and reuse it across trials.
class MleWorkspace {
 public:
  MleWorkspace(const Scenario& scn, const ReflectionSchedule& sched, int k_sources,
               double grid_step_deg);

  int k_sources() const { return k_sources_; }
  double step() const { return step_; }
  double distance_m() const { return distance_m_; }
  const std::vector<double>& grid() const { return grid_; }
  const Eigen::VectorXcd& signature(std::size_t i) const { return sig_[i]; }
  double norm_sq(std::size_t i) const { return norm_sq_[i]; }
  cd gram(std::size_t i, std::size_t j) const { return gram_(i, j); }

 private:
  int k_sources_;
  double step_ = 0.0;
  double distance_m_ = 0.0;
  std::vector<double> grid_;
  std::vector<Eigen::VectorXcd> sig_;
  std::vector<double> norm_sq_;
  Eigen::MatrixXcd gram_;
};

// Concentrated maximum likelihood: complex gains are profiled out per
// candidate angle tuple; K = 1 uses an exhaustive grid, K = 2 a coarse 2-D
// grid, both followed by local refinement. The only estimator valid for
// passive sensing.
EstimationResult mle_estimate(const SnapshotSet& snapshots, const Scenario& scn,
                              int k_sources, double grid_step_deg = 0.1,
                              const MleWorkspace* ws = nullptr);

// Numeric CRLB (deg^2) on the angle of one target, parameters
// (theta, Re alpha, Im alpha), central finite differences. Throws
// UnidentifiableError when the Fisher information is singular.
double crlb_numeric(const Scenario& scn, const ReflectionSchedule& sched,
                    int target_index);

// Same machinery for an arbitrary mean model theta_deg -> M x T matrix;
// used for sanity configurations with a closed-form bound.
double crlb_numeric_model(const std::function<Eigen::MatrixXcd(double)>& model,
                          double theta_deg, cd gain, double noise_power_w);

// RMSE pairing: estimates matched to truth by the permutation minimizing
// total absolute angle error; returns the per-target signed errors.
std::vector<double> matched_errors(const std::vector<double>& estimates,
                                   const std::vector<double>& truth);

}  // namespace irssense
