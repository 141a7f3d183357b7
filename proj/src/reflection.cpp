#include "irssense/reflection.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace irssense {

namespace {
constexpr double kPi = std::numbers::pi;
}

void ReflectionSchedule::validate() const {
  if (snapshots() < 1) throw std::invalid_argument("schedule needs at least one snapshot");
  for (int t = 0; t < snapshots(); ++t) {
    for (int n = 0; n < elements(); ++n) {
      if (std::abs(std::abs(coefficients(t, n)) - 1.0) > 1e-12) {
        throw std::invalid_argument("reflection coefficients must be unit-modulus");
      }
    }
  }
}

ReflectionSchedule ReflectionSchedule::cycled(int t) const {
  if (t < 1) throw std::invalid_argument("snapshot count must be >= 1");
  ReflectionSchedule out;
  out.label = label;
  out.coefficients.resize(t, elements());
  for (int i = 0; i < t; ++i) {
    out.coefficients.row(i) = coefficients.row(i % snapshots());
  }
  return out;
}

ReflectionSchedule dft_schedule(int n_elements) {
  if (n_elements < 1) throw std::invalid_argument("n_elements must be >= 1");
  ReflectionSchedule s;
  s.label = "dft";
  s.coefficients.resize(n_elements, n_elements);
  const double w = -2.0 * kPi / static_cast<double>(n_elements);
  for (int t = 0; t < n_elements; ++t) {
    for (int n = 0; n < n_elements; ++n) {
      s.coefficients(t, n) = std::polar(1.0, w * static_cast<double>(t) * n);
    }
  }
  return s;
}

Eigen::VectorXcd directional_codeword(const Eigen::VectorXcd& incident,
                                      double target_angle_deg,
                                      const ArrayGeometry& geom) {
  if (incident.size() != geom.num_elements) {
    throw std::invalid_argument("incident length must match element count");
  }
  const Eigen::VectorXcd a = plane_wave_steering(geom, target_angle_deg);
  Eigen::VectorXcd phi(geom.num_elements);
  for (int n = 0; n < geom.num_elements; ++n) {
    if (std::abs(incident(n)) == 0.0) {
      throw std::invalid_argument("incident entry has zero magnitude, phase undefined");
    }
    phi(n) = std::polar(1.0, -(std::arg(incident(n)) + std::arg(a(n))));
  }
  return phi;
}

Eigen::VectorXcd wide_beam_codeword(double angle_lo_deg, double angle_hi_deg,
                                    int n_subarrays, const ArrayGeometry& geom,
                                    const Eigen::VectorXcd& incident) {
  if (!(angle_lo_deg < angle_hi_deg)) throw std::invalid_argument("empty angular region");
  if (n_subarrays < 1 || geom.num_elements % n_subarrays != 0) {
    throw std::invalid_argument("n_subarrays must divide the element count");
  }
  if (incident.size() != geom.num_elements) {
    throw std::invalid_argument("incident length must match element count");
  }
  const int block = geom.num_elements / n_subarrays;
  const double width = (angle_hi_deg - angle_lo_deg) / n_subarrays;
  Eigen::VectorXcd phi(geom.num_elements);
  for (int i = 0; i < n_subarrays; ++i) {
    const double center = angle_lo_deg + (i + 0.5) * width;
    const Eigen::VectorXcd a = plane_wave_steering(geom, center);
    for (int k = 0; k < block; ++k) {
      const int n = i * block + k;
      if (std::abs(incident(n)) == 0.0) {
        throw std::invalid_argument("incident entry has zero magnitude, phase undefined");
      }
      phi(n) = std::polar(1.0, -(std::arg(incident(n)) + std::arg(a(n))));
    }
  }
  return phi;
}

HierarchicalPlan::HierarchicalPlan(int n_sectors, int fine_per_sector,
                                   const ArrayGeometry& geom,
                                   const Eigen::VectorXcd& incident,
                                   double span_lo_deg, double span_hi_deg)
    : fine_per_sector_(fine_per_sector), geom_(geom), incident_(incident) {
  if (n_sectors < 1) throw std::invalid_argument("n_sectors must be >= 1");
  if (fine_per_sector < 1) throw std::invalid_argument("fine_per_sector must be >= 1");
  if (!(span_lo_deg < span_hi_deg)) throw std::invalid_argument("empty scan span");
  const double width = (span_hi_deg - span_lo_deg) / n_sectors;
  int sub = std::min(8, geom.num_elements);
  while (geom.num_elements % sub != 0) --sub;
  stage1_.label = "hierarchical-stage1";
  stage1_.coefficients.resize(n_sectors, geom.num_elements);
  for (int i = 0; i < n_sectors; ++i) {
    const double lo = span_lo_deg + i * width;
    sectors_.emplace_back(lo, lo + width);
    stage1_.coefficients.row(i) =
        wide_beam_codeword(lo, lo + width, sub, geom, incident).transpose();
  }
}

std::vector<double> HierarchicalPlan::fine_angles(int sector_index) const {
  const auto [lo, hi] = sector(sector_index);
  std::vector<double> angles(fine_per_sector_);
  const double step = (hi - lo) / fine_per_sector_;
  for (int i = 0; i < fine_per_sector_; ++i) {
    angles[i] = lo + (i + 0.5) * step;
  }
  return angles;
}

ReflectionSchedule HierarchicalPlan::stage2(int sector_index) const {
  ReflectionSchedule s;
  s.label = "hierarchical-stage2";
  s.coefficients.resize(fine_per_sector_, geom_.num_elements);
  const auto angles = fine_angles(sector_index);
  for (int i = 0; i < fine_per_sector_; ++i) {
    s.coefficients.row(i) = directional_codeword(incident_, angles[i], geom_).transpose();
  }
  return s;
}

}  // namespace irssense
