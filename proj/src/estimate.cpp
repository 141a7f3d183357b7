#include "irssense/estimate.hpp"

#include "irssense/kernels.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <numeric>

namespace irssense {

namespace {

constexpr double kGoldenRatio = 0.6180339887498949;
// MUSIC spectrum values within 3 dB of the peak count as near-maximal when
// deciding the ambiguity flag; the MLE uses the residual rule below.
constexpr double kSpectrumNearMax = 0.5;
constexpr double kResidualNearMax = 1.001;

// Absolute near-set margin in units of per-element noise power. Residual
// differences between tuples that only fit noise stay below a few noise
// quanta (chi-square with a handful of degrees of freedom), so a pure-noise
// surface always yields a wide near-set; 13.28 is the 99th percentile of
// chi-square with 4 degrees of freedom.
constexpr double kResidualChi2Margin = 13.28;

double golden_section(double lo, double hi, double tol,
                      const std::function<double(double)>& fn_min) {
  double a = lo, b = hi;
  double x1 = b - kGoldenRatio * (b - a);
  double x2 = a + kGoldenRatio * (b - a);
  double f1 = fn_min(x1), f2 = fn_min(x2);
  while (b - a > tol) {
    if (f1 < f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - kGoldenRatio * (b - a);
      f1 = fn_min(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + kGoldenRatio * (b - a);
      f2 = fn_min(x2);
    }
  }
  return 0.5 * (a + b);
}

}  // namespace

Eigen::MatrixXcd sample_covariance(const SnapshotSet& snapshots) {
  const auto& y = snapshots.samples;
  if (y.cols() < 1) throw std::invalid_argument("need at least one snapshot");
  Eigen::MatrixXcd r = y * y.adjoint() / static_cast<double>(y.cols());
  return (r + r.adjoint()) / 2.0;
}

EstimationResult music_estimate(const Eigen::MatrixXcd& r, const ArrayGeometry& geom,
                                int k_sources, double grid_step_deg) {
  const int m = static_cast<int>(r.rows());
  if (k_sources < 1 || k_sources >= m) {
    throw std::invalid_argument("need 1 <= k_sources < number of sensors");
  }
  if (!(grid_step_deg > 0.0)) throw std::invalid_argument("grid step must be > 0");

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(r);
  if (eig.info() != Eigen::Success) throw std::runtime_error("eigendecomposition failed");
  const Eigen::MatrixXcd noise_basis = eig.eigenvectors().leftCols(m - k_sources);

  const auto spectrum_at = [&](double angle) {
    const Eigen::VectorXcd a = plane_wave_steering(geom, angle);
    return 1.0 / (noise_basis.adjoint() * a).squaredNorm();
  };

  EstimationResult res;
  for (int i = m - 1; i >= 0; --i) res.eigenvalues.push_back(eig.eigenvalues()(i));

  std::vector<double> grid, value;
  for (double ang = -90.0 + grid_step_deg; ang < 90.0 - grid_step_deg / 2;
       ang += grid_step_deg) {
    grid.push_back(ang);
    value.push_back(spectrum_at(ang));
  }
  res.spectrum.reserve(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) res.spectrum.emplace_back(grid[i], value[i]);

  // Local maxima, strongest first, separated by at least one degree.
  std::vector<std::size_t> order;
  for (std::size_t i = 1; i + 1 < grid.size(); ++i) {
    if (value[i] > value[i - 1] && value[i] >= value[i + 1]) order.push_back(i);
  }
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return value[a] > value[b]; });
  std::vector<double> peaks;
  for (std::size_t idx : order) {
    if (static_cast<int>(peaks.size()) >= k_sources) break;
    const bool separated = std::all_of(peaks.begin(), peaks.end(), [&](double p) {
      return std::abs(p - grid[idx]) >= 1.0;
    });
    if (separated) peaks.push_back(grid[idx]);
  }

  if (static_cast<int>(peaks.size()) < k_sources) {
    res.ambiguity_flag = true;
    // Fill with grid argmax order.
    std::vector<std::size_t> all(grid.size());
    std::iota(all.begin(), all.end(), std::size_t{0});
    std::sort(all.begin(), all.end(),
              [&](std::size_t a, std::size_t b) { return value[a] > value[b]; });
    for (std::size_t idx : all) {
      if (static_cast<int>(peaks.size()) >= k_sources) break;
      if (std::none_of(peaks.begin(), peaks.end(),
                       [&](double p) { return std::abs(p - grid[idx]) < 1e-9; })) {
        peaks.push_back(grid[idx]);
      }
    }
  }

  for (double p : peaks) {
    const double lo = std::max(p - grid_step_deg, -90.0 + 1e-6);
    const double hi = std::min(p + grid_step_deg, 90.0 - 1e-6);
    res.angles_deg.push_back(
        golden_section(lo, hi, 1e-4, [&](double x) { return -spectrum_at(x); }));
  }
  std::sort(res.angles_deg.begin(), res.angles_deg.end());

  const double smax = *std::max_element(value.begin(), value.end());
  double lo_near = 90.0, hi_near = -90.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (value[i] >= kSpectrumNearMax * smax) {
      lo_near = std::min(lo_near, grid[i]);
      hi_near = std::max(hi_near, grid[i]);
    }
  }
  if (hi_near - lo_near > res.ambiguity_span_deg) res.ambiguity_flag = true;
  return res;
}

EstimationResult esprit_estimate(const Eigen::MatrixXcd& r, const ArrayGeometry& geom,
                                 int k_sources) {
  const int m = static_cast<int>(r.rows());
  if (k_sources < 1 || m < k_sources + 1) {
    throw std::invalid_argument("ESPRIT needs at least k_sources + 1 sensors");
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(r);
  if (eig.info() != Eigen::Success) throw std::runtime_error("eigendecomposition failed");
  const Eigen::MatrixXcd es = eig.eigenvectors().rightCols(k_sources);

  const Eigen::MatrixXcd top = es.topRows(m - 1);
  const Eigen::MatrixXcd bot = es.bottomRows(m - 1);
  const Eigen::MatrixXcd psi = top.colPivHouseholderQr().solve(bot);

  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> psi_eig(psi);
  if (psi_eig.info() != Eigen::Success) throw std::runtime_error("eigendecomposition failed");

  EstimationResult res;
  for (int i = m - 1; i >= 0; --i) res.eigenvalues.push_back(eig.eigenvalues()(i));
  const double scale = geom.wavelength_m / (2.0 * std::numbers::pi * geom.spacing_m);
  for (int i = 0; i < k_sources; ++i) {
    const double s = std::arg(psi_eig.eigenvalues()(i)) * scale;
    if (std::abs(s) > 1.0) {
      // Phase wraps outside the visible region: out-of-range estimate.
      res.ambiguity_flag = true;
      res.angles_deg.push_back(s > 0 ? 90.0 : -90.0);
    } else {
      res.angles_deg.push_back(rad2deg(std::asin(s)));
    }
  }
  std::sort(res.angles_deg.begin(), res.angles_deg.end());
  return res;
}

// ---------------------------------------------------------------------------

MleWorkspace::MleWorkspace(const Scenario& scn, const ReflectionSchedule& sched,
                           int k_sources, double grid_step_deg)
    : k_sources_(k_sources) {
  if (scn.targets.empty()) {
    throw std::invalid_argument("MLE needs a scenario target distance");
  }
  if (k_sources < 1 || k_sources > 2) {
    throw std::invalid_argument("MLE supports 1 or 2 sources");
  }
  distance_m_ = scn.targets.front().distance_m;
  // Exhaustive grid for K = 1; a coarse grid for the 2-D search.
  step_ = k_sources == 1 ? grid_step_deg : std::max(grid_step_deg, 1.0);
  for (double ang = -89.0; ang <= 89.0 + 1e-9; ang += step_) grid_.push_back(ang);
  const std::size_t g = grid_.size();
  sig_.resize(g);
  norm_sq_.resize(g);
  for (std::size_t i = 0; i < g; ++i) {
    Eigen::MatrixXcd s = target_signature(scn, sched, grid_[i], distance_m_);
    sig_[i] = Eigen::VectorXcd(Eigen::Map<Eigen::VectorXcd>(s.data(), s.size()));
    norm_sq_[i] = kern::sumsq(sig_[i].data(), sig_[i].size());
  }
  if (k_sources == 2) {
    gram_.resize(g, g);
    for (std::size_t i = 0; i < g; ++i) {
      for (std::size_t j = i; j < g; ++j) {
        gram_(i, j) = kern::cdotc(sig_[i].data(), sig_[j].data(), sig_[i].size());
        gram_(j, i) = std::conj(gram_(i, j));
      }
    }
  }
}

namespace {

// Residual of the LS fit of y onto one signature.
double residual1(double y_sq, cd proj, double norm_sq) {
  if (norm_sq <= 0.0) return y_sq;
  return y_sq - std::norm(proj) / norm_sq;
}

// Residual of the LS fit onto two signatures with Gram entries g11,g22,g12.
double residual2(double y_sq, cd p1, cd p2, double g11, double g22, cd g12) {
  const double det = g11 * g22 - std::norm(g12);
  if (det <= 1e-12 * g11 * g22) {
    return std::min(residual1(y_sq, p1, g11), residual1(y_sq, p2, g22));
  }
  // energy = p^H G^{-1} p with p = [p1, p2]
  const cd a1 = (g22 * p1 - g12 * p2) / det;
  const cd a2 = (g11 * p2 - std::conj(g12) * p1) / det;
  const double energy = std::real(std::conj(a1) * p1 + std::conj(a2) * p2);
  return y_sq - energy;
}

}  // namespace

EstimationResult mle_estimate(const SnapshotSet& snapshots, const Scenario& scn,
                              int k_sources, double grid_step_deg,
                              const MleWorkspace* ws) {
  if (snapshots.architecture != scn.architecture) {
    throw std::invalid_argument("snapshot architecture does not match scenario model");
  }
  std::optional<MleWorkspace> local;
  if (ws == nullptr) {
    local.emplace(scn, snapshots.schedule, k_sources, grid_step_deg);
    ws = &*local;
  }
  if (ws->k_sources() != k_sources) {
    throw std::invalid_argument("workspace built for a different source count");
  }

  const Eigen::Map<const Eigen::VectorXcd> y(snapshots.samples.data(),
                                             snapshots.samples.size());
  const double y_sq = kern::sumsq(y.data(), y.size());
  const auto& grid = ws->grid();
  const std::size_t g = grid.size();

  std::vector<cd> proj(g);
  for (std::size_t i = 0; i < g; ++i) {
    proj[i] = kern::cdotc(ws->signature(i).data(), y.data(), y.size());
  }

  EstimationResult res;
  const auto signature_at = [&](double ang) {
    Eigen::MatrixXcd s =
        target_signature(scn, snapshots.schedule, ang, ws->distance_m());
    return Eigen::VectorXcd(Eigen::Map<Eigen::VectorXcd>(s.data(), s.size()));
  };

  if (k_sources == 1) {
    double best = std::numeric_limits<double>::infinity();
    std::size_t best_i = 0;
    std::vector<double> resid(g);
    for (std::size_t i = 0; i < g; ++i) {
      resid[i] = residual1(y_sq, proj[i], ws->norm_sq(i));
      if (resid[i] < best) {
        best = resid[i];
        best_i = i;
      }
    }
    const double near = best + std::max((kResidualNearMax - 1.0) * best,
                                        kResidualChi2Margin * snapshots.noise_power_w);
    double lo = 90.0, hi = -90.0;
    for (std::size_t i = 0; i < g; ++i) {
      if (resid[i] <= near) {
        lo = std::min(lo, grid[i]);
        hi = std::max(hi, grid[i]);
      }
    }
    res.ambiguity_flag = (hi - lo) > res.ambiguity_span_deg;
    const auto resid_at = [&](double ang) {
      const Eigen::VectorXcd s = signature_at(ang);
      const double nsq = kern::sumsq(s.data(), s.size());
      return residual1(y_sq, kern::cdotc(s.data(), y.data(), y.size()), nsq);
    };
    const double step = ws->step();
    res.angles_deg.push_back(golden_section(std::max(grid[best_i] - step, -89.9),
                                            std::min(grid[best_i] + step, 89.9),
                                            1e-3, resid_at));
    for (std::size_t i = 0; i < g; ++i) res.spectrum.emplace_back(grid[i], resid[i]);
    return res;
  }

  // K = 2: exhaustive coarse 2-D grid.
  double best = std::numeric_limits<double>::infinity();
  std::size_t bi = 0, bj = 1;
  Eigen::MatrixXd resid2d(g, g);
  for (std::size_t i = 0; i < g; ++i) {
    for (std::size_t j = i + 1; j < g; ++j) {
      const double r2 = residual2(y_sq, proj[i], proj[j], ws->norm_sq(i),
                                  ws->norm_sq(j), ws->gram(i, j));
      resid2d(i, j) = r2;
      if (r2 < best) {
        best = r2;
        bi = i;
        bj = j;
      }
    }
  }
  // Ambiguity: span of near-optimal tuples relative to the best tuple.
  const double near = best + std::max((kResidualNearMax - 1.0) * best,
                                      kResidualChi2Margin * snapshots.noise_power_w);
  double span = 0.0;
  for (std::size_t i = 0; i < g; ++i) {
    for (std::size_t j = i + 1; j < g; ++j) {
      if (resid2d(i, j) <= near) {
        span = std::max(span, std::max(std::abs(grid[i] - grid[bi]),
                                       std::abs(grid[j] - grid[bj])));
      }
    }
  }
  res.ambiguity_flag = span > res.ambiguity_span_deg;

  // Coordinate-wise golden-section refinement.
  double th1 = grid[bi], th2 = grid[bj];
  const double step = ws->step();
  const auto resid_pair = [&](double a1, double a2) {
    const Eigen::VectorXcd s1 = signature_at(a1);
    const Eigen::VectorXcd s2 = signature_at(a2);
    const double n1 = kern::sumsq(s1.data(), s1.size());
    const double n2 = kern::sumsq(s2.data(), s2.size());
    const cd g12 = kern::cdotc(s1.data(), s2.data(), s1.size());
    return residual2(y_sq, kern::cdotc(s1.data(), y.data(), y.size()),
                     kern::cdotc(s2.data(), y.data(), y.size()), n1, n2, g12);
  };
  for (int round = 0; round < 3; ++round) {
    th1 = golden_section(std::max(th1 - step, -89.9), std::min(th1 + step, 89.9), 1e-3,
                         [&](double x) { return resid_pair(x, th2); });
    th2 = golden_section(std::max(th2 - step, -89.9), std::min(th2 + step, 89.9), 1e-3,
                         [&](double x) { return resid_pair(th1, x); });
  }
  res.angles_deg = {th1, th2};
  std::sort(res.angles_deg.begin(), res.angles_deg.end());
  return res;
}

double crlb_numeric_model(const std::function<Eigen::MatrixXcd(double)>& model,
                          double theta_deg, cd gain, double noise_power_w) {
  const double h = 1e-5;  // degrees
  const Eigen::MatrixXcd sp = model(theta_deg + h);
  const Eigen::MatrixXcd sm = model(theta_deg - h);
  const Eigen::MatrixXcd s0 = model(theta_deg);
  const Eigen::MatrixXcd ds = gain * (sp - sm) / (2.0 * h);

  const auto vec = [](const Eigen::MatrixXcd& m) {
    return Eigen::VectorXcd(Eigen::Map<const Eigen::VectorXcd>(m.data(), m.size()));
  };
  const Eigen::VectorXcd j_theta = vec(ds);
  const Eigen::VectorXcd j_re = vec(s0);
  const Eigen::VectorXcd j_im = cd(0.0, 1.0) * j_re;

  Eigen::Matrix3d f;
  const auto entry = [&](const Eigen::VectorXcd& a, const Eigen::VectorXcd& b) {
    return std::real(a.dot(b));  // Eigen dot conjugates the first argument
  };
  const Eigen::VectorXcd cols[3] = {j_theta, j_re, j_im};
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) f(i, j) = entry(cols[i], cols[j]);
  }
  f *= 2.0 / noise_power_w;

  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> eig(f);
  const double lmax = eig.eigenvalues().maxCoeff();
  const double lmin = eig.eigenvalues().minCoeff();
  if (!(lmax > 0.0) || lmin <= lmax * 1e-12) {
    throw UnidentifiableError(
        "Fisher information is singular: angle is not identifiable");
  }
  return f.inverse()(0, 0);
}

double crlb_numeric(const Scenario& scn, const ReflectionSchedule& sched,
                    int target_index) {
  if (target_index < 0 || target_index >= static_cast<int>(scn.targets.size())) {
    throw std::invalid_argument("target_index out of range");
  }
  const Target& t = scn.targets[target_index];
  const cd gain = target_gain(scn, t);
  const auto model = [&](double ang) {
    return target_signature(scn, sched, ang, t.distance_m);
  };
  return crlb_numeric_model(model, t.angle_deg, gain, scn.budget.noise_power_w);
}

std::vector<double> matched_errors(const std::vector<double>& estimates,
                                   const std::vector<double>& truth) {
  if (estimates.size() != truth.size()) {
    throw std::invalid_argument("estimate/truth size mismatch");
  }
  std::vector<std::size_t> perm(truth.size()), best_perm;
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  double best = std::numeric_limits<double>::infinity();
  do {
    double s = 0.0;
    for (std::size_t i = 0; i < perm.size(); ++i) {
      s += std::abs(estimates[i] - truth[perm[i]]);
    }
    if (s < best) {
      best = s;
      best_perm = perm;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  std::vector<double> err(truth.size());
  for (std::size_t i = 0; i < truth.size(); ++i) {
    err[i] = estimates[i] - truth[best_perm[i]];
  }
  return err;
}

}  // namespace irssense
