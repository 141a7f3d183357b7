#include "irssense/simulate.hpp"

#include "irssense/kernels.hpp"

#include <cmath>
#include <stdexcept>

namespace irssense {

namespace {

// In-plane broadside direction of a horizontal ULA.
Vec3 broadside(const ArrayGeometry& g) { return Vec3::UnitZ().cross(g.orientation); }

std::vector<Eigen::VectorXcd> schedule_rows(const ReflectionSchedule& sched) {
  std::vector<Eigen::VectorXcd> rows(sched.snapshots());
  for (int t = 0; t < sched.snapshots(); ++t) {
    rows[t] = sched.coefficients.row(t).transpose();
  }
  return rows;
}

void check_schedule(const Scenario& scn, const ReflectionSchedule& sched) {
  if (sched.elements() != scn.irs_elements.num_elements) {
    throw std::invalid_argument("schedule width does not match IRS element count");
  }
  if (sched.snapshots() < 1) {
    throw std::invalid_argument("schedule needs at least one snapshot");
  }
}

void add_noise(Eigen::MatrixXcd& samples, double noise_power_w, RngStream& rng) {
  for (int t = 0; t < samples.cols(); ++t) {
    for (int m = 0; m < samples.rows(); ++m) {
      samples(m, t) += rng.cgaussian(noise_power_w);
    }
  }
}

}  // namespace

std::string to_string(Architecture a) {
  switch (a) {
    case Architecture::passive: return "passive";
    case Architecture::semi_passive: return "semi_passive";
    case Architecture::active: return "active";
  }
  return "?";
}

Architecture architecture_from_string(const std::string& s) {
  if (s == "passive") return Architecture::passive;
  if (s == "semi_passive" || s == "semi") return Architecture::semi_passive;
  if (s == "active") return Architecture::active;
  throw std::invalid_argument("unknown architecture: " + s);
}

Scenario Scenario::defaults(Architecture arch) {
  const double lambda = kSpeedOfLight / kDefaultCarrierHz;
  Scenario scn;
  scn.architecture = arch;
  scn.irs_elements = ArrayGeometry::ula(128, lambda);
  scn.irs_sensors = ArrayGeometry::ula(8, lambda);
  const Vec3 bs_pos(0.0, 100.0, 0.0);
  scn.bs_tx = ArrayGeometry::ula(128, lambda, bs_pos);
  scn.bs_rx = ArrayGeometry::ula(8, lambda, bs_pos);
  scn.controller_position = Vec3(0.0, 0.5, 0.0);
  scn.bs_irs_distance_m = 100.0;
  return scn;
}

Vec3 Scenario::target_position(const Target& t) const {
  const double th = deg2rad(t.angle_deg);
  return irs_elements.reference_position +
         t.distance_m * (std::sin(th) * irs_elements.orientation +
                         std::cos(th) * broadside(irs_elements));
}

const ArrayGeometry& Scenario::receiver() const {
  return architecture == Architecture::passive ? bs_rx : irs_sensors;
}

void Scenario::validate() const {
  bs_tx.validate();
  bs_rx.validate();
  irs_elements.validate();
  irs_sensors.validate();
  budget.validate();
  for (const auto& t : targets) t.validate();
  if (snapshots < 1) throw std::invalid_argument("snapshots must be >= 1");
}

Eigen::VectorXcd controller_channel(const Scenario& scn) {
  return spherical_wave_vector(scn.irs_elements, scn.controller_position);
}

Eigen::VectorXcd default_bs_beam(const Scenario& scn) {
  const double ang = bearing_deg(scn.bs_tx, scn.controller_position);
  Eigen::VectorXcd w = plane_wave_steering(scn.bs_tx, ang).conjugate();
  return w / w.norm();
}

Eigen::MatrixXcd bs_to_irs_channel(const Scenario& scn) {
  Eigen::MatrixXcd h = los_matrix(scn.irs_elements, scn.bs_tx, scn.near_field_factor);
  if (!scn.bs_irs_extra_paths.empty()) {
    const double d =
        (scn.bs_tx.reference_position - scn.irs_elements.reference_position).norm();
    const cd a0 = segment_response(d, scn.irs_elements.wavelength_m);
    for (const auto& p : scn.bs_irs_extra_paths) {
      h += p.gain * a0 * plane_wave_steering(scn.irs_elements, p.irs_angle_deg) *
           plane_wave_steering(scn.bs_tx, p.bs_angle_deg).transpose();
    }
  }
  return h;
}

Eigen::MatrixXcd irs_to_bs_channel(const Scenario& scn) {
  Eigen::MatrixXcd h = los_matrix(scn.bs_rx, scn.irs_elements, scn.near_field_factor);
  if (!scn.bs_irs_extra_paths.empty()) {
    const double d =
        (scn.bs_rx.reference_position - scn.irs_elements.reference_position).norm();
    const cd a0 = segment_response(d, scn.irs_elements.wavelength_m);
    for (const auto& p : scn.bs_irs_extra_paths) {
      h += p.gain * a0 * plane_wave_steering(scn.bs_rx, p.bs_angle_deg) *
           plane_wave_steering(scn.irs_elements, p.irs_angle_deg).transpose();
    }
  }
  return h;
}

Eigen::VectorXcd incident_field(const Scenario& scn) {
  if (scn.architecture == Architecture::active) {
    return controller_channel(scn);
  }
  return bs_to_irs_channel(scn) * default_bs_beam(scn);
}

Eigen::MatrixXcd target_signature(const Scenario& scn, const ReflectionSchedule& sched,
                                  double angle_deg, double distance_m,
                                  const Eigen::VectorXcd* bs_beam) {
  check_schedule(scn, sched);
  const double lambda = scn.irs_elements.wavelength_m;
  const int t_count = sched.snapshots();
  const int n = scn.irs_elements.num_elements;
  const auto rows = schedule_rows(sched);
  const Eigen::VectorXcd a = plane_wave_steering(scn.irs_elements, angle_deg);
  const cd seg = segment_response(distance_m, lambda);
  Eigen::VectorXcd masked(n);

  if (scn.architecture == Architecture::passive) {
    const Eigen::MatrixXcd hib = irs_to_bs_channel(scn);
    const Eigen::VectorXcd inc =
        bs_to_irs_channel(scn) * (bs_beam ? *bs_beam : default_bs_beam(scn));
    Eigen::MatrixXcd sig(scn.bs_rx.num_elements, t_count);
    for (int t = 0; t < t_count; ++t) {
      kern::cmul(rows[t].data(), a.data(), masked.data(), n);
      const cd fwd = kern::tdotu(a.data(), rows[t].data(), inc.data(), n);
      sig.col(t) = (seg * seg * fwd) * (hib * masked);
    }
    return sig;
  }

  const Eigen::VectorXcd inc =
      (scn.architecture == Architecture::semi_passive && bs_beam)
          ? Eigen::VectorXcd(bs_to_irs_channel(scn) * *bs_beam)
          : incident_field(scn);
  const Eigen::VectorXcd b = plane_wave_steering(scn.irs_sensors, angle_deg);
  Eigen::MatrixXcd sig(scn.irs_sensors.num_elements, t_count);
  cd direct = 0.0;
  if (scn.architecture == Architecture::active) {
    const double th = deg2rad(angle_deg);
    const Vec3 pos = scn.irs_elements.reference_position +
                     distance_m * (std::sin(th) * scn.irs_elements.orientation +
                                   std::cos(th) * broadside(scn.irs_elements));
    const double d_ctrl = (pos - scn.controller_position).norm();
    direct = segment_response(d_ctrl, lambda) * seg;
  }
  for (int t = 0; t < t_count; ++t) {
    const cd fwd = kern::tdotu(a.data(), rows[t].data(), inc.data(), n);
    sig.col(t) = (seg * seg * fwd + direct) * b;
  }
  return sig;
}

cd target_gain(const Scenario& scn, const Target& t) {
  return std::sqrt(scn.budget.tx_power_w) *
         reflectivity_amplitude(t.rcs_m2, scn.irs_elements.wavelength_m);
}

namespace {

SnapshotSet assemble(const Scenario& scn, const ReflectionSchedule& sched,
                     RngStream& rng, const Eigen::VectorXcd* bs_beam = nullptr) {
  scn.validate();
  check_schedule(scn, sched);
  const int m = scn.receiver().num_elements;
  Eigen::MatrixXcd samples = Eigen::MatrixXcd::Zero(m, sched.snapshots());
  for (const auto& tgt : scn.targets) {
    const cd alpha = target_gain(scn, tgt);
    const Eigen::MatrixXcd sig =
        target_signature(scn, sched, tgt.angle_deg, tgt.distance_m, bs_beam);
    kern::caxpy(alpha, sig.data(), samples.data(),
                static_cast<std::size_t>(samples.size()));
  }
  add_noise(samples, scn.budget.noise_power_w, rng);
  return SnapshotSet{std::move(samples), sched, scn.architecture,
                     scn.budget.noise_power_w};
}

void check_unit_norm(const Eigen::VectorXcd& beam) {
  if (std::abs(beam.norm() - 1.0) > 1e-9) {
    throw std::invalid_argument("bs_beam must be unit-norm");
  }
}

}  // namespace

SnapshotSet simulate_active(const Scenario& scn, const ReflectionSchedule& sched,
                            RngStream& rng) {
  if (scn.architecture != Architecture::active) {
    throw std::invalid_argument("scenario architecture is not active");
  }
  return assemble(scn, sched, rng);
}

SnapshotSet simulate_semi_passive(const Scenario& scn, const ReflectionSchedule& sched,
                                  const Eigen::VectorXcd& bs_beam, RngStream& rng) {
  if (scn.architecture != Architecture::semi_passive) {
    throw std::invalid_argument("scenario architecture is not semi_passive");
  }
  check_unit_norm(bs_beam);
  return assemble(scn, sched, rng, &bs_beam);
}

SnapshotSet simulate_passive(const Scenario& scn, const ReflectionSchedule& sched,
                             const Eigen::VectorXcd& bs_beam, RngStream& rng) {
  if (scn.architecture != Architecture::passive) {
    throw std::invalid_argument("scenario architecture is not passive");
  }
  check_unit_norm(bs_beam);
  return assemble(scn, sched, rng, &bs_beam);
}

SnapshotSet simulate(const Scenario& scn, const ReflectionSchedule& sched,
                     RngStream& rng) {
  return assemble(scn, sched, rng);
}

Eigen::VectorXd beampattern(const Scenario& scn, const Eigen::VectorXcd& codeword,
                            const Eigen::VectorXd& probe_angles_deg) {
  if (probe_angles_deg.size() == 0) throw std::invalid_argument("empty probe grid");
  if (scn.targets.empty()) {
    throw std::invalid_argument("beampattern needs a scenario target distance");
  }
  for (int n = 0; n < codeword.size(); ++n) {
    if (std::abs(std::abs(codeword(n)) - 1.0) > 1e-9) {
      throw std::invalid_argument("codeword must be unit-modulus");
    }
  }
  ReflectionSchedule one;
  one.label = "probe";
  one.coefficients = codeword.transpose();
  const double dist = scn.targets.front().distance_m;
  const double rho = reflectivity_amplitude(1.0, scn.irs_elements.wavelength_m);
  const double p = scn.budget.tx_power_w;
  Eigen::VectorXd out(probe_angles_deg.size());
  for (int i = 0; i < probe_angles_deg.size(); ++i) {
    const Eigen::MatrixXcd sig =
        target_signature(scn, one, probe_angles_deg(i), dist);
    out(i) = p * rho * rho *
             kern::sumsq(sig.data(), static_cast<std::size_t>(sig.size()));
  }
  return out;
}

Eigen::VectorXcd design_codeword(const Scenario& scn, double target_angle_deg) {
  const Eigen::VectorXcd inc = incident_field(scn);
  Eigen::VectorXcd phi =
      directional_codeword(inc, target_angle_deg, scn.irs_elements);
  if (scn.architecture == Architecture::active && !scn.targets.empty()) {
    // Rotate the whole codeword so the reflected echo adds in phase with the
    // direct controller->target->sensors echo.
    const double lambda = scn.irs_elements.wavelength_m;
    const double dist = scn.targets.front().distance_m;
    const Eigen::VectorXcd a = plane_wave_steering(scn.irs_elements, target_angle_deg);
    const cd seg = segment_response(dist, lambda);
    const cd fwd = kern::tdotu(a.data(), phi.data(), inc.data(),
                               static_cast<std::size_t>(phi.size()));
    const cd reflected = seg * seg * fwd;
    Target virt{target_angle_deg, dist, 1.0};
    const double d_ctrl = (scn.target_position(virt) - scn.controller_position).norm();
    const cd direct = segment_response(d_ctrl, lambda) * seg;
    phi *= std::polar(1.0, std::arg(direct) - std::arg(reflected));
  }
  return phi;
}

StaticChannelPilots acquire_static_channel_pilots(const Scenario& scn, int repetitions,
                                                  bool noise_free, RngStream& rng) {
  scn.validate();
  if (repetitions < 1) throw std::invalid_argument("repetitions must be >= 1");
  const int n = scn.irs_elements.num_elements;
  const int m = scn.irs_sensors.num_elements;
  const double sqrt_p = std::sqrt(scn.budget.tx_power_w);

  // Composite static channel: illuminator -> element n -> sensors. The
  // element-to-sensor couplings are synthetic (seeded) since the apertures
  // are colocated; what matters to the protocol is linearity, not the
  // coupling's fine structure.
  const Eigen::VectorXcd g = incident_field(scn);
  RngStream coupling = derive_stream(scn.master_seed, 0, "static-coupling");
  Eigen::MatrixXcd truth(m, n);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < m; ++i) {
      truth(i, j) = sqrt_p * g(j) * coupling.cgaussian(1.0);
    }
  }

  Eigen::VectorXcd leakage(m);
  if (scn.architecture == Architecture::active) {
    leakage = sqrt_p * spherical_wave_vector(scn.irs_sensors, scn.controller_position);
  } else {
    leakage = sqrt_p * los_matrix(scn.irs_sensors, scn.bs_tx, scn.near_field_factor) *
              default_bs_beam(scn);
  }

  StaticChannelPilots out;
  out.ground_truth = truth;
  out.leakage = leakage;
  out.repetitions = repetitions;
  const int t_total = repetitions * (n + 1);
  Eigen::MatrixXcd samples(m, t_total);
  int t = 0;
  for (int rep = 0; rep < repetitions; ++rep) {
    samples.col(t++) = leakage;
    for (int j = 0; j < n; ++j) {
      samples.col(t++) = leakage + truth.col(j);
    }
  }
  if (!noise_free) add_noise(samples, scn.budget.noise_power_w, rng);
  ReflectionSchedule tag;
  tag.label = "static-pilot";
  tag.coefficients.resize(0, n);
  out.pilots = SnapshotSet{std::move(samples), std::move(tag), scn.architecture,
                           noise_free ? 0.0 : scn.budget.noise_power_w};
  return out;
}

Eigen::MatrixXcd estimate_static_channel(const SnapshotSet& pilots, int n_elements) {
  const int t_total = static_cast<int>(pilots.samples.cols());
  const int block = n_elements + 1;
  if (t_total < block) {
    throw std::invalid_argument("insufficient pilots: need at least N+1 snapshots");
  }
  const int reps = t_total / block;
  const int m = static_cast<int>(pilots.samples.rows());
  Eigen::VectorXcd off = Eigen::VectorXcd::Zero(m);
  Eigen::MatrixXcd on = Eigen::MatrixXcd::Zero(m, n_elements);
  for (int rep = 0; rep < reps; ++rep) {
    const int base = rep * block;
    off += pilots.samples.col(base);
    for (int j = 0; j < n_elements; ++j) {
      on.col(j) += pilots.samples.col(base + 1 + j);
    }
  }
  off /= static_cast<double>(reps);
  on /= static_cast<double>(reps);
  on.colwise() -= off;
  return on;
}

HierarchicalResult hierarchical_search(const Scenario& scn, const HierarchicalPlan& plan,
                                       RngStream& rng) {
  HierarchicalResult res;
  const SnapshotSet stage1 = simulate(scn, plan.stage1(), rng);
  res.stage1_energy.resize(plan.n_sectors());
  double best = -1.0;
  for (int i = 0; i < plan.n_sectors(); ++i) {
    const double e = kern::sumsq(stage1.samples.col(i).data(),
                                 static_cast<std::size_t>(stage1.samples.rows()));
    res.stage1_energy[i] = e;
    if (e > best) {  // ties break to the lower sector index
      best = e;
      res.sector = i;
    }
  }
  const SnapshotSet stage2 = simulate(scn, plan.stage2(res.sector), rng);
  const auto angles = plan.fine_angles(res.sector);
  res.stage2_energy.resize(angles.size());
  best = -1.0;
  for (std::size_t i = 0; i < angles.size(); ++i) {
    const double e = kern::sumsq(stage2.samples.col(static_cast<int>(i)).data(),
                                 static_cast<std::size_t>(stage2.samples.rows()));
    res.stage2_energy[i] = e;
    if (e > best) {
      best = e;
      res.angle_deg = angles[i];
    }
  }
  return res;
}

}  // namespace irssense
