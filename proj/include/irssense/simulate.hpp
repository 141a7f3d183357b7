#pragma once

#include "irssense/channel.hpp"
#include "irssense/reflection.hpp"
#include "irssense/rng.hpp"

#include <optional>
#include <string>
#include <vector>

namespace irssense {

enum class Architecture { passive, semi_passive, active };

std::string to_string(Architecture a);
Architecture architecture_from_string(const std::string& s);

// Optional extra BS-IRS propagation path, gain relative to the LoS segment
// response. Used for the passive-sensing identifiability experiments.
struct NlosPath {
  double bs_angle_deg = 0.0;   // departure/arrival bearing at the BS arrays
  double irs_angle_deg = 0.0;  // arrival/departure bearing at the IRS
  cd gain = 0.5;
};

// Full experiment description. The default geometry places the IRS at the
// origin with its axis along +x, the BS on the IRS broadside at
// bs_irs_distance_m, and the controller 0.5 m in front of the IRS. The IRS
// sensor array shares the IRS elements' reference position (colocated
// apertures).
struct Scenario {
  ArrayGeometry bs_tx;
  ArrayGeometry bs_rx;
  ArrayGeometry irs_elements;
  ArrayGeometry irs_sensors;
  Vec3 controller_position = Vec3::Zero();
  double bs_irs_distance_m = 100.0;
  std::vector<Target> targets;
  LinkBudget budget;
  Architecture architecture = Architecture::active;
  int snapshots = 128;
  std::uint64_t master_seed = 0;
  std::vector<NlosPath> bs_irs_extra_paths;
  double near_field_factor = 10.0;

  static Scenario defaults(Architecture arch);

  Vec3 target_position(const Target& t) const;
  const ArrayGeometry& receiver() const;
  void validate() const;
};

struct SnapshotSet {
  Eigen::MatrixXcd samples;  // M x T
  ReflectionSchedule schedule;
  Architecture architecture = Architecture::active;
  double noise_power_w = 0.0;
};

// Controller -> IRS elements channel (spherical near-field branch).
Eigen::VectorXcd controller_channel(const Scenario& scn);
// BS tx beam pointing at the IRS controller, unit norm.
Eigen::VectorXcd default_bs_beam(const Scenario& scn);
// BS -> IRS elements channel including any configured extra paths.
Eigen::MatrixXcd bs_to_irs_channel(const Scenario& scn);
// IRS elements -> BS rx channel (reciprocal path set).
Eigen::MatrixXcd irs_to_bs_channel(const Scenario& scn);
// Field incident on the IRS elements from the architecture's illuminator.
Eigen::VectorXcd incident_field(const Scenario& scn);

// Noiseless M x T response of a unit-gain target at the given angle and
// distance under the scenario's architecture; noiseless samples are
// sum_k target_gain(scn, k) * target_signature(theta_k, d_k). Shared by the
// simulators, the MLE, and the numeric CRLB. A custom BS beam may be passed
// for the passive/semi-passive architectures (defaults to the
// controller-pointing beam).
Eigen::MatrixXcd target_signature(const Scenario& scn, const ReflectionSchedule& sched,
                                  double angle_deg, double distance_m,
                                  const Eigen::VectorXcd* bs_beam = nullptr);

// Composite target gain sqrt(P) * reflectivity_amplitude(rcs).
cd target_gain(const Scenario& scn, const Target& t);

SnapshotSet simulate_active(const Scenario& scn, const ReflectionSchedule& sched,
                            RngStream& rng);
SnapshotSet simulate_semi_passive(const Scenario& scn, const ReflectionSchedule& sched,
                                  const Eigen::VectorXcd& bs_beam, RngStream& rng);
SnapshotSet simulate_passive(const Scenario& scn, const ReflectionSchedule& sched,
                             const Eigen::VectorXcd& bs_beam, RngStream& rng);
// Dispatch on scn.architecture with the default BS beam.
SnapshotSet simulate(const Scenario& scn, const ReflectionSchedule& sched, RngStream& rng);

// Noiseless received power versus probe angle for a fixed codeword: a unit
// RCS virtual target is placed at each probe angle at the scenario's target
// distance.
Eigen::VectorXd beampattern(const Scenario& scn, const Eigen::VectorXcd& codeword,
                            const Eigen::VectorXd& probe_angles_deg);

// Directional codeword for the architecture's illuminator; for active
// sensing a global phase is added so the reflected and direct echo paths
// combine constructively at the sensors.
Eigen::VectorXcd design_codeword(const Scenario& scn, double target_angle_deg);

// -------- Offline static-channel acquisition (IRS elements OFF probing) ----

struct StaticChannelPilots {
  SnapshotSet pilots;             // T = repetitions * (N + 1) snapshots
  Eigen::MatrixXcd ground_truth;  // M x N composite static channel
  Eigen::VectorXcd leakage;       // illuminator -> sensors direct term
  int repetitions = 1;
};

// Probing protocol per repetition: one all-OFF snapshot, then N snapshots
// with exactly one element ON, pilot symbol fixed at 1.
StaticChannelPilots acquire_static_channel_pilots(const Scenario& scn, int repetitions,
                                                  bool noise_free, RngStream& rng);

// Least-squares recovery of the composite static channel from the pilot
// protocol above. Throws if fewer than N + 1 snapshots are available.
Eigen::MatrixXcd estimate_static_channel(const SnapshotSet& pilots, int n_elements);

// -------- Hierarchical two-stage scan ------------------------------------

struct HierarchicalResult {
  int sector = 0;
  double angle_deg = 0.0;
  std::vector<double> stage1_energy;
  std::vector<double> stage2_energy;
};

// Runs the wide-beam stage, picks the sector with the largest received echo
// energy (ties to the lower index), then scans its fine beams and returns
// the strongest fine angle.
HierarchicalResult hierarchical_search(const Scenario& scn, const HierarchicalPlan& plan,
                                       RngStream& rng);

}  // namespace irssense
