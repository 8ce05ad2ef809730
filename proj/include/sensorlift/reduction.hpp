#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "sensorlift/fields.hpp"
#include "sensorlift/sensing.hpp"

namespace sensorlift {

enum class Scenario : std::uint32_t { PiecewiseConstant = 0, LogNormal = 1 };

struct ScenarioConfig {
  Scenario kind = Scenario::PiecewiseConstant;
  MaternSpec matern;  // used when kind == LogNormal
};

// Parameter draws, truth solutions, measurement coordinates and complement
// snapshots, all column-per-sample.
struct SnapshotSet {
  Scenario scenario = Scenario::PiecewiseConstant;
  std::uint64_t master_seed = 0;
  Eigen::MatrixXd params;     // param_dim x N (16 for S1, node field for S2)
  Eigen::MatrixXd solutions;  // N_h x N
  Eigen::MatrixXd w;          // m x N
  Eigen::MatrixXd z;          // N_h x N

  int count() const { return static_cast<int>(solutions.cols()); }
  int dof_count() const { return static_cast<int>(solutions.rows()); }
  int sensor_count() const { return static_cast<int>(w.rows()); }
};

// Solves the family at N random parameters (substream seed = master ^ s),
// measures and projects. A degenerate coefficient or solver failure is
// resampled once per index, then fatal.
SnapshotSet generate_snapshots(const ScenarioConfig& scenario, int nhat,
                               const TruthSpace& truth,
                               const SensorArray& sensors,
                               const MeasurementSpace& space,
                               std::uint64_t master_seed);

// U-orthonormal POD basis of the complement cloud with retained spectrum.
struct ComplementBasis {
  Eigen::MatrixXd psi;           // N_h x k
  Eigen::VectorXd spectrum;      // leading eigenvalues (descending, >= k of them)
  double total_energy = 0.0;     // trace of the snapshot Gram
  double energy_kept = 0.0;
  int k = 0;
};

enum class PodWeighting { UInner, Coefficient };

// Method of snapshots on the U-weighted Gram K_st = (z_s, z_t)_U; k is the
// smallest count whose eigenvalue sum reaches energy * trace. Eigenvalues
// below 1e-12 * lambda_1 are dropped first. The Coefficient variant runs the
// plain coefficient-vector Gram and U-orthonormalizes the retained modes.
ComplementBasis pod_complement(const Eigen::MatrixXd& z, const TruthSpace& truth,
                               double energy,
                               PodWeighting weighting = PodWeighting::UInner);

struct LabelSet {
  Eigen::MatrixXd c;  // k x N, c(i,s) = (u_s, psi_i)_U
  std::vector<int> train_idx;
  std::vector<int> ghost_idx;
};

LabelSet extract_labels(const SnapshotSet& snapshots,
                        const ComplementBasis& basis, const TruthSpace& truth);

void split_train_ghost(int nhat, int n_ghost, Rng& rng,
                       std::vector<int>& train_idx, std::vector<int>& ghost_idx);

// Little-endian binary cache: magic "PDES1", version u32, scenario u32,
// N u64, N_h u64, m u64, master_seed u64, param_dim u64, then contiguous
// float64 arrays params, solutions, w, z (column per sample). Bit-exact.
void save_snapshots(const SnapshotSet& s, const std::string& path);
SnapshotSet load_snapshots(const std::string& path);

}  // namespace sensorlift
