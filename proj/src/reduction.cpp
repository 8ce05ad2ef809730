#include "sensorlift/reduction.hpp"

#include <Eigen/Cholesky>
#include <algorithm>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <iostream>
#include <memory>
#include <numeric>

#include <lapacke.h>

#include "sensorlift/errors.hpp"

namespace sensorlift {

namespace {

constexpr std::uint64_t kRetrySalt = 0x5e15a1f0c0ffee42ull;

Eigen::VectorXd draw_coefficients(const ScenarioConfig& scenario,
                                  const TruthSpace& truth,
                                  const CirculantSampler* sampler, Rng& rng,
                                  Eigen::VectorXd& params_out) {
  if (scenario.kind == Scenario::PiecewiseConstant) {
    const ParamS1 p = sample_param_s1(rng);
    params_out = p.y;
    return s1_element_coefficients(p, truth.mesh());
  }
  const GridField z = sampler->sample(rng);
  params_out = z;
  return s2_element_coefficients(scenario.matern, z, truth.mesh());
}

}  // namespace

SnapshotSet generate_snapshots(const ScenarioConfig& scenario, int nhat,
                               const TruthSpace& truth,
                               const SensorArray& sensors,
                               const MeasurementSpace& space,
                               std::uint64_t master_seed) {
  if (nhat < 1) throw std::invalid_argument("generate_snapshots: nhat >= 1");
  const TriMesh& mesh = truth.mesh();
  const int n_dof = mesh.dof_count();
  const int m = sensors.count();
  const int param_dim = scenario.kind == Scenario::PiecewiseConstant
                            ? 16
                            : mesh.node_count();

  std::unique_ptr<CirculantSampler> sampler;
  if (scenario.kind == Scenario::LogNormal)
    sampler = std::make_unique<CirculantSampler>(scenario.matern, mesh);

  SnapshotSet out;
  out.scenario = scenario.kind;
  out.master_seed = master_seed;
  out.params.resize(param_dim, nhat);
  out.solutions.resize(n_dof, nhat);
  out.w.resize(m, nhat);
  out.z.resize(n_dof, nhat);

  const Eigen::VectorXd load = assemble_load_unit(mesh);
  CgOptions opts;
  // Log-normal coefficient contrast inflates plain-CG iteration counts by the
  // square root of the contrast; diagonal scaling removes most of it.
  opts.jacobi = scenario.kind == Scenario::LogNormal;

  for (int s = 0; s < nhat; ++s) {
    FeFunction u;
    Eigen::VectorXd par;
    for (int attempt = 0;; ++attempt) {
      Rng rng(attempt == 0 ? snapshot_seed(master_seed, s)
                           : mix_seed(snapshot_seed(master_seed, s), kRetrySalt));
      try {
        const Eigen::VectorXd a_elem =
            draw_coefficients(scenario, truth, sampler.get(), rng, par);
        u = solve_dirichlet(assemble_stiffness(mesh, a_elem), load, opts);
        break;
      } catch (const std::exception& e) {
        std::cerr << "generate_snapshots: sample " << s << " failed (" << e.what()
                  << "), " << (attempt == 0 ? "resampling once" : "fatal") << "\n";
        if (attempt > 0) throw;
      }
    }
    out.params.col(s) = par;
    out.solutions.col(s) = u;
    out.w.col(s) = measure_coords(space, apply_functionals(sensors, mesh, u));
    out.z.col(s) = u - space.phi * out.w.col(s);
  }
  return out;
}

namespace {

// Largest `want` eigenpairs of the symmetric matrix `gram` (destroyed).
void top_eigenpairs(Eigen::MatrixXd& gram, int want, Eigen::VectorXd& values,
                    Eigen::MatrixXd& vectors) {
  const lapack_int n = static_cast<lapack_int>(gram.rows());
  want = std::min<int>(want, n);
  values.resize(want);
  vectors.resize(n, want);
  Eigen::VectorXd w(n);
  std::vector<lapack_int> isuppz(2 * std::max(1, want));
  lapack_int found = 0;
  const lapack_int info = LAPACKE_dsyevr(
      LAPACK_COL_MAJOR, 'V', 'I', 'L', n, gram.data(), n, 0.0, 0.0,
      n - want + 1, n, 0.0, &found, w.data(), vectors.data(), n, isuppz.data());
  if (info != 0 || found != want)
    throw std::runtime_error("pod_complement: eigensolver failed (info=" +
                             std::to_string(info) + ")");
  // ascending -> descending
  w.conservativeResize(want);
  values = w.reverse();
  vectors = vectors.rowwise().reverse().eval();
}

}  // namespace

ComplementBasis pod_complement(const Eigen::MatrixXd& z, const TruthSpace& truth,
                               double energy, PodWeighting weighting) {
  if (z.cols() < 1) throw std::invalid_argument("pod_complement: empty snapshot set");
  if (!(energy > 0.0 && energy < 1.0))
    throw std::invalid_argument("pod_complement: energy in (0,1) required");
  const int nhat = static_cast<int>(z.cols());

  Eigen::MatrixXd gram;
  {
    Eigen::MatrixXd wz =
        weighting == PodWeighting::UInner ? truth.apply(z) : z;
    gram.noalias() = z.transpose() * wz;
  }
  const double total = gram.trace();

  ComplementBasis basis;
  basis.total_energy = total;
  if (total <= 0.0 || !(gram.cwiseAbs().maxCoeff() > 0.0)) {
    std::cerr << "pod_complement: all-zero snapshots, returning empty basis\n";
    basis.psi.resize(z.rows(), 0);
    basis.spectrum.resize(0);
    basis.energy_kept = 0.0;
    basis.k = 0;
    return basis;
  }

  int want = std::min(nhat, 512);
  Eigen::VectorXd lam;
  Eigen::MatrixXd vec;
  for (;;) {
    Eigen::MatrixXd work = gram;
    top_eigenpairs(work, want, lam, vec);
    // numerical-rank cut, then the energy count against the exact trace
    const double floor = 1e-12 * lam[0];
    int usable = 0;
    double cum = 0.0;
    int k = -1;
    for (int i = 0; i < lam.size(); ++i) {
      if (lam[i] < floor) break;
      usable = i + 1;
      cum += lam[i];
      if (k < 0 && cum >= energy * total) k = i + 1;
    }
    if (k < 0 && usable == want && want < nhat) {
      want = std::min(nhat, want * 4);
      continue;
    }
    if (k < 0) k = usable;  // spectrum exhausted; keep the numerical rank
    basis.k = k;
    basis.spectrum = lam.head(usable);
    basis.energy_kept = lam.head(k).sum() / total;
    break;
  }

  const int k = basis.k;
  Eigen::MatrixXd scaled = vec.leftCols(k);
  for (int i = 0; i < k; ++i) scaled.col(i) /= std::sqrt(lam[i]);
  basis.psi.noalias() = z * scaled;

  if (weighting == PodWeighting::Coefficient && k > 0) {
    // plain-SVD modes are Euclidean-orthonormal; re-orthonormalize in U
    const Eigen::MatrixXd G = basis.psi.transpose() * truth.apply(basis.psi);
    Eigen::LLT<Eigen::MatrixXd> llt(G);
    basis.psi = (llt.matrixL().solve(basis.psi.transpose())).transpose();
  }

  if (k > 0) {
    const Eigen::MatrixXd G = basis.psi.transpose() * truth.apply(basis.psi);
    const double resid =
        (G - Eigen::MatrixXd::Identity(k, k)).cwiseAbs().maxCoeff();
    if (resid > 5e-12) {
      Eigen::LLT<Eigen::MatrixXd> llt(G);
      if (llt.info() == Eigen::Success)
        basis.psi = (llt.matrixL().solve(basis.psi.transpose())).transpose();
    }
  }
  return basis;
}

LabelSet extract_labels(const SnapshotSet& snapshots,
                        const ComplementBasis& basis, const TruthSpace& truth) {
  LabelSet labels;
  labels.c.noalias() = basis.psi.transpose() * truth.apply(snapshots.solutions);
  return labels;
}

void split_train_ghost(int nhat, int n_ghost, Rng& rng,
                       std::vector<int>& train_idx, std::vector<int>& ghost_idx) {
  if (n_ghost <= 0 || n_ghost >= nhat)
    throw std::invalid_argument("split_train_ghost: 0 < n_ghost < nhat required");
  std::vector<int> idx(nhat);
  std::iota(idx.begin(), idx.end(), 0);
  std::shuffle(idx.begin(), idx.end(), rng);
  ghost_idx.assign(idx.begin(), idx.begin() + n_ghost);
  train_idx.assign(idx.begin() + n_ghost, idx.end());
  std::sort(ghost_idx.begin(), ghost_idx.end());
  std::sort(train_idx.begin(), train_idx.end());
}

namespace {

constexpr char kMagic[5] = {'P', 'D', 'E', 'S', '1'};
constexpr std::uint32_t kVersion = 1;

template <typename T>
void write_pod(std::ofstream& os, const T& v) {
  os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T read_pod(std::ifstream& is) {
  T v;
  is.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!is) throw FormatError("snapshot cache: truncated file");
  return v;
}

void write_matrix(std::ofstream& os, const Eigen::MatrixXd& m) {
  os.write(reinterpret_cast<const char*>(m.data()),
           static_cast<std::streamsize>(sizeof(double) * m.size()));
}

void read_matrix(std::ifstream& is, Eigen::MatrixXd& m) {
  is.read(reinterpret_cast<char*>(m.data()),
          static_cast<std::streamsize>(sizeof(double) * m.size()));
  if (!is) throw FormatError("snapshot cache: truncated array block");
}

}  // namespace

void save_snapshots(const SnapshotSet& s, const std::string& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw FormatError("save_snapshots: cannot open " + path);
  os.write(kMagic, sizeof(kMagic));
  write_pod(os, kVersion);
  write_pod(os, static_cast<std::uint32_t>(s.scenario));
  write_pod(os, static_cast<std::uint64_t>(s.count()));
  write_pod(os, static_cast<std::uint64_t>(s.dof_count()));
  write_pod(os, static_cast<std::uint64_t>(s.sensor_count()));
  write_pod(os, s.master_seed);
  write_pod(os, static_cast<std::uint64_t>(s.params.rows()));
  write_matrix(os, s.params);
  write_matrix(os, s.solutions);
  write_matrix(os, s.w);
  write_matrix(os, s.z);
  if (!os) throw FormatError("save_snapshots: write failed for " + path);
}

SnapshotSet load_snapshots(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw FormatError("load_snapshots: cannot open " + path);
  char magic[5];
  is.read(magic, sizeof(magic));
  if (!is || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0)
    throw FormatError("load_snapshots: bad magic");
  const auto version = read_pod<std::uint32_t>(is);
  if (version != kVersion)
    throw FormatError("load_snapshots: unsupported version " + std::to_string(version));
  SnapshotSet s;
  const auto scenario = read_pod<std::uint32_t>(is);
  if (scenario > 1) throw FormatError("load_snapshots: bad scenario tag");
  s.scenario = static_cast<Scenario>(scenario);
  const auto nhat = read_pod<std::uint64_t>(is);
  const auto ndof = read_pod<std::uint64_t>(is);
  const auto m = read_pod<std::uint64_t>(is);
  s.master_seed = read_pod<std::uint64_t>(is);
  const auto param_dim = read_pod<std::uint64_t>(is);
  if (nhat == 0 || nhat > (1ull << 32) || ndof == 0 || m == 0)
    throw FormatError("load_snapshots: implausible header dimensions");
  s.params.resize(static_cast<Eigen::Index>(param_dim), static_cast<Eigen::Index>(nhat));
  s.solutions.resize(static_cast<Eigen::Index>(ndof), static_cast<Eigen::Index>(nhat));
  s.w.resize(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(nhat));
  s.z.resize(static_cast<Eigen::Index>(ndof), static_cast<Eigen::Index>(nhat));
  read_matrix(is, s.params);
  read_matrix(is, s.solutions);
  read_matrix(is, s.w);
  read_matrix(is, s.z);
  is.peek();
  if (!is.eof()) throw FormatError("load_snapshots: trailing bytes");
  return s;
}

}  // namespace sensorlift
