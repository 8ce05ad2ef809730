#include "sensorlift/sensing.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>

#include "sensorlift/errors.hpp"

namespace sensorlift {

std::array<Point, 4> SensorArray::corners(int i) const {
  const Point& c = centers[i];
  const double d = delta / 2.0;
  return {Point{c.x - d, c.y - d}, Point{c.x + d, c.y - d},
          Point{c.x - d, c.y + d}, Point{c.x + d, c.y + d}};
}

SensorArray place_uniform(int m) {
  SensorArray s;
  if (m == 16) {
    for (int j = 1; j <= 4; ++j)
      for (int i = 1; i <= 4; ++i)
        s.centers.push_back({(2.0 * i - 1.0) / 8.0, (2.0 * j - 1.0) / 8.0});
  } else if (m == 49) {
    return place_grid(7);
  } else {
    throw std::invalid_argument(
        "place_uniform: only m in {16, 49}; use place_grid for general m x m");
  }
  return s;
}

SensorArray place_grid(int q) {
  if (q < 1) throw std::invalid_argument("place_grid: q >= 1 required");
  SensorArray s;
  for (int j = 1; j <= q; ++j)
    for (int i = 1; i <= q; ++i)
      s.centers.push_back({i / (q + 1.0), j / (q + 1.0)});
  return s;
}

SensorArray place_random(int m, Rng& rng) {
  if (m < 1) throw std::invalid_argument("place_random: m >= 1 required");
  std::uniform_real_distribution<double> u(0.05, 0.95);
  SensorArray s;
  s.centers.reserve(m);
  for (int i = 0; i < m; ++i) {
    const double x = u(rng);
    const double y = u(rng);
    s.centers.push_back({x, y});
  }
  return s;
}

Eigen::VectorXd apply_functionals(const SensorArray& sensors,
                                  const TriMesh& mesh, const FeFunction& u) {
  Eigen::VectorXd o(sensors.count());
  for (int i = 0; i < sensors.count(); ++i) {
    double acc = 0.0;
    for (const Point& p : sensors.corners(i)) acc += evaluate(mesh, u, p.x, p.y);
    o[i] = acc / 4.0;
  }
  return o;
}

Eigen::MatrixXd functional_loads(const SensorArray& sensors,
                                 const TriMesh& mesh) {
  Eigen::MatrixXd L = Eigen::MatrixXd::Zero(sensors.count(), mesh.dof_count());
  for (int i = 0; i < sensors.count(); ++i) {
    for (const Point& p : sensors.corners(i)) {
      const auto loc = mesh.locate(p.x, p.y);
      for (int r = 0; r < 3; ++r) {
        const int I = mesh.interior_index(loc.verts[r]);
        if (I >= 0) L(i, I) += loc.lambda[r] / 4.0;
      }
    }
  }
  return L;
}

Eigen::MatrixXd riesz_lift(const SensorArray& sensors, const TruthSpace& space,
                           double tol) {
  const Eigen::MatrixXd L = functional_loads(sensors, space.mesh());
  Eigen::MatrixXd lifts(space.mesh().dof_count(), sensors.count());
  CgOptions opts;
  opts.tol = tol;
  for (int i = 0; i < sensors.count(); ++i)
    lifts.col(i) = solve_dirichlet(space.op(), L.row(i).transpose(), opts);
  return lifts;
}

namespace {

double gram_residual_of(const Eigen::MatrixXd& phi, const TruthSpace& space) {
  const Eigen::MatrixXd G = phi.transpose() * space.apply(phi);
  const Eigen::Index m = G.rows();
  return (G - Eigen::MatrixXd::Identity(m, m)).cwiseAbs().maxCoeff();
}

}  // namespace

MeasurementSpace orthonormalize(const Eigen::MatrixXd& lifts,
                                const TruthSpace& space, OrthoMethod method) {
  const Eigen::Index m = lifts.cols();
  const Eigen::MatrixXd G = lifts.transpose() * space.apply(lifts);

  MeasurementSpace ms;
  ms.mode = space.mode();
  ms.method = method;

  if (method == OrthoMethod::Svd) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(G);
    const Eigen::VectorXd ev = eig.eigenvalues();
    if (ev.minCoeff() <= 0.0 || ev.maxCoeff() / ev.minCoeff() > 1e12) {
      Eigen::Index worst;
      ev.minCoeff(&worst);
      throw DependentSensors("orthonormalize: numerically dependent lifts",
                             static_cast<int>(worst));
    }
    ms.C = ev.cwiseSqrt().cwiseInverse().asDiagonal() * eig.eigenvectors().transpose();
    ms.phi = lifts * ms.C.transpose();
    ms.gram_residual = gram_residual_of(ms.phi, space);
    return ms;
  }

  Eigen::LLT<Eigen::MatrixXd> llt(G);
  if (llt.info() != Eigen::Success)
    throw DependentSensors("orthonormalize: Gram Cholesky failed", -1);
  const Eigen::MatrixXd Lc = llt.matrixL();
  const double cond2 = (Lc.diagonal().maxCoeff() / Lc.diagonal().minCoeff());
  if (cond2 * cond2 > 1e12) {
    Eigen::Index worst;
    Lc.diagonal().minCoeff(&worst);
    throw DependentSensors("orthonormalize: sensors " + std::to_string(worst) +
                               " nearly dependent (Gram condition > 1e12)",
                           static_cast<int>(worst));
  }
  ms.C = Lc.triangularView<Eigen::Lower>().solve(Eigen::MatrixXd::Identity(m, m));
  ms.phi = lifts * ms.C.transpose();
  ms.gram_residual = gram_residual_of(ms.phi, space);

  // One refinement pass when roundoff from an ill-conditioned Gram leaks
  // through; keeps C lower triangular (product of lower triangulars).
  if (ms.gram_residual > 1e-12) {
    const Eigen::MatrixXd G2 = ms.phi.transpose() * space.apply(ms.phi);
    Eigen::LLT<Eigen::MatrixXd> llt2(G2);
    if (llt2.info() == Eigen::Success) {
      const Eigen::MatrixXd L2 = llt2.matrixL();
      const Eigen::MatrixXd C2 =
          L2.triangularView<Eigen::Lower>().solve(Eigen::MatrixXd::Identity(m, m));
      ms.C = C2 * ms.C;
      ms.phi = lifts * ms.C.transpose();
      ms.gram_residual = gram_residual_of(ms.phi, space);
    }
  }
  return ms;
}

Eigen::VectorXd measure_coords(const MeasurementSpace& space,
                               const Eigen::VectorXd& observations) {
  if (observations.size() != space.C.cols())
    throw std::invalid_argument("measure_coords: dimension mismatch");
  return space.C * observations;
}

Eigen::VectorXd measure_state(const MeasurementSpace& space,
                              const TruthSpace& truth, const FeFunction& u) {
  return space.phi.transpose() * (truth.op() * u);
}

FeFunction project_complement(const MeasurementSpace& space,
                              const TruthSpace& truth, const FeFunction& u) {
  if (u.size() != space.phi.rows())
    throw std::invalid_argument("project_complement: mesh mismatch");
  return u - space.phi * measure_state(space, truth, u);
}

}  // namespace sensorlift
