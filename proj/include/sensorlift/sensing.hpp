#pragma once

#include <vector>

#include <Eigen/Core>

#include "sensorlift/fem.hpp"
#include "sensorlift/mesh.hpp"
#include "sensorlift/rng.hpp"

namespace sensorlift {

// m sensors; each reads the mean of the state at the four corners of a small
// square of side delta around its center.
struct SensorArray {
  std::vector<Point> centers;
  double delta = 0.001;

  int count() const { return static_cast<int>(centers.size()); }
  std::array<Point, 4> corners(int i) const;
};

// m = 16 -> checkerboard cell centers ((2i-1)/8, (2j-1)/8); m = 49 -> the
// interior grid (i/8, j/8), i,j = 1..7. Other m: use place_grid/place_random.
SensorArray place_uniform(int m);

// q x q sensors at (i/(q+1), j/(q+1)).
SensorArray place_grid(int q);

// m i.i.d. uniform centers in [0.05, 0.95]^2.
SensorArray place_random(int m, Rng& rng);

// o_i = l_i(u): four-point average of the P1 interpolant.
Eigen::VectorXd apply_functionals(const SensorArray& sensors,
                                  const TriMesh& mesh, const FeFunction& u);

// Rows = the functionals applied to every interior basis function; these are
// the Riesz right-hand sides of eq-style (phi_i, v)_U = l_i(v).
Eigen::MatrixXd functional_loads(const SensorArray& sensors,
                                 const TriMesh& mesh);

// phi~_i: solve K phi = load_i (H1 mode) or M phi = load_i (L2 mode).
Eigen::MatrixXd riesz_lift(const SensorArray& sensors, const TruthSpace& space,
                           double tol = 1e-10);

enum class OrthoMethod { Cholesky, Svd };

// U-orthonormal measurement basis Phi (columns) with the change-of-basis
// C Phi~ = Phi. Cholesky keeps C lower triangular with positive diagonal;
// the SVD variant is exposed for reproduction studies.
struct MeasurementSpace {
  Eigen::MatrixXd phi;   // N_h x m
  Eigen::MatrixXd C;     // m x m
  InnerProduct mode;
  OrthoMethod method;
  double gram_residual;

  int count() const { return static_cast<int>(phi.cols()); }
};

MeasurementSpace orthonormalize(const Eigen::MatrixXd& lifts,
                                const TruthSpace& space,
                                OrthoMethod method = OrthoMethod::Cholesky);

// w = C o; identical to ((u,phi_1)_U, ..., (u,phi_m)_U) for o = l(u).
Eigen::VectorXd measure_coords(const MeasurementSpace& space,
                               const Eigen::VectorXd& observations);

// w straight from the state: Phi^T K u.
Eigen::VectorXd measure_state(const MeasurementSpace& space,
                              const TruthSpace& truth, const FeFunction& u);

// z = (I - P_W) u.
FeFunction project_complement(const MeasurementSpace& space,
                              const TruthSpace& truth, const FeFunction& u);

}  // namespace sensorlift
