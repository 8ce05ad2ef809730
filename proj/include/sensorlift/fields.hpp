#pragma once

#include <Eigen/Core>

#include "sensorlift/mesh.hpp"
#include "sensorlift/rng.hpp"

namespace sensorlift {

// Scenario (S1): a(x;y) = 1 + sum_j y_j chi_j(x) on the 4x4 checkerboard,
// y_j ~ U[-1/2, 1/2].
struct ParamS1 {
  Eigen::Matrix<double, 16, 1> y;
};

ParamS1 sample_param_s1(Rng& rng);

// Row-major cell index of the 4x4 partition: j = 4*floor(4*x2) + floor(4*x1),
// clamped on the outer boundary.
int checkerboard_cell(double x1, double x2);

double eval_s1(const ParamS1& p, double x1, double x2);

// Per-element diffusion values at the barycenters.
Eigen::VectorXd s1_element_coefficients(const ParamS1& p, const TriMesh& mesh);

// Scenario (S2): a = a0 + a1 exp(z), z a zero-mean stationary Gaussian field
// with Matern covariance. Defaults calibrated against the reproduction bands.
struct MaternSpec {
  double sigma2 = 0.5;
  double nu = 1.0;
  double lam1 = 0.05;
  double lam2 = 0.05;
  double a0 = 0.0;
  double a1 = 1.0;

  void validate() const;
};

// c(x,x') = sigma^2 2^{1-nu}/Gamma(nu) (2 sqrt(nu) r)^nu K_nu(2 sqrt(nu) r),
// r the anisotropically scaled distance; returns sigma^2 at r = 0.
double matern_cov(const MaternSpec& spec, Point a, Point b);

// One value per mesh node (row-major j*(n+1)+i).
using GridField = Eigen::VectorXd;

// Samples the field at the mesh nodes by 2D block-circulant embedding of the
// covariance on an enlarged periodic grid (eigenvalues via FFT, complex
// Gaussian synthesis, restriction). Negative embedding eigenvalues beyond
// 1e-8*max trigger up to 3 padding doublings, then NonpositiveEmbedding.
class CirculantSampler {
public:
  CirculantSampler(const MaternSpec& spec, const TriMesh& mesh);

  GridField sample(Rng& rng) const;
  int embedding_size() const { return m_; }
  double min_eigenvalue() const { return min_eig_; }

private:
  int grid_;   // nodes per side, n+1
  int m_;      // periodic grid size
  double min_eig_;
  Eigen::VectorXd sqrt_eigs_;  // m_*m_ values, sqrt(max(lambda,0))/m_
};

GridField sample_grf_circulant(const MaternSpec& spec, const TriMesh& mesh,
                               Rng& rng);

// a0 + a1 * exp(mean of the three vertex values of z) per element.
Eigen::VectorXd s2_element_coefficients(const MaternSpec& spec,
                                        const GridField& z,
                                        const TriMesh& mesh);

}  // namespace sensorlift
