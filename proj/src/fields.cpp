#include "sensorlift/fields.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

#include <fftw3.h>

#include "sensorlift/errors.hpp"

namespace sensorlift {

ParamS1 sample_param_s1(Rng& rng) {
  std::uniform_real_distribution<double> u(-0.5, 0.5);
  ParamS1 p;
  for (int j = 0; j < 16; ++j) p.y[j] = u(rng);
  return p;
}

int checkerboard_cell(double x1, double x2) {
  const int i = std::min(static_cast<int>(x1 * 4.0), 3);
  const int j = std::min(static_cast<int>(x2 * 4.0), 3);
  return 4 * j + i;
}

double eval_s1(const ParamS1& p, double x1, double x2) {
  return 1.0 + p.y[checkerboard_cell(x1, x2)];
}

Eigen::VectorXd s1_element_coefficients(const ParamS1& p, const TriMesh& mesh) {
  Eigen::VectorXd a(mesh.elem_count());
  const auto& bary = mesh.barycenters();
  for (int e = 0; e < mesh.elem_count(); ++e)
    a[e] = eval_s1(p, bary[e].x, bary[e].y);
  return a;
}

void MaternSpec::validate() const {
  if (!(sigma2 > 0.0) || !(nu > 0.5) || !(lam1 > 0.0) || !(lam2 > 0.0) ||
      !(a1 > 0.0) || !(a0 >= 0.0))
    throw std::invalid_argument("MaternSpec: invalid parameters");
}

double matern_cov(const MaternSpec& spec, Point a, Point b) {
  const double dx = (a.x - b.x) / spec.lam1;
  const double dy = (a.y - b.y) / spec.lam2;
  const double r = std::sqrt(dx * dx + dy * dy);
  if (r == 0.0) return spec.sigma2;
  const double t = 2.0 * std::sqrt(spec.nu) * r;
  return spec.sigma2 * std::pow(2.0, 1.0 - spec.nu) / std::tgamma(spec.nu) *
         std::pow(t, spec.nu) * std::cyl_bessel_k(spec.nu, t);
}

namespace {

// Eigenvalues of the block-circulant embedding = 2D DFT of the kernel on the
// periodic m x m grid with wrap distances.
Eigen::VectorXd embedding_eigs(const MaternSpec& spec, int m, double h) {
  std::vector<std::complex<double>> ker(static_cast<std::size_t>(m) * m);
  for (int j = 0; j < m; ++j) {
    const double dj = std::min(j, m - j) * h;
    for (int i = 0; i < m; ++i) {
      const double di = std::min(i, m - i) * h;
      ker[static_cast<std::size_t>(j) * m + i] =
          matern_cov(spec, {0.0, 0.0}, {di, dj});
    }
  }
  std::vector<std::complex<double>> out(ker.size());
  fftw_plan plan = fftw_plan_dft_2d(
      m, m, reinterpret_cast<fftw_complex*>(ker.data()),
      reinterpret_cast<fftw_complex*>(out.data()), FFTW_FORWARD, FFTW_ESTIMATE);
  fftw_execute(plan);
  fftw_destroy_plan(plan);
  Eigen::VectorXd eigs(static_cast<Eigen::Index>(out.size()));
  for (std::size_t i = 0; i < out.size(); ++i) eigs[static_cast<Eigen::Index>(i)] = out[i].real();
  return eigs;
}

}  // namespace

CirculantSampler::CirculantSampler(const MaternSpec& spec, const TriMesh& mesh) {
  spec.validate();
  grid_ = mesh.n() + 1;
  const double h = mesh.h();
  int m = 2 * grid_;  // twice the physical extent
  Eigen::VectorXd eigs;
  for (int attempt = 0; attempt <= 3; ++attempt) {
    eigs = embedding_eigs(spec, m, h);
    min_eig_ = eigs.minCoeff();
    const double max_eig = eigs.maxCoeff();
    if (min_eig_ >= -1e-8 * max_eig) {
      m_ = m;
      sqrt_eigs_ = eigs.cwiseMax(0.0).cwiseSqrt() / m;
      return;
    }
    if (attempt < 3) m *= 2;
  }
  throw NonpositiveEmbedding(
      "CirculantSampler: embedding not positive semidefinite up to padding " +
          std::to_string(m) + "; enlarge the periodic grid further",
      2 * m);
}

GridField CirculantSampler::sample(Rng& rng) const {
  const std::size_t total = static_cast<std::size_t>(m_) * m_;
  std::vector<std::complex<double>> eps(total);
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (std::size_t i = 0; i < total; ++i) {
    const double re = gauss(rng);
    const double im = gauss(rng);
    eps[i] = std::complex<double>(sqrt_eigs_[static_cast<Eigen::Index>(i)] * re,
                                  sqrt_eigs_[static_cast<Eigen::Index>(i)] * im);
  }
  std::vector<std::complex<double>> out(total);
  fftw_plan plan = fftw_plan_dft_2d(
      m_, m_, reinterpret_cast<fftw_complex*>(eps.data()),
      reinterpret_cast<fftw_complex*>(out.data()), FFTW_FORWARD, FFTW_ESTIMATE);
  fftw_execute(plan);
  fftw_destroy_plan(plan);
  GridField z(grid_ * grid_);
  for (int j = 0; j < grid_; ++j)
    for (int i = 0; i < grid_; ++i)
      z[j * grid_ + i] = out[static_cast<std::size_t>(j) * m_ + i].real();
  return z;
}

GridField sample_grf_circulant(const MaternSpec& spec, const TriMesh& mesh,
                               Rng& rng) {
  return CirculantSampler(spec, mesh).sample(rng);
}

Eigen::VectorXd s2_element_coefficients(const MaternSpec& spec,
                                        const GridField& z,
                                        const TriMesh& mesh) {
  if (z.size() != mesh.node_count())
    throw std::invalid_argument("s2_element_coefficients: field/mesh mismatch");
  Eigen::VectorXd a(mesh.elem_count());
  for (int e = 0; e < mesh.elem_count(); ++e) {
    const auto& tri = mesh.elements()[e];
    const double zbar = (z[tri[0]] + z[tri[1]] + z[tri[2]]) / 3.0;
    a[e] = spec.a0 + spec.a1 * std::exp(zbar);
  }
  return a;
}

}  // namespace sensorlift
