#include "sensorlift/fem.hpp"

#include <cmath>
#include <vector>

#include "sensorlift/errors.hpp"

namespace sensorlift {

namespace {

struct LocalGeom {
  double grads[3][2];
  double area;
};

LocalGeom local_geom(const TriMesh& mesh, const std::array<int, 3>& tri) {
  const auto& nd = mesh.nodes();
  const Point& p0 = nd[tri[0]];
  const Point& p1 = nd[tri[1]];
  const Point& p2 = nd[tri[2]];
  const double det = (p1.x - p0.x) * (p2.y - p0.y) - (p1.y - p0.y) * (p2.x - p0.x);
  LocalGeom g;
  g.area = std::abs(det) / 2.0;
  g.grads[0][0] = (p1.y - p2.y) / det;
  g.grads[0][1] = (p2.x - p1.x) / det;
  g.grads[1][0] = (p2.y - p0.y) / det;
  g.grads[1][1] = (p0.x - p2.x) / det;
  g.grads[2][0] = (p0.y - p1.y) / det;
  g.grads[2][1] = (p1.x - p0.x) / det;
  return g;
}

SparseSymMatrix assemble(const TriMesh& mesh, const Eigen::VectorXd* a_elem,
                         bool mass) {
  const int n_dof = mesh.dof_count();
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(mesh.elem_count() * 9);
  for (int e = 0; e < mesh.elem_count(); ++e) {
    const auto& tri = mesh.elements()[e];
    const LocalGeom g = local_geom(mesh, tri);
    double a = 1.0;
    if (a_elem) {
      a = (*a_elem)[e];
      if (!(a > 0.0))
        throw DegenerateCoefficient("assemble_stiffness: non-positive diffusion value at element " +
                                    std::to_string(e));
    }
    for (int r = 0; r < 3; ++r) {
      const int I = mesh.interior_index(tri[r]);
      if (I < 0) continue;
      for (int c = 0; c < 3; ++c) {
        const int J = mesh.interior_index(tri[c]);
        if (J < 0) continue;
        double v;
        if (mass) {
          v = g.area / 12.0 * (r == c ? 2.0 : 1.0);
        } else {
          v = a * g.area *
              (g.grads[r][0] * g.grads[c][0] + g.grads[r][1] * g.grads[c][1]);
        }
        trip.emplace_back(I, J, v);
      }
    }
  }
  SparseSymMatrix A(n_dof, n_dof);
  A.setFromTriplets(trip.begin(), trip.end());
  A.makeCompressed();
  return A;
}

}  // namespace

SparseSymMatrix assemble_stiffness(const TriMesh& mesh,
                                   const Eigen::VectorXd& a_elem) {
  if (a_elem.size() != mesh.elem_count())
    throw std::invalid_argument("assemble_stiffness: one value per element required");
  return assemble(mesh, &a_elem, false);
}

SparseSymMatrix assemble_stiffness(const TriMesh& mesh) {
  return assemble(mesh, nullptr, false);
}

SparseSymMatrix assemble_mass(const TriMesh& mesh) {
  return assemble(mesh, nullptr, true);
}

Eigen::VectorXd assemble_load_unit(const TriMesh& mesh) {
  Eigen::VectorXd b = Eigen::VectorXd::Zero(mesh.dof_count());
  for (int e = 0; e < mesh.elem_count(); ++e) {
    const auto& tri = mesh.elements()[e];
    const double area = local_geom(mesh, tri).area;
    for (int r = 0; r < 3; ++r) {
      const int I = mesh.interior_index(tri[r]);
      if (I >= 0) b[I] += area / 3.0;
    }
  }
  return b;
}

FeFunction solve_dirichlet(const SparseSymMatrix& A, const Eigen::VectorXd& f,
                           const CgOptions& opts) {
  const Eigen::Index n = A.rows();
  if (f.size() != n) throw std::invalid_argument("solve_dirichlet: size mismatch");
  const double bnorm = f.norm();
  FeFunction x = FeFunction::Zero(n);
  if (bnorm == 0.0) return x;

  Eigen::VectorXd invdiag;
  if (opts.jacobi) invdiag = A.diagonal().cwiseInverse();

  Eigen::VectorXd r = f;
  Eigen::VectorXd z = opts.jacobi ? Eigen::VectorXd(invdiag.cwiseProduct(r)) : r;
  Eigen::VectorXd p = z;
  Eigen::VectorXd Ap(n);
  double rz = r.dot(z);
  const long cap = opts.max_iter > 0 ? opts.max_iter : 10 * static_cast<long>(n);
  double rel = r.norm() / bnorm;
  for (long it = 0; it < cap && rel > opts.tol; ++it) {
    Ap.noalias() = A * p;
    const double alpha = rz / p.dot(Ap);
    x += alpha * p;
    r -= alpha * Ap;
    rel = r.norm() / bnorm;
    if (rel <= opts.tol) break;
    if (opts.jacobi)
      z = invdiag.cwiseProduct(r);
    else
      z = r;
    const double rz_new = r.dot(z);
    p = z + (rz_new / rz) * p;
    rz = rz_new;
  }
  if (rel > opts.tol)
    throw SolverError("solve_dirichlet: CG stalled at relative residual " +
                          std::to_string(rel),
                      rel);
  return x;
}

TruthSpace::TruthSpace(const TriMesh& mesh, InnerProduct mode)
    : mesh_(&mesh), mode_(mode) {
  op_ = (mode == InnerProduct::H1Seminorm) ? assemble_stiffness(mesh)
                                           : assemble_mass(mesh);
}

double TruthSpace::dot(const FeFunction& u, const FeFunction& v) const {
  if (u.size() != op_.rows() || v.size() != op_.rows())
    throw std::invalid_argument("TruthSpace::dot: mesh mismatch");
  return u.dot(op_ * v);
}

double TruthSpace::norm(const FeFunction& u) const {
  return std::sqrt(std::max(0.0, norm2(u)));
}

double inner_product(const TriMesh& mesh, const FeFunction& u,
                     const FeFunction& v, InnerProduct mode) {
  if (u.size() != mesh.dof_count() || v.size() != mesh.dof_count())
    throw std::invalid_argument("inner_product: mesh mismatch");
  const SparseSymMatrix A = (mode == InnerProduct::H1Seminorm)
                                ? assemble_stiffness(mesh)
                                : assemble_mass(mesh);
  return u.dot(A * v);
}

double evaluate(const TriMesh& mesh, const FeFunction& u, double x, double y) {
  const auto loc = mesh.locate(x, y);
  double v = 0.0;
  for (int r = 0; r < 3; ++r) {
    const int I = mesh.interior_index(loc.verts[r]);
    if (I >= 0) v += loc.lambda[r] * u[I];
  }
  return v;
}

}  // namespace sensorlift
