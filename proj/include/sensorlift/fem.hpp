#pragma once

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include "sensorlift/mesh.hpp"

namespace sensorlift {

// Symmetric sparse operator on the interior DOFs (CSR via Eigen).
using SparseSymMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;

enum class InnerProduct { H1Seminorm, L2 };

// A_ij = sum_T a_T int_T grad(lam_i).grad(lam_j); a_elem one strictly
// positive value per element. Throws DegenerateCoefficient otherwise.
SparseSymMatrix assemble_stiffness(const TriMesh& mesh,
                                   const Eigen::VectorXd& a_elem);
SparseSymMatrix assemble_stiffness(const TriMesh& mesh);  // a == 1

// Consistent P1 mass matrix M_ij = int lam_i lam_j.
SparseSymMatrix assemble_mass(const TriMesh& mesh);

// Load vector for f == 1 (area/3 per incident element).
Eigen::VectorXd assemble_load_unit(const TriMesh& mesh);

struct CgOptions {
  double tol = 1e-10;         // relative residual ||Ax-b||/||b||
  long max_iter = 0;          // 0 -> 10 * N_h
  bool jacobi = false;        // diagonal preconditioning
};

// Plain conjugate gradients from x0 = 0. Throws SolverError (with the last
// relative residual) if the cap is hit.
FeFunction solve_dirichlet(const SparseSymMatrix& A, const Eigen::VectorXd& f,
                           const CgOptions& opts = {});

// Truth space U_h with its inner-product operator (stiffness for the H1
// seminorm, mass for L2). Everything downstream measures in this metric.
class TruthSpace {
public:
  TruthSpace(const TriMesh& mesh, InnerProduct mode);

  const TriMesh& mesh() const { return *mesh_; }
  InnerProduct mode() const { return mode_; }
  const SparseSymMatrix& op() const { return op_; }

  double dot(const FeFunction& u, const FeFunction& v) const;
  double norm2(const FeFunction& u) const { return dot(u, u); }
  double norm(const FeFunction& u) const;

  // Ku (or Mu); the workhorse for Gram matrices.
  Eigen::MatrixXd apply(const Eigen::MatrixXd& U) const { return op_ * U; }

private:
  const TriMesh* mesh_;
  InnerProduct mode_;
  SparseSymMatrix op_;
};

double inner_product(const TriMesh& mesh, const FeFunction& u,
                     const FeFunction& v, InnerProduct mode);

// Nodal P1 interpolant of f restricted to the interior DOFs.
template <typename F>
FeFunction interpolate(const TriMesh& mesh, F&& f) {
  FeFunction u(mesh.dof_count());
  for (int d = 0; d < mesh.dof_count(); ++d) {
    const auto& p = mesh.nodes()[mesh.node_of_dof(d)];
    u[d] = f(p.x, p.y);
  }
  return u;
}

// Value of the P1 function at an arbitrary point (boundary nodes read 0).
double evaluate(const TriMesh& mesh, const FeFunction& u, double x, double y);

}  // namespace sensorlift
