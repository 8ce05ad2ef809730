#pragma once

#include <array>
#include <vector>

#include <Eigen/Core>

namespace sensorlift {

struct Point {
  double x = 0.0;
  double y = 0.0;
};

// Uniform Friedrichs-Keller triangulation of the unit square: n x n cells,
// each split along the lower-left -> upper-right diagonal. Homogeneous
// Dirichlet conditions; FE functions live on the interior nodes only.
class TriMesh {
public:
  explicit TriMesh(int n);

  int n() const { return n_; }
  double h() const { return 1.0 / n_; }
  int node_count() const { return static_cast<int>(nodes_.size()); }
  int elem_count() const { return static_cast<int>(elems_.size()); }
  int dof_count() const { return n_dof_; }

  const std::vector<Point>& nodes() const { return nodes_; }
  const std::vector<std::array<int, 3>>& elements() const { return elems_; }

  // Interior-DOF index of a node, -1 on the boundary.
  int interior_index(int node) const { return interior_[node]; }
  int node_of_dof(int dof) const { return dof_node_[dof]; }

  int node_id(int i, int j) const { return j * (n_ + 1) + i; }

  // Barycenters of all elements, in element order.
  const std::vector<Point>& barycenters() const { return bary_; }

  // Element containing (x,y) plus barycentric weights of its three vertices.
  struct Location {
    std::array<int, 3> verts;
    std::array<double, 3> lambda;
  };
  Location locate(double x, double y) const;

private:
  int n_;
  int n_dof_;
  std::vector<Point> nodes_;
  std::vector<std::array<int, 3>> elems_;
  std::vector<int> interior_;
  std::vector<int> dof_node_;
  std::vector<Point> bary_;
};

// Interior nodal coefficients of a P1 function (zero Dirichlet trace implied).
using FeFunction = Eigen::VectorXd;

}  // namespace sensorlift
