#include "sensorlift/mesh.hpp"

#include <algorithm>
#include <stdexcept>

namespace sensorlift {

TriMesh::TriMesh(int n) : n_(n) {
  if (n < 2) throw std::invalid_argument("TriMesh: n must be >= 2");
  const int np = n + 1;
  nodes_.reserve(np * np);
  for (int j = 0; j < np; ++j)
    for (int i = 0; i < np; ++i)
      nodes_.push_back({static_cast<double>(i) / n, static_cast<double>(j) / n});

  elems_.reserve(2 * n * n);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      const int v00 = node_id(i, j);
      const int v10 = node_id(i + 1, j);
      const int v01 = node_id(i, j + 1);
      const int v11 = node_id(i + 1, j + 1);
      elems_.push_back({v00, v10, v11});  // lower (xi >= eta)
      elems_.push_back({v00, v11, v01});  // upper
    }
  }

  interior_.assign(nodes_.size(), -1);
  n_dof_ = 0;
  for (std::size_t id = 0; id < nodes_.size(); ++id) {
    const auto& p = nodes_[id];
    if (p.x > 0.0 && p.x < 1.0 && p.y > 0.0 && p.y < 1.0) {
      interior_[id] = n_dof_++;
      dof_node_.push_back(static_cast<int>(id));
    }
  }

  bary_.reserve(elems_.size());
  for (const auto& t : elems_) {
    Point b{(nodes_[t[0]].x + nodes_[t[1]].x + nodes_[t[2]].x) / 3.0,
            (nodes_[t[0]].y + nodes_[t[1]].y + nodes_[t[2]].y) / 3.0};
    bary_.push_back(b);
  }
}

TriMesh::Location TriMesh::locate(double x, double y) const {
  if (x < 0.0 || x > 1.0 || y < 0.0 || y > 1.0)
    throw std::invalid_argument("TriMesh::locate: point outside [0,1]^2");
  const int i = std::min(static_cast<int>(x * n_), n_ - 1);
  const int j = std::min(static_cast<int>(y * n_), n_ - 1);
  const double xi = x * n_ - i;
  const double eta = y * n_ - j;
  const int v00 = node_id(i, j);
  const int v10 = node_id(i + 1, j);
  const int v01 = node_id(i, j + 1);
  const int v11 = node_id(i + 1, j + 1);
  Location loc;
  if (xi >= eta) {
    loc.verts = {v00, v10, v11};
    loc.lambda = {1.0 - xi, xi - eta, eta};
  } else {
    loc.verts = {v00, v11, v01};
    loc.lambda = {1.0 - eta, xi, eta - xi};
  }
  return loc;
}

}  // namespace sensorlift
