#include "drmgfe/fem/mesh.hpp"

#include <stdexcept>
#include <string>

namespace drmgfe::fem {

Mesh Mesh::build(int dim, int cells_per_side) {
  if (dim != 1 && dim != 2) {
    throw std::invalid_argument("mesh dimension must be 1 or 2, got " + std::to_string(dim));
  }
  if (cells_per_side < 2) {
    throw std::invalid_argument("cells_per_side must be >= 2 (no interior node otherwise), got " +
                                std::to_string(cells_per_side));
  }

  Mesh mesh;
  mesh.dim_ = dim;
  mesh.cells_ = cells_per_side;
  const int n = cells_per_side;
  const double h = 1.0 / n;
  const int rows = dim == 1 ? 1 : n + 1;

  mesh.nodes_.reserve(static_cast<std::size_t>(rows) * (n + 1));
  mesh.dof_of_node_.reserve(mesh.nodes_.capacity());
  for (int j = 0; j < rows; ++j) {
    for (int i = 0; i <= n; ++i) {
      mesh.nodes_.push_back({i * h, dim == 1 ? 0.0 : j * h});
      const bool boundary = i == 0 || i == n || (dim == 2 && (j == 0 || j == n));
      if (boundary) {
        mesh.dof_of_node_.push_back(kBoundary);
      } else {
        mesh.dof_of_node_.push_back(static_cast<std::int64_t>(mesh.node_of_dof_.size()));
        mesh.node_of_dof_.push_back(mesh.nodes_.size() - 1);
      }
    }
  }

  if (dim == 1) {
    mesh.element_nodes_.reserve(2 * static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
      mesh.element_nodes_.push_back(mesh.node_index(i));
      mesh.element_nodes_.push_back(mesh.node_index(i + 1));
    }
  } else {
    mesh.element_nodes_.reserve(6 * static_cast<std::size_t>(n) * n);
    for (int j = 0; j < n; ++j) {
      for (int i = 0; i < n; ++i) {
        const auto a = mesh.node_index(i, j);
        const auto b = mesh.node_index(i + 1, j);
        const auto c = mesh.node_index(i + 1, j + 1);
        const auto d = mesh.node_index(i, j + 1);
        // counter-clockwise, split along the (+1, +1) diagonal a-c
        for (auto v : {a, b, c, a, c, d}) mesh.element_nodes_.push_back(v);
      }
    }
  }
  return mesh;
}

}  // namespace drmgfe::fem
