#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace drmgfe::fem {

struct Point {
  double x = 0.0;
  double y = 0.0;
};

/// Uniform mesh of the unit interval or the unit square.
///
/// Nodes are numbered lexicographically, x fastest: node (i, j) has index
/// j * (n + 1) + i and coordinates (i h, j h). In 2D every square cell is
/// split along its (+1, +1) diagonal into two triangles. Boundary nodes carry
/// no degree of freedom (homogeneous Dirichlet); interior dofs are numbered in
/// the same lexicographic order.
class Mesh {
 public:
  static constexpr std::int64_t kBoundary = -1;

  /// Throws std::invalid_argument unless dim is 1 or 2 and cells_per_side >= 2.
  static Mesh build(int dim, int cells_per_side);

  int dim() const noexcept { return dim_; }
  int cells_per_side() const noexcept { return cells_; }
  double h() const noexcept { return 1.0 / cells_; }

  std::size_t node_count() const noexcept { return nodes_.size(); }
  std::size_t dof_count() const noexcept { return node_of_dof_.size(); }
  std::size_t element_count() const noexcept {
    return element_nodes_.size() / nodes_per_element();
  }
  std::size_t nodes_per_element() const noexcept {
    return static_cast<std::size_t>(dim_) + 1;
  }

  std::span<const Point> nodes() const noexcept { return nodes_; }
  /// Dof index of every node, or kBoundary.
  std::span<const std::int64_t> dof_of_node() const noexcept { return dof_of_node_; }
  std::span<const std::size_t> node_of_dof() const noexcept { return node_of_dof_; }
  std::span<const std::size_t> element(std::size_t e) const noexcept {
    return {element_nodes_.data() + e * nodes_per_element(), nodes_per_element()};
  }

  Point dof_point(std::size_t dof) const noexcept { return nodes_[node_of_dof_[dof]]; }

  /// Node index of lattice position (i, j); j is ignored in 1D.
  std::size_t node_index(int i, int j = 0) const noexcept {
    return static_cast<std::size_t>(j) * static_cast<std::size_t>(cells_ + 1) +
           static_cast<std::size_t>(i);
  }

 private:
  Mesh() = default;

  int dim_ = 1;
  int cells_ = 0;
  std::vector<Point> nodes_;
  std::vector<std::int64_t> dof_of_node_;
  std::vector<std::size_t> node_of_dof_;
  std::vector<std::size_t> element_nodes_;
};

}  // namespace drmgfe::fem
