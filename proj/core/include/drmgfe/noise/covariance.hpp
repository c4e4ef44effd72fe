#pragma once

#include <Eigen/Core>

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "drmgfe/fem/fem_space.hpp"
#include "drmgfe/noise/path_context.hpp"

namespace drmgfe::noise {

enum class ModeFamily {
  /// 1D: q_j = j^-2, phi_j = sqrt(2) sin(j pi x), j = 1..J.
  InverseSquare,
  /// 2D: q = exp(-(j1^2 + j2^2) / 200) / 4, phi = 2 sin(j1 pi x) sin(j2 pi y),
  /// j1, j2 = 1..J; the factor 1/4 makes sqrt(q) phi the unnormalized
  /// sqrt(exp(...)) sin sin of the model problem.
  ExponentialTensor,
};

/// How a mode enters the discrete noise field.
enum class NoiseLoad {
  /// Per-axis L2 projection onto P1: the nodal sine scaled by
  /// projection_factor(j pi h). Exactly P_h in 1D, the tensor of the 1D
  /// projections in 2D. Modes above the mesh Nyquist index cannot fold onto
  /// smooth discrete modes.
  Projected,
  /// Plain nodal values of the sine (aliases modes j > 1/h).
  Nodal,
};

struct ModeSpec {
  ModeFamily family = ModeFamily::InverseSquare;
  int modes_per_axis = 100;
  NoiseLoad load = NoiseLoad::Projected;

  static ModeSpec default_for(int dim) {
    return dim == 1 ? ModeSpec{ModeFamily::InverseSquare, 100} : ModeSpec{ModeFamily::ExponentialTensor, 32};
  }
};

std::string to_string(ModeFamily family);
std::string to_string(NoiseLoad load);
std::optional<NoiseLoad> parse_noise_load(std::string_view name);

/// 6 (1 - cos t) / (t^2 (2 + cos t)): ratio between the L2 projection of
/// sin(j pi x) onto uniform P1 and its nodal values, t = j pi h. 1 at t = 0.
double projection_factor(double theta) noexcept;

/// Truncated Karhunen-Loeve model of a Q-Wiener process, tabulated on the
/// interior nodes of one FemSpace.
///
/// Mode k of the tensor family has (j1, j2) = (k % J + 1, k / J + 1), so j1
/// runs fastest like the x index of the mesh.
class CovarianceModel {
 public:
  /// Throws std::invalid_argument if J < 1 or the family does not match the
  /// dimension of the space.
  CovarianceModel(const fem::FemSpace& space, ModeSpec spec);

  int dim() const noexcept { return dim_; }
  const ModeSpec& spec() const noexcept { return spec_; }
  std::size_t mode_count() const noexcept { return eigenvalues_.size(); }
  std::size_t dof_count() const noexcept { return static_cast<std::size_t>(trace_.size()); }
  std::span<const double> eigenvalues() const noexcept { return eigenvalues_; }
  std::array<int, 2> mode_index(std::size_t mode) const noexcept;

  /// Analytic eigenfunction phi_k at a point (unit L2(D) norm).
  double eigenfunction(std::size_t mode, fem::Point p) const noexcept;

  /// Per-axis factor applied to mode j (index j - 1); all ones for Nodal.
  std::span<const double> axis_factors() const noexcept { return axis_factors_; }

  /// Nodal sum_k q_k (c_k phi_k(x_i))^2 with c_k the load factors: the
  /// compensator of the Milstein bracket.
  const fem::StateVector& trace_field() const noexcept { return trace_; }

  /// Nodal W increment sum_k sqrt(q_k) c_k phi_k(x_i) dbeta_k.
  fem::StateVector field_at_nodes(const Eigen::VectorXd& increments) const;
  fem::StateVector field_at_nodes(const ModeIncrements& increments) const {
    return field_at_nodes(increments.values());
  }

 private:
  int dim_;
  ModeSpec spec_;
  std::vector<double> eigenvalues_;
  std::vector<double> axis_factors_;
  fem::StateVector trace_;
  // 1D: dofs x J table of sqrt(q_j) c_j phi_j(x_i).
  Eigen::MatrixXd scaled_modes_;
  // 2D: (n-1) x J table of c_j sqrt(2) sin(j pi x_a), and J x J table of sqrt(q).
  Eigen::MatrixXd axis_modes_;
  Eigen::MatrixXd sqrt_eigenvalues_;
};

}  // namespace drmgfe::noise
