#include "drmgfe/noise/covariance.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace drmgfe::noise {

std::string to_string(ModeFamily family) {
  switch (family) {
    case ModeFamily::InverseSquare:
      return "inverse-square";
    case ModeFamily::ExponentialTensor:
      return "exp-2d";
  }
  return "unknown";
}

std::string to_string(NoiseLoad load) { return load == NoiseLoad::Projected ? "projected" : "nodal"; }

std::optional<NoiseLoad> parse_noise_load(std::string_view name) {
  if (name == "projected") return NoiseLoad::Projected;
  if (name == "nodal") return NoiseLoad::Nodal;
  return std::nullopt;
}

double projection_factor(double theta) noexcept {
  if (theta == 0.0) return 1.0;
  const double s = std::sin(0.5 * theta);
  return 12.0 * s * s / (theta * theta * (2.0 + std::cos(theta)));
}

CovarianceModel::CovarianceModel(const fem::FemSpace& space, ModeSpec spec) : dim_(space.dim()), spec_(spec) {
  const int J = spec.modes_per_axis;
  if (J < 1) throw std::invalid_argument("covariance model needs at least one mode per axis");
  const bool family_ok = (dim_ == 1 && spec.family == ModeFamily::InverseSquare) ||
                         (dim_ == 2 && spec.family == ModeFamily::ExponentialTensor);
  if (!family_ok) {
    throw std::invalid_argument("mode family " + to_string(spec.family) + " is not defined in dimension " +
                                std::to_string(dim_));
  }

  const auto dofs = static_cast<Eigen::Index>(space.dof_count());
  const double pi = std::numbers::pi;
  const double sqrt2 = std::numbers::sqrt2;
  axis_factors_.resize(static_cast<std::size_t>(J));
  for (int j = 1; j <= J; ++j) {
    axis_factors_[j - 1] = spec.load == NoiseLoad::Projected ? projection_factor(j * pi * space.h()) : 1.0;
  }

  if (dim_ == 1) {
    eigenvalues_.resize(static_cast<std::size_t>(J));
    scaled_modes_.resize(dofs, J);
    for (int j = 1; j <= J; ++j) {
      const double q = 1.0 / (static_cast<double>(j) * j);
      eigenvalues_[j - 1] = q;
      const double amp = std::sqrt(q) * axis_factors_[j - 1] * sqrt2;
      for (Eigen::Index i = 0; i < dofs; ++i) {
        scaled_modes_(i, j - 1) = amp * std::sin(j * pi * space.mesh().dof_point(static_cast<std::size_t>(i)).x);
      }
    }
    trace_ = scaled_modes_.array().square().rowwise().sum().matrix();
    return;
  }

  const int n = space.mesh().cells_per_side();
  const double h = space.h();
  eigenvalues_.resize(static_cast<std::size_t>(J) * J);
  sqrt_eigenvalues_.resize(J, J);
  for (int j2 = 1; j2 <= J; ++j2) {
    for (int j1 = 1; j1 <= J; ++j1) {
      // sqrt(q) phi = exp(-(j1^2 + j2^2) / 400) sin sin
      const double q = 0.25 * std::exp(-(static_cast<double>(j1) * j1 + static_cast<double>(j2) * j2) / 200.0);
      eigenvalues_[static_cast<std::size_t>((j2 - 1) * J + (j1 - 1))] = q;
      sqrt_eigenvalues_(j1 - 1, j2 - 1) = std::sqrt(q);
    }
  }
  axis_modes_.resize(n - 1, J);
  for (int j = 1; j <= J; ++j) {
    const double amp = axis_factors_[j - 1] * sqrt2;
    for (int a = 1; a < n; ++a) axis_modes_(a - 1, j - 1) = amp * std::sin(j * pi * a * h);
  }
  // sum_k q_k phi_k^2 = sum_{j1,j2} q_{j1 j2} s_{j1}(x)^2 s_{j2}(y)^2
  const Eigen::MatrixXd s2 = axis_modes_.array().square().matrix();
  const Eigen::MatrixXd q = sqrt_eigenvalues_.array().square().matrix();
  const Eigen::MatrixXd grid = s2 * q * s2.transpose();
  trace_ = Eigen::Map<const fem::StateVector>(grid.data(), grid.size());
}

std::array<int, 2> CovarianceModel::mode_index(std::size_t mode) const noexcept {
  const auto J = static_cast<std::size_t>(spec_.modes_per_axis);
  if (dim_ == 1) return {static_cast<int>(mode) + 1, 0};
  return {static_cast<int>(mode % J) + 1, static_cast<int>(mode / J) + 1};
}

double CovarianceModel::eigenfunction(std::size_t mode, fem::Point p) const noexcept {
  const double pi = std::numbers::pi;
  const auto [j1, j2] = mode_index(mode);
  if (dim_ == 1) return std::numbers::sqrt2 * std::sin(j1 * pi * p.x);
  return 2.0 * std::sin(j1 * pi * p.x) * std::sin(j2 * pi * p.y);
}

fem::StateVector CovarianceModel::field_at_nodes(const Eigen::VectorXd& increments) const {
  if (static_cast<std::size_t>(increments.size()) != mode_count()) {
    throw std::invalid_argument("got " + std::to_string(increments.size()) + " mode increments for a model with " +
                                std::to_string(mode_count()) + " modes");
  }
  if (dim_ == 1) return scaled_modes_ * increments;

  const auto J = sqrt_eigenvalues_.rows();
  const Eigen::MatrixXd weights =
      sqrt_eigenvalues_.cwiseProduct(Eigen::Map<const Eigen::MatrixXd>(increments.data(), J, J));
  const Eigen::MatrixXd grid = axis_modes_ * weights * axis_modes_.transpose();
  return Eigen::Map<const fem::StateVector>(grid.data(), grid.size());
}

}  // namespace drmgfe::noise
