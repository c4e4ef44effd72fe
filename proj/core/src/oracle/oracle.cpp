#include "drmgfe/oracle/oracle.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "drmgfe/noise/path_context.hpp"

namespace drmgfe::oracle {

namespace {
constexpr double kPi = std::numbers::pi;
}

double exact_linear_heat(double t, double x) {
  return std::exp(-4.0 * kPi * kPi * t) * std::sin(2.0 * kPi * x);
}

double exact_linear_heat_2d(double t, double x, double y) {
  return std::exp(-8.0 * kPi * kPi * t) * std::sin(2.0 * kPi * x) * std::sin(2.0 * kPi * y);
}

double fem_eigenvalue_1d(double h, int j) {
  const double cells = std::round(1.0 / h);
  if (j < 1 || j > static_cast<int>(cells) - 1) throw std::out_of_range("mode index outside 1..1/h-1");
  const double c = std::cos(j * kPi * h);
  return 6.0 / (h * h) * (1.0 - c) / (2.0 + c);
}

std::vector<double> dense_generalized_eigenvalues(const Eigen::MatrixXd& stiffness, const Eigen::MatrixXd& mass) {
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> solver(stiffness, mass, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw std::runtime_error("dense generalized eigensolve failed");
  std::vector<double> out(solver.eigenvalues().data(), solver.eigenvalues().data() + solver.eigenvalues().size());
  std::sort(out.begin(), out.end());
  return out;
}

OracleResult covariance_empirical_check(const noise::CovarianceModel& cov, std::span<const double> expected_q,
                                        std::uint64_t seed, double t, std::size_t n_samples) {
  const std::size_t J = cov.mode_count();
  if (expected_q.size() != J) throw std::invalid_argument("expected_q must list every mode");
  if (n_samples < 2) throw std::invalid_argument("covariance check needs at least two samples");

  // analytic sine modes at the nodes, independent of the covariance tables
  const auto dofs = static_cast<Eigen::Index>(cov.dof_count());
  const int n = cov.dim() == 1 ? static_cast<int>(dofs) + 1 : static_cast<int>(std::lround(std::sqrt(dofs))) + 1;
  const double h = 1.0 / n;
  const int per_axis = cov.spec().modes_per_axis;
  Eigen::MatrixXd basis(dofs, static_cast<Eigen::Index>(J));
  for (std::size_t k = 0; k < J; ++k) {
    for (Eigen::Index i = 0; i < dofs; ++i) {
      if (cov.dim() == 1) {
        basis(i, k) = std::sqrt(2.0) * std::sin(static_cast<double>(k + 1) * kPi * (i + 1) * h);
      } else {
        const auto a = i % (n - 1) + 1;
        const auto b = i / (n - 1) + 1;
        const auto j1 = static_cast<double>(k % per_axis + 1);
        const auto j2 = static_cast<double>(k / per_axis + 1);
        basis(i, k) = 2.0 * std::sin(j1 * kPi * a * h) * std::sin(j2 * kPi * b * h);
      }
    }
  }
  const double cell_volume = cov.dim() == 1 ? h : h * h;

  Eigen::MatrixXd sum = Eigen::MatrixXd::Zero(J, J);
  Eigen::MatrixXd sum_sq = Eigen::MatrixXd::Zero(J, J);
  for (std::size_t s = 0; s < n_samples; ++s) {
    const noise::PathContext ctx(seed, s, 1, t, J);
    const Eigen::VectorXd field = cov.field_at_nodes(ctx.increments(0, 1));
    const Eigen::VectorXd proj = cell_volume * (basis.transpose() * field);
    const Eigen::MatrixXd outer = proj * proj.transpose();
    sum += outer;
    sum_sq += outer.cwiseProduct(outer);
  }
  const double count = static_cast<double>(n_samples);
  const Eigen::MatrixXd mean = sum / count;
  const Eigen::MatrixXd var = ((sum_sq / count) - mean.cwiseProduct(mean)) * (count / (count - 1.0));

  double worst = 0.0;
  for (std::size_t i = 0; i < J; ++i) {
    for (std::size_t j = i; j < J; ++j) {
      const double expected = i == j ? t * expected_q[i] : 0.0;
      const double diff = std::abs(mean(i, j) - expected);
      const double se = std::sqrt(std::max(var(i, j), 0.0) / count);
      const double z = se > 0.0 ? diff / se : (diff > 0.0 ? INFINITY : 0.0);
      worst = std::max(worst, z);
    }
  }
  return {.label = "KL covariance vs t q_i delta_ij", .value = worst, .tolerance = 3.0, .target = 0.0, .passed = worst <= 3.0};
}

double milstein_double_sum(std::span<const double> q, std::span<const double> phi, std::span<const double> dbeta,
                           double dt, double u, const std::function<double(double)>& g,
                           const std::function<double(double)>& dg) {
  double sum = 0.0;
  for (std::size_t i = 0; i < q.size(); ++i) {
    for (std::size_t j = 0; j < q.size(); ++j) {
      const double ito = dbeta[i] * dbeta[j] - (i == j ? dt : 0.0);
      sum += std::sqrt(q[i] * q[j]) * phi[i] * phi[j] * ito;
    }
  }
  return 0.5 * dg(u) * g(u) * sum;
}

ScalarStep scalar_drmgfe_step(const ScalarProblem& p, double u, double dt, double xi,
                              std::span<const double> stage_dbeta, std::span<const double> full_dbeta) {
  double dW_stage = 0.0;
  double dW = 0.0;
  double trace = 0.0;
  for (std::size_t j = 0; j < p.q.size(); ++j) {
    dW_stage += std::sqrt(p.q[j]) * p.phi[j] * stage_dbeta[j];
    dW += std::sqrt(p.q[j]) * p.phi[j] * full_dbeta[j];
    trace += p.q[j] * p.phi[j] * p.phi[j];
  }
  ScalarStep out;
  const double stage_rhs = u + xi * dt * p.drift(u) + p.g(u) * dW_stage;
  out.stage = p.mass * stage_rhs / (p.mass + xi * dt * p.stiffness);
  const double correction = 0.5 * p.dg(u) * p.g(u) * (dW * dW - dt * trace);
  const double rhs = u + dt * p.drift(out.stage) + p.g(u) * dW + correction;
  out.next = p.mass * rhs / (p.mass + dt * p.stiffness);
  return out;
}

}  // namespace drmgfe::oracle
