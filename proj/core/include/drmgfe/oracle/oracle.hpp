#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "drmgfe/noise/covariance.hpp"

namespace drmgfe::oracle {

struct OracleResult {
  std::string label;
  /// Measured statistic (error, max z-score, slope, ...).
  double value = 0.0;
  /// Pass band half-width around `target`; always > 0.
  double tolerance = 1.0;
  double target = 0.0;
  bool passed = false;
};

/// e^{-4 pi^2 t} sin(2 pi x): heat equation on (0,1) from sin(2 pi x).
double exact_linear_heat(double t, double x);

/// e^{-8 pi^2 t} sin(2 pi x) sin(2 pi y) on the unit square.
double exact_linear_heat_2d(double t, double x, double y);

/// (6 / h^2) (1 - cos(j pi h)) / (2 + cos(j pi h)): j-th generalized
/// eigenvalue of the 1D uniform P1 pencil. Throws std::out_of_range unless
/// 1 <= j <= 1/h - 1.
double fem_eigenvalue_1d(double h, int j);

/// Ascending eigenvalues of K x = lambda M x by a dense solver.
std::vector<double> dense_generalized_eigenvalues(const Eigen::MatrixXd& stiffness, const Eigen::MatrixXd& mass);

/// Empirical covariance of (W(t), phi_i) against t q_i delta_ij.
///
/// Draws n_samples paths W(t) = sum_k sqrt(q_k) phi_k beta_k(t) through the
/// covariance model, projects the nodal field on the analytic sine modes by
/// the nodal rule (exact for modes below the mesh Nyquist index), and reports
/// the largest |Cov_hat - t q_i delta_ij| in units of its standard error.
/// Passes at 3 standard errors. `expected_q` is the hypothesis; passing a
/// mismatched one is the negative control.
OracleResult covariance_empirical_check(const noise::CovarianceModel& cov, std::span<const double> expected_q,
                                        std::uint64_t seed, double t, std::size_t n_samples);

/// 1/2 sum_{i,j} sqrt(q_i q_j) g'(u) g(u) phi_i phi_j (db_i db_j - dt delta_ij)
/// at one point, by the explicit double loop.
double milstein_double_sum(std::span<const double> q, std::span<const double> phi, std::span<const double> dbeta,
                           double dt, double u, const std::function<double(double)>& g,
                           const std::function<double(double)>& dg);

/// One-dof scalar problem: the single interior node of the 1D mesh with two
/// cells, where M = [1/3] and K = [4].
struct ScalarProblem {
  double mass = 1.0 / 3.0;
  double stiffness = 4.0;
  std::vector<double> q;
  std::vector<double> phi;  // eigenfunction values at the node
  std::function<double(double)> drift;
  std::function<double(double)> g;
  std::function<double(double)> dg;
};

struct ScalarStep {
  double stage = 0.0;
  double next = 0.0;
};

/// Scalar recursion of the drift-randomized step (xi = 0 gives the
/// semi-implicit Milstein step).
ScalarStep scalar_drmgfe_step(const ScalarProblem& p, double u, double dt, double xi,
                              std::span<const double> stage_dbeta, std::span<const double> full_dbeta);

}  // namespace drmgfe::oracle
