#include "drmgfe/oracle/validation.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "drmgfe/fem/fem_space.hpp"
#include "drmgfe/noise/covariance.hpp"
#include "drmgfe/problem/problem.hpp"
#include "drmgfe/schemes/integrate.hpp"
#include "drmgfe/study/harness.hpp"

namespace drmgfe::oracle {

namespace {

OracleResult within(std::string label, double value, double tolerance, double target = 0.0) {
  return {.label = std::move(label),
          .value = value,
          .tolerance = tolerance,
          .target = target,
          .passed = std::abs(value - target) <= tolerance};
}

double least_squares_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

// Final-time error of the deterministic linear heat flow against the exact
// solution's nodal interpolant.
double heat_error(int cells, double dt, double final_time) {
  const fem::FemSpace space(fem::Mesh::build(1, cells));
  const noise::CovarianceModel cov(space, {noise::ModeFamily::InverseSquare, 1});
  const auto problem = problem::make_problem(0.0, 1, problem::DriftChoice::Zero, problem::InitialChoice::Sine);
  const auto steps = static_cast<std::int64_t>(std::llround(final_time / dt));
  const noise::PathContext ctx(1, 0, steps, dt, 1);
  const fem::StateVector u =
      schemes::integrate(schemes::SchemeKind::Drmgfe, space, cov, problem, ctx, {steps, 1});
  const fem::StateVector exact = space.interpolate([&](fem::Point p) { return exact_linear_heat(final_time, p.x); });
  return space.mass_norm(u - exact);
}

}  // namespace

OracleResult check_fem_eigenvalues() {
  double worst = 0.0;
  for (int n : {4, 8, 16}) {
    const fem::FemSpace space(fem::Mesh::build(1, n));
    const auto dense = dense_generalized_eigenvalues(Eigen::MatrixXd(space.stiffness()), Eigen::MatrixXd(space.mass()));
    for (int j = 1; j < n; ++j) worst = std::max(worst, std::abs(dense[j - 1] - fem_eigenvalue_1d(1.0 / n, j)));
  }
  return within("P1 generalized eigenvalues vs closed form (n = 4, 8, 16)", worst, 1e-8);
}

OracleResult check_resolvent_contractivity(std::size_t draws, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const fem::FemSpace spaces[] = {fem::FemSpace(fem::Mesh::build(1, 32)), fem::FemSpace(fem::Mesh::build(2, 8))};
  double worst = -std::numeric_limits<double>::infinity();
  for (std::size_t d = 0; d < draws; ++d) {
    const auto& space = spaces[d % 2];
    fem::StateVector v(static_cast<Eigen::Index>(space.dof_count()));
    for (auto& x : v) x = normal(rng);
    const double alpha = 0.1 * (1.0 - unit(rng));  // (0, T]
    const double ratio = space.mass_norm(space.resolvent_solve(alpha, v)) / space.mass_norm(v);
    worst = std::max(worst, ratio - 1.0);
  }
  return {.label = "resolvent contractivity, max(||Sv||_M / ||v||_M) - 1",
          .value = worst,
          .tolerance = 1e-10,
          .target = 0.0,
          .passed = worst <= 1e-10};
}

OracleResult check_resolvent_powers(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  const fem::FemSpace space(fem::Mesh::build(1, 64));
  const fem::CachedResolvent step(space, 1e-3);
  double worst = -std::numeric_limits<double>::infinity();
  for (int trial = 0; trial < 20; ++trial) {
    fem::StateVector v(static_cast<Eigen::Index>(space.dof_count()));
    for (auto& x : v) x = normal(rng);
    double previous = space.mass_norm(v);
    for (int m = 0; m < 50; ++m) {
      v = step.apply(v);
      const double now = space.mass_norm(v);
      worst = std::max(worst, now / previous - 1.0);
      previous = now;
    }
  }
  return {.label = "resolvent powers are non-increasing in ||.||_M",
          .value = worst,
          .tolerance = 1e-10,
          .target = 0.0,
          .passed = worst <= 1e-10};
}

OracleResult check_projection_idempotence() {
  double worst = 0.0;
  for (int dim : {1, 2}) {
    const fem::FemSpace space(fem::Mesh::build(dim, dim == 1 ? 32 : 8));
    std::mt19937_64 rng(3);
    std::normal_distribution<double> normal;
    fem::StateVector c(static_cast<Eigen::Index>(space.dof_count()));
    for (auto& x : c) x = normal(rng);
    // P1 function with coefficients c, evaluated by barycentric interpolation
    const auto& mesh = space.mesh();
    const auto dofs = mesh.dof_of_node();
    const double h = mesh.h();
    auto nodal = [&](int i, int j) {
      const auto d = dofs[mesh.node_index(i, j)];
      return d == fem::Mesh::kBoundary ? 0.0 : c[d];
    };
    auto f = [&](fem::Point p) {
      const int i = std::min(static_cast<int>(p.x / h), mesh.cells_per_side() - 1);
      const double s = p.x / h - i;
      if (dim == 1) return (1.0 - s) * nodal(i, 0) + s * nodal(i + 1, 0);
      const int j = std::min(static_cast<int>(p.y / h), mesh.cells_per_side() - 1);
      const double t = p.y / h - j;
      // lower triangle (a, b, c) when s >= t, upper (a, c, d) otherwise
      if (s >= t) return (1.0 - s) * nodal(i, j) + (s - t) * nodal(i + 1, j) + t * nodal(i + 1, j + 1);
      return (1.0 - t) * nodal(i, j) + s * nodal(i + 1, j + 1) + (t - s) * nodal(i, j + 1);
    };
    worst = std::max(worst, (space.l2_project(f) - c).lpNorm<Eigen::Infinity>());
  }
  return within("L2 projection is idempotent on V_h", worst, 1e-10);
}

OracleResult check_covariance(std::size_t samples) {
  const fem::FemSpace space(fem::Mesh::build(1, 64));
  const noise::CovarianceModel cov(space, {noise::ModeFamily::InverseSquare, 4, noise::NoiseLoad::Nodal});
  auto r = covariance_empirical_check(cov, cov.eigenvalues(), 2024, 0.1, samples);
  r.label = "KL covariance (1D, J = 4, t = 0.1), max z-score";
  return r;
}

OracleResult check_covariance_negative_control(std::size_t samples) {
  const fem::FemSpace space(fem::Mesh::build(1, 64));
  const noise::CovarianceModel cov(space, {noise::ModeFamily::InverseSquare, 4, noise::NoiseLoad::Nodal});
  std::vector<double> doubled(cov.eigenvalues().begin(), cov.eigenvalues().end());
  for (auto& q : doubled) q *= 2.0;
  auto r = covariance_empirical_check(cov, doubled, 2024, 0.1, samples);
  return {.label = "KL covariance negative control (doubled q) is rejected, max z-score",
          .value = r.value,
          .tolerance = r.tolerance,
          .target = 0.0,
          .passed = !r.passed};
}

OracleResult check_milstein_double_sum() {
  const fem::FemSpace space(fem::Mesh::build(1, 16));
  const auto problem = problem::make_model_problem(0.5, 1);
  std::mt19937_64 rng(5);
  std::normal_distribution<double> normal;
  double worst = 0.0;
  for (int J = 1; J <= 3; ++J) {
    const noise::CovarianceModel cov(space, {noise::ModeFamily::InverseSquare, J, noise::NoiseLoad::Nodal});
    const double dt = 1e-3;
    const noise::PathContext ctx(99, static_cast<std::uint64_t>(J), 10, dt / 10, static_cast<std::size_t>(J));
    const auto inc = ctx.increments(0, 10);
    fem::StateVector u(static_cast<Eigen::Index>(space.dof_count()));
    for (auto& x : u) x = normal(rng);
    const auto nodal = schemes::milstein_correction(space, cov, problem, u, inc, dt);
    std::vector<double> q(cov.eigenvalues().begin(), cov.eigenvalues().end());
    std::vector<double> db(static_cast<std::size_t>(J));
    for (int j = 0; j < J; ++j) db[j] = inc.value(static_cast<std::size_t>(j));
    for (Eigen::Index i = 0; i < u.size(); ++i) {
      const double x = space.mesh().dof_point(static_cast<std::size_t>(i)).x;
      std::vector<double> phi;
      for (int j = 1; j <= J; ++j) phi.push_back(std::sqrt(2.0) * std::sin(j * std::numbers::pi * x));
      const double brute = milstein_double_sum(q, phi, db, dt, u[i], problem.diffusion, problem.diffusion_derivative);
      worst = std::max(worst, std::abs(brute - nodal[i]));
    }
  }
  return within("Milstein correction vs explicit double sum (J <= 3)", worst, 1e-12);
}

OracleResult check_path_additivity() {
  const noise::PathContext ctx(42, 3, 4096, 1e-5, 8);
  double mismatches = 0;
  for (std::size_t j = 0; j < ctx.mode_count(); ++j) {
    for (std::int64_t ratio : {2, 16, 64, 1024}) {
      for (std::int64_t a = 0; a + ratio <= ctx.path_cells(); a += ratio * 7) {
        const auto coarse = ctx.mode_increment(j, a, a + ratio);
        noise::BrownianIncrement sum{0, ctx.cell_dt()};
        for (std::int64_t k = a; k < a + ratio; ++k) sum = sum + ctx.mode_increment(j, k, k + 1);
        if (!(coarse == sum) || coarse.value() != sum.value()) ++mismatches;
      }
    }
  }
  return {.label = "path refinement additivity (bit-exact), mismatches",
          .value = mismatches,
          .tolerance = 0.5,
          .target = 0.0,
          .passed = mismatches == 0};
}

OracleResult check_degeneration(std::size_t paths) {
  const fem::FemSpace space(fem::Mesh::build(1, 32));
  const noise::CovarianceModel cov(space, {noise::ModeFamily::InverseSquare, 20});
  const auto problem = problem::make_model_problem(0.5, 1);
  const std::int64_t m = 8;
  const std::int64_t steps = 25;
  const double cell_dt = 5e-4;
  const double dt = static_cast<double>(m) * cell_dt;
  const schemes::LevelStepper stepper(space, cov, problem, dt);
  const fem::StateVector u0 = space.l2_project(problem.initial);

  double worst = 0.0;
  for (std::size_t p = 0; p < paths; ++p) {
    const noise::PathContext ctx(777, p, steps * m, cell_dt, cov.mode_count());
    fem::StateVector a = u0;
    fem::StateVector b = u0;
    for (std::int64_t n = 0; n < steps; ++n) {
      schemes::StepInputs in{dt, {0, m}, noise::ModeIncrements::zero(cov.mode_count(), cell_dt),
                             ctx.increments(n * m, (n + 1) * m)};
      a = stepper.drmgfe_step(a, in).next;
      b = stepper.baseline_step(b, in);
    }
    worst = std::max(worst, space.mass_norm(a - b));
  }
  return within("DRMGFE with xi = 0 vs semi-implicit Milstein, max ||diff||_M", worst, 1e-9);
}

OracleResult check_deterministic_time_slope() {
  const std::vector<double> dts = {2e-3, 1e-3, 5e-4, 2.5e-4};
  std::vector<double> lx, ly;
  for (double dt : dts) {
    lx.push_back(std::log(dt));
    ly.push_back(std::log(heat_error(512, dt, 0.1)));
  }
  return within("deterministic heat, temporal slope (h = 1/512)", least_squares_slope(lx, ly), 0.05, 1.0);
}

OracleResult check_deterministic_space_slope() {
  const std::vector<int> cells = {8, 16, 32, 64};
  std::vector<double> lx, ly;
  for (int n : cells) {
    lx.push_back(std::log(1.0 / n));
    ly.push_back(std::log(heat_error(n, 1e-6, 0.1)));
  }
  return within("deterministic heat, spatial slope (dt = 1e-6)", least_squares_slope(lx, ly), 0.1, 2.0);
}

OracleResult check_study_reproducibility() {
  study::StudyConfig c;
  c.dim = 1;
  c.axis = study::StudyAxis::Time;
  c.ladder = {1e-2, 5e-3, 2.5e-3};
  c.reference_dt = 1.25e-3;
  c.reference_h = 1.0 / 16;
  c.modes_per_axis = 10;
  c.samples = 6;
  c.seed = 31337;
  c.workers = 1;
  const auto first = study::run_study(c);
  c.workers = 3;
  const auto second = study::run_study(c);
  double mismatches = 0;
  for (std::size_t i = 0; i < first.levels.size(); ++i) {
    if (first.levels[i].u_error != second.levels[i].u_error) ++mismatches;
  }
  for (std::size_t i = 0; i < first.eoc.size(); ++i) {
    if (first.eoc[i] != second.eoc[i]) ++mismatches;
  }
  return {.label = "study bit-reproducibility across worker counts, mismatches",
          .value = mismatches,
          .tolerance = 0.5,
          .target = 0.0,
          .passed = mismatches == 0};
}

std::vector<OracleResult> run_validation_suite() {
  return {
      check_fem_eigenvalues(),
      check_resolvent_contractivity(),
      check_resolvent_powers(),
      check_projection_idempotence(),
      check_covariance(),
      check_covariance_negative_control(),
      check_milstein_double_sum(),
      check_path_additivity(),
      check_degeneration(),
      check_deterministic_time_slope(),
      check_deterministic_space_slope(),
      check_study_reproducibility(),
  };
}

}  // namespace drmgfe::oracle
