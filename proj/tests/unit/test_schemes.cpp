#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "drmgfe/oracle/oracle.hpp"
#include "drmgfe/schemes/integrate.hpp"

namespace {

using drmgfe::fem::FemSpace;
using drmgfe::fem::Mesh;
using drmgfe::fem::StateVector;
using drmgfe::noise::CovarianceModel;
using drmgfe::noise::ModeFamily;
using drmgfe::noise::ModeIncrements;
using drmgfe::noise::NoiseLoad;
using drmgfe::noise::PathContext;
using drmgfe::noise::StageFraction;
using drmgfe::problem::DriftChoice;
using drmgfe::problem::InitialChoice;
using drmgfe::problem::make_model_problem;
using drmgfe::problem::make_problem;
using drmgfe::schemes::LevelStepper;
using drmgfe::schemes::SchemeKind;
using drmgfe::schemes::StepInputs;
using drmgfe::schemes::TimeLevel;
constexpr double kPi = std::numbers::pi;

// Stage and full increments of one step of m path cells, as integrate() forms them.
StepInputs inputs_from_path(const PathContext& ctx, std::int64_t m, std::int64_t step, StageFraction xi) {
  const std::int64_t a = step * m;
  StepInputs in{static_cast<double>(m) * ctx.cell_dt(), xi, ctx.increments(a, a + xi.cells), ctx.increments(a, a + m)};
  return in;
}

TEST(MilsteinCorrection, VanishesForAdditiveNoise) {
  // g constant (delta = 0 gives g = 0, g' = 0)
  const FemSpace space(Mesh::build(1, 16));
  const CovarianceModel cov(space, {ModeFamily::InverseSquare, 8});
  const auto problem = make_model_problem(0.0, 1);
  const PathContext ctx(1, 0, 10, 1e-3, 8);
  const auto u = space.interpolate(problem.initial);
  EXPECT_EQ(drmgfe::schemes::milstein_correction(space, cov, problem, u, ctx.increments(0, 10), 1e-2).norm(), 0.0);
}

TEST(MilsteinCorrection, SingleModeBracket) {
  // J = 1: 1/2 delta^2 u (q phi^2)(dbeta^2 - dt)
  const FemSpace space(Mesh::build(1, 4));
  const CovarianceModel cov(space, {ModeFamily::InverseSquare, 1, NoiseLoad::Nodal});
  const auto problem = make_model_problem(0.5, 1);
  const PathContext ctx(4, 1, 4, 2.5e-4, 1);
  const auto inc = ctx.increments(0, 4);
  const StateVector u = StateVector::Constant(3, 2.0);
  const auto c = drmgfe::schemes::milstein_correction(space, cov, problem, u, inc, 1e-3);
  const double db = inc.value(0);
  for (int i = 0; i < 3; ++i) {
    const double phi2 = 2.0 * std::pow(std::sin(kPi * (i + 1) / 4.0), 2);
    EXPECT_NEAR(c[i], 0.5 * 0.25 * 2.0 * phi2 * (db * db - 1e-3), 1e-15);
  }
}

TEST(MilsteinCorrection, HasMeanZero) {
  // the compensator makes the bracket a martingale increment: E = 0 within 4 standard errors
  const FemSpace space(Mesh::build(1, 8));
  const CovarianceModel cov(space, {ModeFamily::InverseSquare, 10});
  const auto problem = make_model_problem(0.5, 1);
  const LevelStepper stepper(space, cov, problem, 1e-3, false);
  const StateVector u = StateVector::Ones(7);
  const PathContext ctx(31, 0, 10000, 1e-3, 10);
  StateVector sum = StateVector::Zero(7);
  StateVector sum_sq = StateVector::Zero(7);
  for (std::int64_t k = 0; k < 10000; ++k) {
    const auto c = stepper.milstein_correction(u, cov.field_at_nodes(ctx.increments(k, k + 1)));
    sum += c;
    sum_sq += c.cwiseProduct(c);
  }
  for (int i = 0; i < 7; ++i) {
    const double mean = sum[i] / 1e4;
    const double se = std::sqrt((sum_sq[i] / 1e4 - mean * mean) / 1e4);
    EXPECT_LE(std::abs(mean), 4.0 * se) << i;
  }
}

TEST(MilsteinCorrection, SquaredFieldHasTheTraceAsMean) {
  const FemSpace space(Mesh::build(1, 8));
  const CovarianceModel cov(space, {ModeFamily::InverseSquare, 10});
  const PathContext ctx(32, 0, 20000, 1e-3, 10);
  StateVector mean = StateVector::Zero(7);
  for (std::int64_t k = 0; k < 20000; ++k) mean += cov.field_at_nodes(ctx.increments(k, k + 1)).cwiseAbs2();
  mean /= 20000 * 1e-3;
  for (int i = 0; i < 7; ++i) EXPECT_NEAR(mean[i] / cov.trace_field()[i], 1.0, 0.1);
}

TEST(Steppers, NoForcingGivesTheResolventStep) {
  const FemSpace space(Mesh::build(1, 32));
  const CovarianceModel cov(space, {ModeFamily::InverseSquare, 4});
  const auto problem = make_problem(0.0, 1, DriftChoice::Zero, InitialChoice::Sine);
  const LevelStepper stepper(space, cov, problem, 1e-2);
  const PathContext ctx(1, 0, 8, 1.25e-3, 4);
  const auto u = space.interpolate(problem.initial);
  const auto in = inputs_from_path(ctx, 8, 0, {3, 8});
  const auto expected = space.resolvent_solve(1e-2, u);
  EXPECT_LE(space.mass_norm(stepper.drmgfe_step(u, in).next - expected), 1e-9);
  EXPECT_LE(space.mass_norm(stepper.baseline_step(u, in) - expected), 1e-9);
}

TEST(Steppers, ZeroStageFractionDegeneratesToTheBaseline) {
  const FemSpace space(Mesh::build(1, 32));
  const CovarianceModel cov(space, {ModeFamily::InverseSquare, 20});
  const auto problem = make_model_problem(0.5, 1);
  const LevelStepper stepper(space, cov, problem, 5e-3);
  const PathContext ctx(2, 3, 40, 5e-4, 20);
  StateVector a = space.l2_project(problem.initial);
  StateVector b = a;
  for (std::int64_t n = 0; n < 4; ++n) {
    const auto in = inputs_from_path(ctx, 10, n, {0, 10});
    const auto step = stepper.drmgfe_step(a, in);
    EXPECT_EQ(step.stage, a);
    a = step.next;
    b = stepper.baseline_step(b, in);
  }
  EXPECT_LE(space.mass_norm(a - b), 1e-12);
}

TEST(Steppers, FullStageFractionReusesTheFullIncrement) {
  const FemSpace space(Mesh::build(1, 16));
  const CovarianceModel cov(space, {ModeFamily::InverseSquare, 5});
  const auto problem = make_model_problem(0.5, 1);
  const LevelStepper stepper(space, cov, problem, 4e-3);
  const PathContext ctx(2, 3, 4, 1e-3, 5);
  const auto u = space.l2_project(problem.initial);
  const auto step = stepper.drmgfe_step(u, inputs_from_path(ctx, 4, 0, {4, 4}));
  // a semi-implicit Euler-Maruyama step without the Milstein term
  const StateVector rhs = u + 4e-3 * drmgfe::problem::nemytskii(problem.drift, u) +
                          drmgfe::problem::nemytskii(problem.diffusion, u).cwiseProduct(cov.field_at_nodes(ctx.increments(0, 4)));
  EXPECT_LE(space.mass_norm(step.stage - space.resolvent_solve(4e-3, rhs)), 1e-9);
}

drmgfe::oracle::ScalarProblem scalar_problem(const drmgfe::problem::ProblemSpec& problem, int modes) {
  drmgfe::oracle::ScalarProblem p;
  for (int j = 1; j <= modes; ++j) {
    p.q.push_back(1.0 / (j * j));
    p.phi.push_back(std::sqrt(2.0) * std::sin(j * kPi * 0.5));
  }
  p.drift = problem.drift;
  p.g = problem.diffusion;
  p.dg = problem.diffusion_derivative;
  return p;
}

TEST(Steppers, OneDofRecursionMatchesTheScalarOracle) {
  const FemSpace space(Mesh::build(1, 2));
  const CovarianceModel cov(space, {ModeFamily::InverseSquare, 3, NoiseLoad::Nodal});
  const auto problem = make_model_problem(0.5, 1);
  const auto scalar = scalar_problem(problem, 3);
  const std::int64_t m = 16;
  const PathContext ctx(99, 1, m * 10, 1e-3 / m, 3);
  const LevelStepper stepper(space, cov, problem, 1e-3);
  StateVector u = StateVector::Constant(1, 0.8);
  double v = 0.8;
  double w = 0.8;
  StateVector ub = u;
  for (std::int64_t n = 0; n < 10; ++n) {
    const auto xi = ctx.draw_stage_fraction(m, n);
    const auto in = inputs_from_path(ctx, m, n, xi);
    const auto sv = in.stage.values();
    const auto fv = in.full.values();
    const std::vector<double> stage(sv.begin(), sv.end());
    const std::vector<double> full(fv.begin(), fv.end());
    const auto s = drmgfe::oracle::scalar_drmgfe_step(scalar, v, 1e-3, xi.value(), stage, full);
    const auto step = stepper.drmgfe_step(u, in);
    EXPECT_NEAR(step.stage[0], s.stage, 1e-12);
    EXPECT_NEAR(step.next[0], s.next, 1e-12);
    u = step.next;
    v = s.next;
    const std::vector<double> none(3, 0.0);
    w = drmgfe::oracle::scalar_drmgfe_step(scalar, w, 1e-3, 0.0, none, full).next;
    ub = stepper.baseline_step(ub, in);
    EXPECT_NEAR(ub[0], w, 1e-12);
  }
}

TEST(Steppers, RejectsInconsistentInputs) {
  const FemSpace space(Mesh::build(1, 8));
  const CovarianceModel cov(space, {ModeFamily::InverseSquare, 4});
  const auto problem = make_model_problem(0.5, 1);
  const LevelStepper stepper(space, cov, problem, 1e-2);
  const PathContext ctx(1, 0, 10, 1e-3, 4);
  const StateVector u = StateVector::Ones(7);
  auto in = inputs_from_path(ctx, 10, 0, {4, 10});
  in.dt = 2e-2;
  EXPECT_THROW(stepper.drmgfe_step(u, in), std::invalid_argument);
  in = inputs_from_path(ctx, 10, 0, {4, 10});
  in.stage = ctx.increments(0, 3);
  EXPECT_THROW(stepper.drmgfe_step(u, in), std::invalid_argument);
  in = inputs_from_path(ctx, 10, 0, {4, 10});
  in.full.ticks.pop_back();
  EXPECT_THROW(stepper.baseline_step(u, in), std::invalid_argument);
  EXPECT_THROW(LevelStepper(space, cov, problem, 0.0), std::invalid_argument);
  const FemSpace other(Mesh::build(1, 16));
  EXPECT_THROW(LevelStepper(other, cov, problem, 1e-2), std::invalid_argument);
  auto noncommutative = problem;
  noncommutative.commutative_noise = false;
  EXPECT_THROW(LevelStepper(space, cov, noncommutative, 1e-2), std::invalid_argument);
}

TEST(Integrate, ZeroStepsReturnsTheProjectedInitialDatum) {
  const FemSpace space(Mesh::build(1, 16));
  const CovarianceModel cov(space, {ModeFamily::InverseSquare, 4});
  const auto problem = make_model_problem(0.5, 1);
  const PathContext ctx(1, 0, 8, 1e-3, 4);
  EXPECT_EQ(drmgfe::schemes::integrate(SchemeKind::Drmgfe, space, cov, problem, ctx, {0, 1}),
            space.l2_project(problem.initial));
}

TEST(Integrate, IsDeterministicPerSeedAndSample) {
  const FemSpace space(Mesh::build(1, 16));
  const CovarianceModel cov(space, {ModeFamily::InverseSquare, 10});
  const auto problem = make_model_problem(0.5, 1);
  const PathContext a(5, 3, 40, 2.5e-4, 10);
  const PathContext b(5, 4, 40, 2.5e-4, 10);
  const auto x = drmgfe::schemes::integrate(SchemeKind::Drmgfe, space, cov, problem, a, {10, 4});
  EXPECT_EQ(x, drmgfe::schemes::integrate(SchemeKind::Drmgfe, space, cov, problem, a, {10, 4}));
  EXPECT_NE(x, drmgfe::schemes::integrate(SchemeKind::Drmgfe, space, cov, problem, b, {10, 4}));
}

TEST(Integrate, NoiselessBaselineIgnoresTheSeed) {
  const FemSpace space(Mesh::build(1, 16));
  const CovarianceModel cov(space, {ModeFamily::InverseSquare, 10});
  const auto problem = make_model_problem(0.0, 1);
  const auto run = [&](std::uint64_t seed) {
    const PathContext ctx(seed, 0, 40, 2.5e-4, 10);
    return drmgfe::schemes::integrate(SchemeKind::SemiImplicitMilstein, space, cov, problem, ctx, {10, 4});
  };
  EXPECT_EQ(run(1), run(2));
}

TEST(Integrate, NoiselessLinearHeatIgnoresTheStageFraction) {
  const FemSpace space(Mesh::build(2, 8));
  const CovarianceModel cov(space, {ModeFamily::ExponentialTensor, 4});
  const auto problem = make_problem(0.0, 2, DriftChoice::Zero, InitialChoice::Sine);
  const auto run = [&](std::uint64_t seed) {
    const PathContext ctx(seed, 0, 40, 2.5e-4, 16);
    return drmgfe::schemes::integrate(SchemeKind::Drmgfe, space, cov, problem, ctx, {10, 4});
  };
  EXPECT_LE((run(1) - run(2)).lpNorm<Eigen::Infinity>(), 1e-12);
}

TEST(Integrate, RejectsLevelsThatDoNotTileThePath) {
  const FemSpace space(Mesh::build(1, 8));
  const CovarianceModel cov(space, {ModeFamily::InverseSquare, 2});
  const auto problem = make_model_problem(0.5, 1);
  const PathContext ctx(1, 0, 12, 1e-3, 2);
  EXPECT_THROW(drmgfe::schemes::integrate(SchemeKind::Drmgfe, space, cov, problem, ctx, {5, 2}), std::invalid_argument);
  EXPECT_THROW(drmgfe::schemes::integrate(SchemeKind::Drmgfe, space, cov, problem, ctx, {12, 0}), std::invalid_argument);
}

TEST(StreamingIntegrator, IsBitIdenticalToIntegrate) {
  for (int dim : {1, 2}) {
    const FemSpace space(Mesh::build(dim, 8));
    const CovarianceModel cov(space, drmgfe::noise::ModeSpec{dim == 1 ? ModeFamily::InverseSquare : ModeFamily::ExponentialTensor, 6});
    const auto problem = make_model_problem(0.5, dim);
    const PathContext ctx(17, 2, 48, 1e-4, cov.mode_count());
    for (std::int64_t m : {1, 3, 8, 16}) {
      for (SchemeKind kind : {SchemeKind::Drmgfe, SchemeKind::SemiImplicitMilstein}) {
        const LevelStepper stepper(space, cov, problem, static_cast<double>(m) * 1e-4);
        drmgfe::schemes::StreamingIntegrator stream(kind, stepper, ctx, m, space.l2_project(problem.initial));
        std::vector<std::int64_t> ticks(cov.mode_count());
        for (std::int64_t k = 0; k < 48; ++k) {
          ctx.fill_cell_ticks(k, ticks);
          stream.consume(k, ticks);
        }
        EXPECT_EQ(stream.steps_taken(), 48 / m);
        EXPECT_EQ(stream.state(), drmgfe::schemes::integrate(kind, space, cov, problem, ctx, {48 / m, m}))
            << "dim " << dim << " m " << m;
      }
    }
  }
}

TEST(StreamingIntegrator, RejectsOutOfOrderCells) {
  const FemSpace space(Mesh::build(1, 8));
  const CovarianceModel cov(space, {ModeFamily::InverseSquare, 2});
  const auto problem = make_model_problem(0.5, 1);
  const PathContext ctx(1, 0, 8, 1e-3, 2);
  const LevelStepper stepper(space, cov, problem, 4e-3);
  drmgfe::schemes::StreamingIntegrator stream(SchemeKind::Drmgfe, stepper, ctx, 4, StateVector::Zero(7));
  const std::vector<std::int64_t> ticks(2, 0);
  stream.consume(0, ticks);
  EXPECT_THROW(stream.consume(2, ticks), std::logic_error);
  EXPECT_THROW(drmgfe::schemes::StreamingIntegrator(SchemeKind::Drmgfe, stepper, ctx, 3, StateVector::Zero(7)),
               std::invalid_argument);
}

TEST(SchemeNames, RoundTrip) {
  for (SchemeKind kind : {SchemeKind::Drmgfe, SchemeKind::SemiImplicitMilstein}) {
    EXPECT_EQ(drmgfe::schemes::parse_scheme(drmgfe::schemes::to_string(kind)), kind);
  }
  EXPECT_FALSE(drmgfe::schemes::parse_scheme("euler").has_value());
}

}  // namespace
