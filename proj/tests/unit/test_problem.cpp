#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "drmgfe/problem/problem.hpp"

namespace {

using drmgfe::problem::DriftChoice;
using drmgfe::problem::InitialChoice;
using drmgfe::problem::make_model_problem;
using drmgfe::problem::make_problem;

TEST(Problem, DriftAndDiffusionExamples) {
  const auto p = make_model_problem(0.5, 1);
  EXPECT_EQ(p.drift(0.0), 1.0);
  EXPECT_EQ(p.drift(-1.0), 0.5);
  EXPECT_EQ(p.diffusion(2.0), 1.0);
  EXPECT_EQ(p.diffusion_derivative(2.0) * p.diffusion(2.0), 0.5);
  EXPECT_TRUE(p.commutative_noise);
  EXPECT_EQ(p.drift_lipschitz, 1.0);
}

TEST(Problem, DriftIsOneLipschitz) {
  const auto p = make_model_problem(0.5, 1);
  double worst = 0.0;
  for (int a = 0; a <= 400; ++a) {
    for (int b = a + 1; b <= 400; b += 7) {
      const double x = -10.0 + a * 0.05;
      const double y = -10.0 + b * 0.05;
      worst = std::max(worst, std::abs(p.drift(x) - p.drift(y)) / (y - x));
    }
  }
  EXPECT_LE(worst, p.drift_lipschitz);
  EXPECT_GT(worst, 0.9);
}

TEST(Problem, DiffusionDerivativeMatchesFiniteDifferences) {
  const auto p = make_model_problem(0.7, 2);
  for (double u : {-3.0, -0.2, 0.0, 0.4, 5.0}) {
    const double fd = (p.diffusion(u + 1e-6) - p.diffusion(u - 1e-6)) / 2e-6;
    EXPECT_NEAR(p.diffusion_derivative(u), fd, 1e-8);
  }
}

TEST(Problem, InitialData) {
  const auto p1 = make_model_problem(0.5, 1);
  const auto p2 = make_model_problem(0.5, 2);
  EXPECT_NEAR(p1.initial({0.25, 0.0}), 1.0, 1e-15);
  EXPECT_NEAR(p2.initial({0.25, 0.75}), -1.0, 1e-15);
  EXPECT_EQ(make_problem(0.5, 1, DriftChoice::Bounded, InitialChoice::Zero).initial({0.25, 0.0}), 0.0);
}

TEST(Problem, ZeroDriftVariant) {
  const auto p = make_problem(0.0, 1, DriftChoice::Zero, InitialChoice::Sine);
  EXPECT_EQ(p.drift(3.0), 0.0);
  EXPECT_EQ(p.diffusion(3.0), 0.0);
  EXPECT_EQ(p.drift_lipschitz, 0.0);
}

TEST(Problem, RejectsInvalidParameters) {
  EXPECT_THROW(make_model_problem(-0.1, 1), std::invalid_argument);
  EXPECT_THROW(make_model_problem(std::nan(""), 1), std::invalid_argument);
  EXPECT_THROW(make_model_problem(0.5, 3), std::invalid_argument);
}

TEST(Nemytskii, AppliesTheMapEntrywise) {
  const auto p = make_model_problem(0.5, 1);
  drmgfe::fem::StateVector v(3);
  v << 0.0, 1.0, -3.0;
  const auto out = drmgfe::problem::nemytskii(p.drift, v);
  EXPECT_EQ(out[0], 1.0);
  EXPECT_EQ(out[1], 0.5);
  EXPECT_EQ(out[2], 0.25);
  EXPECT_EQ(drmgfe::problem::nemytskii(p.drift, drmgfe::fem::StateVector(0)).size(), 0);
}

}  // namespace
