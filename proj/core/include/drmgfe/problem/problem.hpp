#pragma once

#include <functional>
#include <string>

#include "drmgfe/fem/fem_space.hpp"

namespace drmgfe::problem {

using ScalarMap = std::function<double(double)>;

enum class DriftChoice { Bounded, Zero };
enum class InitialChoice { Sine, Zero };

std::string to_string(DriftChoice choice);
std::string to_string(InitialChoice choice);

/// Semilinear problem du = (-A u + F(u)) dt + g(u) dW with Nemytskii maps.
///
/// g acts pointwise on the noise, so the iterated stochastic integral of the
/// Milstein term reduces to products of increments (commutative noise).
struct ProblemSpec {
  ScalarMap drift;
  ScalarMap diffusion;
  ScalarMap diffusion_derivative;
  fem::ScalarField initial;
  double intensity = 0.0;
  double drift_lipschitz = 0.0;
  bool commutative_noise = true;
  DriftChoice drift_choice = DriftChoice::Bounded;
  InitialChoice initial_choice = InitialChoice::Sine;
};

/// F(u) = 1 / (1 + |u|), g(u) = delta u, u0 = sin(2 pi x) in 1D and
/// sin(2 pi x) sin(2 pi y) in 2D. Throws std::invalid_argument if delta < 0.
ProblemSpec make_model_problem(double delta, int dim);

/// Parameter variations of the model problem; the F = 0 drift and the zero
/// initial datum are used for deterministic checks.
ProblemSpec make_problem(double delta, int dim, DriftChoice drift, InitialChoice initial);

/// Entrywise application of a scalar map to nodal coefficients.
fem::StateVector nemytskii(const ScalarMap& map, const fem::StateVector& v);

}  // namespace drmgfe::problem
