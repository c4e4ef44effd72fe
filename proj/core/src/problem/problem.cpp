#include "drmgfe/problem/problem.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace drmgfe::problem {

std::string to_string(DriftChoice choice) { return choice == DriftChoice::Bounded ? "bounded" : "zero"; }

std::string to_string(InitialChoice choice) { return choice == InitialChoice::Sine ? "sine" : "zero"; }

ProblemSpec make_model_problem(double delta, int dim) {
  return make_problem(delta, dim, DriftChoice::Bounded, InitialChoice::Sine);
}

ProblemSpec make_problem(double delta, int dim, DriftChoice drift, InitialChoice initial) {
  if (!(delta >= 0.0) || !std::isfinite(delta)) throw std::invalid_argument("noise intensity must be finite and >= 0");
  if (dim != 1 && dim != 2) throw std::invalid_argument("problem dimension must be 1 or 2");

  ProblemSpec p;
  p.intensity = delta;
  p.drift_choice = drift;
  p.initial_choice = initial;
  if (drift == DriftChoice::Bounded) {
    p.drift = [](double u) { return 1.0 / (1.0 + std::abs(u)); };
    p.drift_lipschitz = 1.0;
  } else {
    p.drift = [](double) { return 0.0; };
    p.drift_lipschitz = 0.0;
  }
  p.diffusion = [delta](double u) { return delta * u; };
  p.diffusion_derivative = [delta](double) { return delta; };

  constexpr double two_pi = 2.0 * std::numbers::pi;
  if (initial == InitialChoice::Zero) {
    p.initial = [](fem::Point) { return 0.0; };
  } else if (dim == 1) {
    p.initial = [](fem::Point x) { return std::sin(two_pi * x.x); };
  } else {
    p.initial = [](fem::Point x) { return std::sin(two_pi * x.x) * std::sin(two_pi * x.y); };
  }
  return p;
}

fem::StateVector nemytskii(const ScalarMap& map, const fem::StateVector& v) {
  fem::StateVector out(v.size());
  for (Eigen::Index i = 0; i < v.size(); ++i) out[i] = map(v[i]);
  return out;
}

}  // namespace drmgfe::problem
