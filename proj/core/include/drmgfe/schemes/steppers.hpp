#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "drmgfe/fem/fem_space.hpp"
#include "drmgfe/noise/covariance.hpp"
#include "drmgfe/noise/path_context.hpp"
#include "drmgfe/problem/problem.hpp"

namespace drmgfe::schemes {

using fem::StateVector;

enum class SchemeKind { Drmgfe, SemiImplicitMilstein };

std::string to_string(SchemeKind kind);
std::optional<SchemeKind> parse_scheme(std::string_view name);

/// Randomness consumed by one time step of length dt.
///
/// `stage` covers [t_{n-1}, t_{n-1} + xi dt] and `full` covers [t_{n-1}, t_n];
/// both are sums over the same path cells, so stage is a prefix of full.
struct StepInputs {
  double dt = 0.0;
  noise::StageFraction xi;
  noise::ModeIncrements stage;
  noise::ModeIncrements full;
};

struct StageAndNext {
  StateVector stage;
  StateVector next;
};

/// Step operators for one (space, dt) pair.
///
/// Right-hand sides are formed from nodal values, multiplied by M, and solved
/// with M + alpha K. With cache_full_step the alpha = dt system is factorized
/// once; other stage parameters use Jacobi-preconditioned CG. References to
/// space, covariance and problem must outlive the stepper.
class LevelStepper {
 public:
  LevelStepper(const fem::FemSpace& space, const noise::CovarianceModel& cov, const problem::ProblemSpec& problem,
               double dt, bool cache_full_step = true);

  double dt() const noexcept { return dt_; }
  const fem::FemSpace& space() const noexcept { return *space_; }
  const noise::CovarianceModel& covariance() const noexcept { return *cov_; }
  const problem::ProblemSpec& problem() const noexcept { return *problem_; }

  /// 1/2 g'(u) g(u) (dW^2 - dt sum_k q_k phi_k^2), nodally.
  StateVector milstein_correction(const StateVector& u, const StateVector& dW) const;

  StageAndNext drmgfe_step(const StateVector& u_prev, const StepInputs& inputs) const;
  StateVector baseline_step(const StateVector& u_prev, const StepInputs& inputs) const;
  StateVector step(SchemeKind kind, const StateVector& u_prev, const StepInputs& inputs) const;

 private:
  void check_inputs(const StepInputs& inputs) const;
  StateVector solve(double alpha, const StateVector& nodal_rhs) const;
  StateVector full_step(const StateVector& u_prev, const StateVector& g_prev, const StateVector& drift_at,
                        const StateVector& dW) const;

  const fem::FemSpace* space_;
  const noise::CovarianceModel* cov_;
  const problem::ProblemSpec* problem_;
  double dt_;
  std::optional<fem::CachedResolvent> full_resolvent_;
};

/// Milstein correction of u for the increments `full` over a step of length dt.
/// Throws std::invalid_argument for problems without commutative noise.
StateVector milstein_correction(const fem::FemSpace& space, const noise::CovarianceModel& cov,
                                const problem::ProblemSpec& problem, const StateVector& u,
                                const noise::ModeIncrements& full, double dt);

StageAndNext drmgfe_step(const fem::FemSpace& space, const noise::CovarianceModel& cov,
                         const problem::ProblemSpec& problem, const StateVector& u_prev, const StepInputs& inputs);

StateVector baseline_milstein_step(const fem::FemSpace& space, const noise::CovarianceModel& cov,
                                   const problem::ProblemSpec& problem, const StateVector& u_prev,
                                   const StepInputs& inputs);

}  // namespace drmgfe::schemes
