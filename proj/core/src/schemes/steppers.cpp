#include "drmgfe/schemes/steppers.hpp"

#include <algorithm>
#include <stdexcept>

namespace drmgfe::schemes {

std::string to_string(SchemeKind kind) {
  return kind == SchemeKind::Drmgfe ? "drmgfe" : "semi-implicit-milstein";
}

std::optional<SchemeKind> parse_scheme(std::string_view name) {
  if (name == "drmgfe") return SchemeKind::Drmgfe;
  if (name == "semi-implicit-milstein" || name == "milstein") return SchemeKind::SemiImplicitMilstein;
  return std::nullopt;
}

LevelStepper::LevelStepper(const fem::FemSpace& space, const noise::CovarianceModel& cov,
                           const problem::ProblemSpec& problem, double dt, bool cache_full_step)
    : space_(&space), cov_(&cov), problem_(&problem), dt_(dt) {
  if (!(dt > 0.0)) throw std::invalid_argument("time step must be positive");
  if (cov.dof_count() != space.dof_count()) {
    throw std::invalid_argument("covariance model is tabulated on a different space");
  }
  if (!problem.commutative_noise) {
    throw std::invalid_argument("the Milstein correction requires commutative noise");
  }
  if (cache_full_step) full_resolvent_.emplace(space, dt);
}

void LevelStepper::check_inputs(const StepInputs& in) const {
  if (in.dt != dt_) throw std::invalid_argument("step inputs were drawn for a different time step");
  if (in.full.mode_count() != cov_->mode_count() || in.stage.mode_count() != cov_->mode_count()) {
    throw std::invalid_argument("increments do not cover the modes of the covariance model");
  }
  if (in.xi.cells < 0 || in.xi.cells > in.xi.ratio || in.stage.span_cells != in.xi.cells ||
      in.full.span_cells != in.xi.ratio) {
    throw std::invalid_argument("stage span must be a prefix of the full step span");
  }
}

StateVector LevelStepper::solve(double alpha, const StateVector& nodal_rhs) const {
  if (alpha == 0.0) return nodal_rhs;
  if (full_resolvent_ && alpha == full_resolvent_->alpha()) return full_resolvent_->apply(nodal_rhs);
  return space_->resolvent_solve(alpha, nodal_rhs);
}

StateVector LevelStepper::milstein_correction(const StateVector& u, const StateVector& dW) const {
  const auto& g = problem_->diffusion;
  const auto& dg = problem_->diffusion_derivative;
  const auto& trace = cov_->trace_field();
  StateVector out(u.size());
  for (Eigen::Index i = 0; i < u.size(); ++i) {
    out[i] = 0.5 * dg(u[i]) * g(u[i]) * (dW[i] * dW[i] - dt_ * trace[i]);
  }
  return out;
}

StateVector LevelStepper::full_step(const StateVector& u_prev, const StateVector& g_prev,
                                    const StateVector& drift_at, const StateVector& dW) const {
  StateVector rhs = u_prev + dt_ * problem::nemytskii(problem_->drift, drift_at) + g_prev.cwiseProduct(dW) +
                    milstein_correction(u_prev, dW);
  return solve(dt_, rhs);
}

StageAndNext LevelStepper::drmgfe_step(const StateVector& u_prev, const StepInputs& in) const {
  check_inputs(in);
  const StateVector g_prev = problem::nemytskii(problem_->diffusion, u_prev);
  const StateVector dW = cov_->field_at_nodes(in.full);

  StateVector stage;
  if (in.xi.cells == 0) {
    stage = u_prev;
  } else {
    const double alpha = in.xi.cells == in.xi.ratio ? dt_ : in.xi.value() * dt_;
    const StateVector dW_stage = in.xi.cells == in.xi.ratio ? dW : cov_->field_at_nodes(in.stage);
    StateVector rhs = u_prev + alpha * problem::nemytskii(problem_->drift, u_prev) + g_prev.cwiseProduct(dW_stage);
    stage = solve(alpha, rhs);
  }
  StateVector next = full_step(u_prev, g_prev, stage, dW);
  return {std::move(stage), std::move(next)};
}

StateVector LevelStepper::baseline_step(const StateVector& u_prev, const StepInputs& in) const {
  check_inputs(in);
  const StateVector g_prev = problem::nemytskii(problem_->diffusion, u_prev);
  return full_step(u_prev, g_prev, u_prev, cov_->field_at_nodes(in.full));
}

StateVector LevelStepper::step(SchemeKind kind, const StateVector& u_prev, const StepInputs& in) const {
  return kind == SchemeKind::Drmgfe ? drmgfe_step(u_prev, in).next : baseline_step(u_prev, in);
}

StateVector milstein_correction(const fem::FemSpace& space, const noise::CovarianceModel& cov,
                                const problem::ProblemSpec& problem, const StateVector& u,
                                const noise::ModeIncrements& full, double dt) {
  const LevelStepper stepper(space, cov, problem, dt, false);
  return stepper.milstein_correction(u, cov.field_at_nodes(full));
}

StageAndNext drmgfe_step(const fem::FemSpace& space, const noise::CovarianceModel& cov,
                         const problem::ProblemSpec& problem, const StateVector& u_prev, const StepInputs& inputs) {
  return LevelStepper(space, cov, problem, inputs.dt, false).drmgfe_step(u_prev, inputs);
}

StateVector baseline_milstein_step(const fem::FemSpace& space, const noise::CovarianceModel& cov,
                                   const problem::ProblemSpec& problem, const StateVector& u_prev,
                                   const StepInputs& inputs) {
  return LevelStepper(space, cov, problem, inputs.dt, false).baseline_step(u_prev, inputs);
}

}  // namespace drmgfe::schemes
