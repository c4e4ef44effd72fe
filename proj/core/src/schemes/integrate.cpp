#include "drmgfe/schemes/integrate.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace drmgfe::schemes {

StateVector integrate(SchemeKind kind, const fem::FemSpace& space, const noise::CovarianceModel& cov,
                      const problem::ProblemSpec& problem, const noise::PathContext& ctx, TimeLevel level) {
  StateVector u = space.l2_project(problem.initial);
  if (level.steps == 0) return u;
  if (level.steps < 0 || level.cells_per_step < 1 || level.steps * level.cells_per_step != ctx.path_cells()) {
    throw std::invalid_argument("time level (" + std::to_string(level.steps) + " steps x " +
                                std::to_string(level.cells_per_step) + " cells) does not tile a path of " +
                                std::to_string(ctx.path_cells()) + " cells");
  }

  const double dt = static_cast<double>(level.cells_per_step) * ctx.cell_dt();
  const LevelStepper stepper(space, cov, problem, dt);
  const std::int64_t m = level.cells_per_step;
  for (std::int64_t n = 0; n < level.steps; ++n) {
    const std::int64_t a = n * m;
    StepInputs in{dt, ctx.draw_stage_fraction(m, n), {}, {}};
    in.stage = ctx.increments(a, a + in.xi.cells);
    in.full = in.stage;
    const auto rest = ctx.increments(a + in.xi.cells, a + m);
    for (std::size_t j = 0; j < in.full.ticks.size(); ++j) in.full.ticks[j] += rest.ticks[j];
    in.full.span_cells = m;
    u = stepper.step(kind, u, in);
  }
  return u;
}

StreamingIntegrator::StreamingIntegrator(SchemeKind kind, const LevelStepper& stepper, const noise::PathContext& ctx,
                                         std::int64_t cells_per_step, StateVector initial)
    : kind_(kind),
      stepper_(&stepper),
      ctx_(&ctx),
      ratio_(cells_per_step),
      state_(std::move(initial)),
      stage_(ctx.mode_count(), 0),
      full_(ctx.mode_count(), 0) {
  if (cells_per_step < 1 || ctx.path_cells() % cells_per_step != 0) {
    throw std::invalid_argument("level step must span a whole number of path cells dividing the path");
  }
}

void StreamingIntegrator::consume(std::int64_t cell, std::span<const std::int64_t> ticks) {
  if (cell != next_cell_) throw std::logic_error("path cells must be streamed in order");
  const std::int64_t offset = cell - steps_ * ratio_;
  ++next_cell_;
  if (offset == 0) {
    xi_ = ctx_->draw_stage_fraction(ratio_, steps_);
    std::fill(stage_.begin(), stage_.end(), 0);
    std::fill(full_.begin(), full_.end(), 0);
  }
  const bool in_stage = offset < xi_.cells;
  for (std::size_t j = 0; j < full_.size(); ++j) {
    full_[j] += ticks[j];
    if (in_stage) stage_[j] += ticks[j];
  }
  if (offset + 1 == ratio_) {
    const double cell_dt = ctx_->cell_dt();
    StepInputs in{stepper_->dt(), xi_, {stage_, xi_.cells, cell_dt}, {full_, ratio_, cell_dt}};
    state_ = stepper_->step(kind_, state_, in);
    ++steps_;
  }
}

}  // namespace drmgfe::schemes
