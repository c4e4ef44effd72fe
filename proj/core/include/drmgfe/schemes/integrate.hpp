#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "drmgfe/schemes/steppers.hpp"

namespace drmgfe::schemes {

/// Uniform time grid whose steps each span `cells_per_step` path cells.
struct TimeLevel {
  std::int64_t steps = 0;
  std::int64_t cells_per_step = 1;
};

/// Runs `level.steps` steps from the L2 projection of the initial datum,
/// regenerating each step's increments from the path context.
/// Requires steps * cells_per_step == ctx.path_cells() unless steps == 0.
StateVector integrate(SchemeKind kind, const fem::FemSpace& space, const noise::CovarianceModel& cov,
                      const problem::ProblemSpec& problem, const noise::PathContext& ctx, TimeLevel level);

/// Same recursion as integrate(), driven by a stream of path cells.
///
/// Several integrators on different levels can consume one pass over the path;
/// integer tick sums make the result bit-identical to integrate().
class StreamingIntegrator {
 public:
  StreamingIntegrator(SchemeKind kind, const LevelStepper& stepper, const noise::PathContext& ctx,
                      std::int64_t cells_per_step, StateVector initial);

  /// Feeds the ticks of every mode for `cell`; cells must arrive in order.
  void consume(std::int64_t cell, std::span<const std::int64_t> ticks);

  const StateVector& state() const noexcept { return state_; }
  std::int64_t steps_taken() const noexcept { return steps_; }

 private:
  SchemeKind kind_;
  const LevelStepper* stepper_;
  const noise::PathContext* ctx_;
  std::int64_t ratio_;
  StateVector state_;
  std::int64_t steps_ = 0;
  std::int64_t next_cell_ = 0;
  noise::StageFraction xi_;
  std::vector<std::int64_t> stage_;
  std::vector<std::int64_t> full_;
};

}  // namespace drmgfe::schemes
