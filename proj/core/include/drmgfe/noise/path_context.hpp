#pragma once

#include <Eigen/Core>

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "drmgfe/noise/counter_rng.hpp"

namespace drmgfe::noise {

/// Resolution of the fixed-point grid onto which every per-cell standard
/// normal draw is rounded. Integer sums of cell draws are associative, which
/// makes Brownian increments exactly additive across any split of the path.
inline constexpr double kTicksPerUnit = 0x1.0p32;

/// Brownian increment of one mode over a run of path cells, held as an exact
/// integer sum of quantized unit-normal cell draws.
struct BrownianIncrement {
  std::int64_t ticks = 0;
  double cell_dt = 0.0;

  /// beta(b dt) - beta(a dt) in time units.
  double value() const noexcept;

  friend BrownianIncrement operator+(BrownianIncrement a, BrownianIncrement b) noexcept {
    return {a.ticks + b.ticks, a.cell_dt};
  }
  friend bool operator==(const BrownianIncrement&, const BrownianIncrement&) = default;
};

/// Increments of every KL mode over one span of path cells.
struct ModeIncrements {
  std::vector<std::int64_t> ticks;
  std::int64_t span_cells = 0;
  double cell_dt = 0.0;

  std::size_t mode_count() const noexcept { return ticks.size(); }
  double span_time() const noexcept { return static_cast<double>(span_cells) * cell_dt; }
  double value(std::size_t mode) const noexcept;
  Eigen::VectorXd values() const;

  static ModeIncrements zero(std::size_t modes, double cell_dt) {
    return {std::vector<std::int64_t>(modes, 0), 0, cell_dt};
  }
};

/// Quantized stage fraction xi = cells / ratio.
struct StageFraction {
  std::int64_t cells = 0;
  std::int64_t ratio = 1;

  double value() const noexcept { return static_cast<double>(cells) / static_cast<double>(ratio); }
};

/// Deterministic randomness of one Monte Carlo sample.
///
/// The Brownian motions beta_j are discretized on a uniform path grid of
/// path_cells cells of width cell_dt. The standard normal of (mode j, cell k)
/// and the uniform of (time level, step n) are pure functions of their keys
/// and (master_seed, sample_index), so any time level can regenerate its
/// increments in any order and every level sees the same path.
///
/// Time levels are identified by their step ratio m = level dt / cell_dt.
/// Levels with equal step size therefore share their stage fractions.
class PathContext {
 public:
  PathContext(std::uint64_t master_seed, std::uint64_t sample_index, std::int64_t path_cells, double cell_dt,
              std::size_t mode_count);

  std::uint64_t master_seed() const noexcept { return seed_; }
  std::uint64_t sample_index() const noexcept { return sample_; }
  std::int64_t path_cells() const noexcept { return cells_; }
  double cell_dt() const noexcept { return cell_dt_; }
  std::size_t mode_count() const noexcept { return modes_; }

  /// Quantized unit normal of (mode, cell), in ticks. Unchecked.
  std::int64_t cell_ticks(std::size_t mode, std::int64_t cell) const noexcept;

  /// Unit normals of every mode for one cell, in ticks. Unchecked.
  void fill_cell_ticks(std::int64_t cell, std::span<std::int64_t> out) const noexcept;

  /// beta_j(b dt) - beta_j(a dt). Requires 0 <= a < b <= path_cells.
  BrownianIncrement mode_increment(std::size_t mode, std::int64_t a, std::int64_t b) const;

  /// Increments of all modes over [a, b); a == b yields zeros.
  ModeIncrements increments(std::int64_t a, std::int64_t b) const;

  /// U(0,1) variate of (level, step).
  double uniform(std::int64_t level_ratio, std::int64_t step) const noexcept;

  /// xi = round(m U) / m for a level whose steps span m path cells.
  StageFraction draw_stage_fraction(std::int64_t level_ratio, std::int64_t step) const;

 private:
  std::uint64_t seed_;
  std::uint64_t sample_;
  std::int64_t cells_;
  double cell_dt_;
  std::size_t modes_;
  Philox4x32::Key key_;
};

}  // namespace drmgfe::noise
