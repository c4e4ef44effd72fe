#include "drmgfe/noise/path_context.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace drmgfe::noise {

namespace {

constexpr std::uint32_t kNormalStream = 0x4E4F524Du;   // "NORM"
constexpr std::uint32_t kUniformStream = 0x554E4946u;  // "UNIF"

std::uint64_t join(std::uint32_t hi, std::uint32_t lo) { return (std::uint64_t{hi} << 32) | lo; }

double tick_scale(double cell_dt) { return std::ldexp(std::sqrt(cell_dt), -32); }

}  // namespace

double BrownianIncrement::value() const noexcept { return static_cast<double>(ticks) * tick_scale(cell_dt); }

double ModeIncrements::value(std::size_t mode) const noexcept {
  return static_cast<double>(ticks[mode]) * tick_scale(cell_dt);
}

Eigen::VectorXd ModeIncrements::values() const {
  const double scale = tick_scale(cell_dt);
  Eigen::VectorXd out(static_cast<Eigen::Index>(ticks.size()));
  for (std::size_t j = 0; j < ticks.size(); ++j) out[static_cast<Eigen::Index>(j)] = static_cast<double>(ticks[j]) * scale;
  return out;
}

PathContext::PathContext(std::uint64_t master_seed, std::uint64_t sample_index, std::int64_t path_cells,
                         double cell_dt, std::size_t mode_count)
    : seed_(master_seed), sample_(sample_index), cells_(path_cells), cell_dt_(cell_dt), modes_(mode_count) {
  if (path_cells < 1) throw std::invalid_argument("path needs at least one cell");
  if (!(cell_dt >= 0.0) || !std::isfinite(cell_dt)) throw std::invalid_argument("path cell width must be finite and >= 0");
  if (mode_count < 1) throw std::invalid_argument("path needs at least one mode");
  const std::uint64_t k = mix64(master_seed ^ mix64(sample_index + 0x632BE59BD9B4E019ull));
  key_ = {static_cast<std::uint32_t>(k), static_cast<std::uint32_t>(k >> 32)};
}

std::int64_t PathContext::cell_ticks(std::size_t mode, std::int64_t cell) const noexcept {
  const auto c = static_cast<std::uint64_t>(cell);
  const auto out = Philox4x32::generate(
      {static_cast<std::uint32_t>(c), static_cast<std::uint32_t>(c >> 32), static_cast<std::uint32_t>(mode), kNormalStream},
      key_);
  const double z = normal_quantile(open_unit_interval(join(out[0], out[1])));
  return std::llround(z * kTicksPerUnit);
}

void PathContext::fill_cell_ticks(std::int64_t cell, std::span<std::int64_t> out) const noexcept {
  for (std::size_t j = 0; j < out.size(); ++j) out[j] = cell_ticks(j, cell);
}

BrownianIncrement PathContext::mode_increment(std::size_t mode, std::int64_t a, std::int64_t b) const {
  if (mode >= modes_) throw std::out_of_range("mode index " + std::to_string(mode) + " out of range");
  if (a < 0 || b > cells_ || a >= b) {
    throw std::out_of_range("cell range [" + std::to_string(a) + ", " + std::to_string(b) +
                            ") is empty or outside [0, " + std::to_string(cells_) + ")");
  }
  BrownianIncrement inc{0, cell_dt_};
  for (std::int64_t k = a; k < b; ++k) inc.ticks += cell_ticks(mode, k);
  return inc;
}

ModeIncrements PathContext::increments(std::int64_t a, std::int64_t b) const {
  if (a < 0 || b > cells_ || a > b) {
    throw std::out_of_range("cell range [" + std::to_string(a) + ", " + std::to_string(b) + ") outside the path");
  }
  ModeIncrements inc = ModeIncrements::zero(modes_, cell_dt_);
  inc.span_cells = b - a;
  for (std::int64_t k = a; k < b; ++k) {
    for (std::size_t j = 0; j < modes_; ++j) inc.ticks[j] += cell_ticks(j, k);
  }
  return inc;
}

double PathContext::uniform(std::int64_t level_ratio, std::int64_t step) const noexcept {
  const auto n = static_cast<std::uint64_t>(step);
  const auto out = Philox4x32::generate({static_cast<std::uint32_t>(n), static_cast<std::uint32_t>(n >> 32),
                                         static_cast<std::uint32_t>(level_ratio), kUniformStream},
                                        key_);
  return open_unit_interval(join(out[0], out[1]));
}

StageFraction PathContext::draw_stage_fraction(std::int64_t level_ratio, std::int64_t step) const {
  if (level_ratio < 1) throw std::invalid_argument("level step ratio must be a positive integer");
  const double u = uniform(level_ratio, step);
  return {std::llround(static_cast<double>(level_ratio) * u), level_ratio};
}

}  // namespace drmgfe::noise
