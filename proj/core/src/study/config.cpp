#include "drmgfe/study/config.hpp"

#include <cmath>

#include "drmgfe/errors.hpp"

namespace drmgfe::study {

std::string to_string(StudyAxis axis) { return axis == StudyAxis::Time ? "time" : "space"; }

std::string to_string(Preset preset) { return preset == Preset::Paper ? "paper" : "desk"; }

std::optional<StudyAxis> parse_axis(std::string_view name) {
  if (name == "time") return StudyAxis::Time;
  if (name == "space") return StudyAxis::Space;
  return std::nullopt;
}

std::optional<Preset> parse_preset(std::string_view name) {
  if (name == "paper") return Preset::Paper;
  if (name == "desk") return Preset::Desk;
  return std::nullopt;
}

namespace {

constexpr double kGridTolerance = 1e-9;

// round(numerator / denominator), provided the quotient is integral to kGridTolerance.
std::optional<std::int64_t> integral_ratio(double numerator, double denominator) {
  const double r = numerator / denominator;
  const double n = std::round(r);
  if (n < 1.0 || std::abs(r - n) > kGridTolerance * n) return std::nullopt;
  return static_cast<std::int64_t>(n);
}

bool is_power_of_two(std::int64_t v) { return v > 0 && (v & (v - 1)) == 0; }

}  // namespace

ResolvedStudy resolve(const StudyConfig& c) {
  if (c.dim != 1 && c.dim != 2) throw ConfigError("problem.dim", "must be 1 or 2");
  if (!(c.final_time > 0.0)) throw ConfigError("problem.final_time", "must be positive");
  if (!(c.delta >= 0.0)) throw ConfigError("problem.delta", "must be nonnegative");
  if (c.modes_per_axis < 1) throw ConfigError("noise.modes", "must be at least 1");
  if (c.samples < 1) throw ConfigError("study.samples", "must be at least 1");
  if (c.ladder.empty()) throw ConfigError("study.ladder", "needs at least one level");
  if (!(c.reference_dt > 0.0)) throw ConfigError("study.reference_dt", "must be positive");
  if (!(c.reference_h > 0.0)) throw ConfigError("study.reference_h", "must be positive");

  ResolvedStudy r;
  const auto path_cells = integral_ratio(c.final_time, c.reference_dt);
  if (!path_cells) throw ConfigError("study.reference_dt", "final_time / reference_dt must be an integer");
  r.path_cells = *path_cells;

  const auto ref_cells = integral_ratio(1.0, c.reference_h);
  if (!ref_cells || *ref_cells < 2) throw ConfigError("study.reference_h", "1 / reference_h must be an integer >= 2");
  r.reference_cells = static_cast<int>(*ref_cells);

  for (std::size_t i = 0; i < c.ladder.size(); ++i) {
    const double v = c.ladder[i];
    if (!(v > 0.0)) throw ConfigError("study.ladder", "entries must be positive");
    if (i > 0 && !(v < c.ladder[i - 1])) throw ConfigError("study.ladder", "entries must decrease strictly");
    if (c.axis == StudyAxis::Time) {
      const auto steps = integral_ratio(c.final_time, v);
      if (!steps) throw ConfigError("study.ladder", "final_time / dt must be an integer for every level");
      if (r.path_cells % *steps != 0 || *steps >= r.path_cells) {
        throw ConfigError("study.ladder", "every level dt must be an integer multiple (> 1) of reference_dt");
      }
      r.level_cells_per_step.push_back(r.path_cells / *steps);
    } else {
      const auto cells = integral_ratio(1.0, v);
      if (!cells || *cells < 2) throw ConfigError("study.ladder", "1 / h must be an integer >= 2 for every level");
      if (*cells >= r.reference_cells || r.reference_cells % *cells != 0 ||
          !is_power_of_two(r.reference_cells / *cells)) {
        throw ConfigError("study.ladder", "the reference mesh must be a strict power-of-two refinement of every level");
      }
      r.level_mesh_cells.push_back(static_cast<int>(*cells));
    }
  }
  return r;
}

StudyConfig make_preset(Preset preset, StudyAxis axis, int dim) {
  if (dim != 1 && dim != 2) throw ConfigError("problem.dim", "must be 1 or 2");
  const bool paper = preset == Preset::Paper;
  StudyConfig c;
  c.dim = dim;
  c.axis = axis;
  c.final_time = 0.1;
  c.delta = 0.5;
  c.modes_per_axis = noise::ModeSpec::default_for(dim).modes_per_axis;

  if (dim == 1 && axis == StudyAxis::Time) {
    c.ladder = {1e-2, 5e-3, 2.5e-3, 1.25e-3, 6.25e-4};
    c.reference_h = 1.0 / 128;
    // 1e-5 does not divide 6.25e-4; 6.25e-4 / 64 is the nearest admissible step
    c.reference_dt = paper ? 1e-6 : 9.765625e-6;
    c.samples = paper ? 500 : 100;
  } else if (dim == 1) {
    c.ladder = {1.0 / 16, 1.0 / 32, 1.0 / 64, 1.0 / 128, 1.0 / 256};
    c.reference_h = 1.0 / 512;
    c.reference_dt = 1e-5;
    c.samples = paper ? 500 : 100;
  } else if (axis == StudyAxis::Time) {
    if (paper) {
      c.ladder = {2.5e-4, 1.25e-4, 6.25e-5, 3.125e-5, 1.5625e-5};
      c.reference_h = 1.0 / 64;
      c.reference_dt = 9.765625e-7;  // 1.5625e-5 / 16, the admissible step nearest 1e-6
      c.samples = 500;
    } else {
      c.ladder = {2.5e-4, 1.25e-4, 6.25e-5, 3.125e-5};
      c.reference_h = 1.0 / 32;
      c.reference_dt = 7.8125e-6;  // 3.125e-5 / 4, the admissible step nearest 1e-5
      c.samples = 50;
    }
  } else {
    if (paper) {
      c.ladder = {1.0 / 8, 1.0 / 16, 1.0 / 32, 1.0 / 64, 1.0 / 128};
      c.reference_h = 1.0 / 256;
      c.samples = 500;
    } else {
      c.ladder = {1.0 / 8, 1.0 / 16, 1.0 / 32, 1.0 / 64};
      c.reference_h = 1.0 / 128;
      c.samples = 50;
    }
    c.reference_dt = 1e-4;
  }
  return c;
}

}  // namespace drmgfe::study
