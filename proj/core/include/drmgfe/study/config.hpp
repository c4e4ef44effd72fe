#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "drmgfe/noise/covariance.hpp"
#include "drmgfe/problem/problem.hpp"
#include "drmgfe/schemes/steppers.hpp"

namespace drmgfe::study {

enum class StudyAxis { Time, Space };
enum class Preset { Paper, Desk };

std::string to_string(StudyAxis axis);
std::string to_string(Preset preset);
std::optional<StudyAxis> parse_axis(std::string_view name);
std::optional<Preset> parse_preset(std::string_view name);

/// Everything that determines a convergence study's numbers.
///
/// Time axis: every level runs on the reference mesh with its own step from
/// `ladder`; the reference runs at reference_dt on the same mesh.
/// Space axis: every level runs at reference_dt on a mesh of size h from
/// `ladder`; the reference mesh has size reference_h.
/// The Brownian path is resolved at reference_dt in both cases.
struct StudyConfig {
  int dim = 1;
  double final_time = 0.1;
  double delta = 0.5;
  problem::DriftChoice drift = problem::DriftChoice::Bounded;
  problem::InitialChoice initial = problem::InitialChoice::Sine;
  int modes_per_axis = 100;
  noise::NoiseLoad noise_load = noise::NoiseLoad::Projected;

  StudyAxis axis = StudyAxis::Time;
  schemes::SchemeKind scheme = schemes::SchemeKind::Drmgfe;
  std::vector<double> ladder;
  double reference_dt = 1e-6;
  double reference_h = 1.0 / 128.0;
  std::size_t samples = 500;
  std::uint64_t seed = 20240601;

  /// 0 means std::thread::hardware_concurrency(). Does not affect results.
  std::size_t workers = 0;

  noise::ModeSpec mode_spec() const {
    return {dim == 1 ? noise::ModeFamily::InverseSquare : noise::ModeFamily::ExponentialTensor, modes_per_axis,
            noise_load};
  }
  problem::ProblemSpec make_problem() const { return problem::make_problem(delta, dim, drift, initial); }
};

/// Integer grid data derived from a StudyConfig.
struct ResolvedStudy {
  std::int64_t path_cells = 0;
  int reference_cells = 0;
  /// Per ladder level: path cells per step (time axis) or mesh cells per side (space axis).
  std::vector<std::int64_t> level_cells_per_step;
  std::vector<int> level_mesh_cells;
};

/// Checks the grid invariants and converts to integers. Throws ConfigError
/// naming the offending key.
ResolvedStudy resolve(const StudyConfig& config);

/// Built-in settings for the tables of the one- and two-dimensional experiments.
StudyConfig make_preset(Preset preset, StudyAxis axis, int dim);

}  // namespace drmgfe::study
