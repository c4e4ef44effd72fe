#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "drmgfe/fem/fem_space.hpp"
#include "drmgfe/noise/covariance.hpp"
#include "drmgfe/schemes/integrate.hpp"
#include "drmgfe/study/config.hpp"

namespace drmgfe::study {

/// A Monte Carlo sample failed; the study is aborted rather than continuing
/// with fewer samples.
class StudyError : public std::runtime_error {
 public:
  StudyError(std::uint64_t sample, const std::string& what)
      : std::runtime_error("sample " + std::to_string(sample) + ": " + what), sample_(sample) {}
  std::uint64_t sample() const noexcept { return sample_; }

 private:
  std::uint64_t sample_;
};

struct LevelError {
  /// dt (time axis) or h (space axis).
  double resolution = 0.0;
  double u_error = 0.0;
  /// Delta-method standard error of u_error over the samples.
  double standard_error = 0.0;
};

struct ConvergenceReport {
  StudyConfig config;
  std::vector<LevelError> levels;
  std::vector<double> eoc;
  std::vector<std::string> warnings;
  double wall_seconds = 0.0;
};

/// (mean_s ||u_ref,s - P u_s||_M^2)^(1/2) on the reference space, where P
/// embeds the (nested, coarser) comparison space into it: the exact L2(D)
/// distance of the two P1 functions.
double strong_error(std::span<const fem::StateVector> reference, const fem::FemSpace& reference_space,
                    std::span<const fem::StateVector> approximation, const fem::FemSpace& comparison_space);

/// log2(e_i / e_{i+1}) for errors ordered by halving resolution.
/// Throws std::invalid_argument for fewer than two or nonpositive errors.
std::vector<double> eoc(std::span<const double> errors);

/// Spaces, covariance tables and step operators of one study, shared
/// read-only by every sample.
class StudyPlan {
 public:
  explicit StudyPlan(StudyConfig config);
  ~StudyPlan();
  StudyPlan(const StudyPlan&) = delete;
  StudyPlan& operator=(const StudyPlan&) = delete;

  struct SampleStates {
    fem::StateVector reference;
    std::vector<fem::StateVector> levels;
  };

  const StudyConfig& config() const noexcept { return config_; }
  const ResolvedStudy& grid() const noexcept { return grid_; }
  std::size_t level_count() const noexcept { return config_.ladder.size(); }
  const problem::ProblemSpec& problem() const noexcept { return problem_; }

  const fem::FemSpace& reference_space() const;
  const fem::FemSpace& level_space(std::size_t level) const;
  const noise::CovarianceModel& level_covariance(std::size_t level) const;
  const noise::CovarianceModel& reference_covariance() const;
  schemes::TimeLevel reference_time_level() const;
  schemes::TimeLevel time_level(std::size_t level) const;

  noise::PathContext path(std::uint64_t sample) const;

  /// Final states of the reference and of every level, from one streamed pass
  /// over the sample's path.
  SampleStates simulate(std::uint64_t sample) const;

  /// ||R u_ref - u_level||_M^2 per level.
  std::vector<double> squared_errors(const SampleStates& states) const;

 private:
  struct Level;

  StudyConfig config_;
  ResolvedStudy grid_;
  problem::ProblemSpec problem_;
  std::vector<std::unique_ptr<Level>> levels_;  // ladder levels, then the reference
};

using ProgressCallback = std::function<void(std::size_t done, std::size_t total)>;

/// Runs every sample, reduces squared errors in sample order, and computes
/// EOCs. Results do not depend on the worker count.
ConvergenceReport run_study(const StudyConfig& config, const ProgressCallback& progress = {});

}  // namespace drmgfe::study
