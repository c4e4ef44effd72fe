#include "drmgfe/study/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

namespace drmgfe::study {

using fem::StateVector;

double strong_error(std::span<const StateVector> reference, const fem::FemSpace& reference_space,
                    std::span<const StateVector> approximation, const fem::FemSpace& comparison_space) {
  if (reference.size() != approximation.size()) {
    throw std::invalid_argument("reference and approximation sample counts differ (" +
                                std::to_string(reference.size()) + " vs " + std::to_string(approximation.size()) +
                                ")");
  }
  if (reference.empty()) throw std::invalid_argument("strong error needs at least one sample");
  const bool same = &reference_space == &comparison_space;
  double sum = 0.0;
  for (std::size_t s = 0; s < reference.size(); ++s) {
    const StateVector a =
        same ? approximation[s] : fem::prolongate_to_fine(comparison_space, reference_space, approximation[s]);
    const double e = reference_space.mass_norm(reference[s] - a);
    sum += e * e;
  }
  return std::sqrt(sum / static_cast<double>(reference.size()));
}

std::vector<double> eoc(std::span<const double> errors) {
  if (errors.size() < 2) throw std::invalid_argument("EOC needs at least two errors");
  for (double e : errors) {
    if (!(e > 0.0)) throw std::invalid_argument("EOC needs positive errors");
  }
  std::vector<double> out;
  out.reserve(errors.size() - 1);
  for (std::size_t i = 0; i + 1 < errors.size(); ++i) out.push_back(std::log2(errors[i] / errors[i + 1]));
  return out;
}

struct StudyPlan::Level {
  std::shared_ptr<const fem::FemSpace> space;
  std::shared_ptr<const noise::CovarianceModel> cov;
  std::unique_ptr<schemes::LevelStepper> stepper;
  StateVector initial;
  std::int64_t cells_per_step = 1;
};

StudyPlan::StudyPlan(StudyConfig config)
    : config_(std::move(config)), grid_(resolve(config_)), problem_(config_.make_problem()) {
  const auto spec = config_.mode_spec();
  auto reference_space = std::make_shared<const fem::FemSpace>(fem::Mesh::build(config_.dim, grid_.reference_cells));
  auto reference_cov = std::make_shared<const noise::CovarianceModel>(*reference_space, spec);
  const StateVector reference_initial = reference_space->l2_project(problem_.initial);

  auto make_level = [&](std::shared_ptr<const fem::FemSpace> space, std::shared_ptr<const noise::CovarianceModel> cov,
                        StateVector initial, std::int64_t cells_per_step) {
    auto level = std::make_unique<Level>();
    const double dt = static_cast<double>(cells_per_step) * config_.reference_dt;
    level->stepper = std::make_unique<schemes::LevelStepper>(*space, *cov, problem_, dt);
    level->space = std::move(space);
    level->cov = std::move(cov);
    level->initial = std::move(initial);
    level->cells_per_step = cells_per_step;
    return level;
  };

  for (std::size_t i = 0; i < config_.ladder.size(); ++i) {
    if (config_.axis == StudyAxis::Time) {
      levels_.push_back(make_level(reference_space, reference_cov, reference_initial, grid_.level_cells_per_step[i]));
    } else {
      auto space = std::make_shared<const fem::FemSpace>(fem::Mesh::build(config_.dim, grid_.level_mesh_cells[i]));
      auto cov = std::make_shared<const noise::CovarianceModel>(*space, spec);
      StateVector initial = space->l2_project(problem_.initial);
      levels_.push_back(make_level(std::move(space), std::move(cov), std::move(initial), 1));
    }
  }
  levels_.push_back(make_level(reference_space, reference_cov, reference_initial, 1));
}

StudyPlan::~StudyPlan() = default;

const fem::FemSpace& StudyPlan::reference_space() const { return *levels_.back()->space; }
const fem::FemSpace& StudyPlan::level_space(std::size_t level) const { return *levels_.at(level)->space; }
const noise::CovarianceModel& StudyPlan::level_covariance(std::size_t level) const { return *levels_.at(level)->cov; }
const noise::CovarianceModel& StudyPlan::reference_covariance() const { return *levels_.back()->cov; }

schemes::TimeLevel StudyPlan::reference_time_level() const { return {grid_.path_cells, 1}; }

schemes::TimeLevel StudyPlan::time_level(std::size_t level) const {
  const auto m = levels_.at(level)->cells_per_step;
  return {grid_.path_cells / m, m};
}

noise::PathContext StudyPlan::path(std::uint64_t sample) const {
  return {config_.seed, sample, grid_.path_cells, config_.reference_dt, reference_covariance().mode_count()};
}

StudyPlan::SampleStates StudyPlan::simulate(std::uint64_t sample) const {
  const noise::PathContext ctx = path(sample);
  std::vector<schemes::StreamingIntegrator> runs;
  runs.reserve(levels_.size());
  for (std::size_t i = 0; i < levels_.size(); ++i) {
    const auto& level = *levels_[i];
    const auto kind = i + 1 == levels_.size() ? schemes::SchemeKind::Drmgfe : config_.scheme;
    runs.emplace_back(kind, *level.stepper, ctx, level.cells_per_step, level.initial);
  }

  std::vector<std::int64_t> ticks(ctx.mode_count());
  for (std::int64_t cell = 0; cell < ctx.path_cells(); ++cell) {
    ctx.fill_cell_ticks(cell, ticks);
    for (auto& run : runs) run.consume(cell, ticks);
  }

  SampleStates out;
  out.reference = runs.back().state();
  for (std::size_t i = 0; i + 1 < runs.size(); ++i) out.levels.push_back(runs[i].state());
  return out;
}

std::vector<double> StudyPlan::squared_errors(const SampleStates& states) const {
  std::vector<double> out;
  out.reserve(level_count());
  const auto& ref_space = reference_space();
  for (std::size_t i = 0; i < level_count(); ++i) {
    const auto& space = level_space(i);
    const double e = &space == &ref_space
                         ? ref_space.mass_norm(states.reference - states.levels[i])
                         : ref_space.mass_norm(states.reference - fem::prolongate_to_fine(space, ref_space, states.levels[i]));
    out.push_back(e * e);
  }
  return out;
}

ConvergenceReport run_study(const StudyConfig& config, const ProgressCallback& progress) {
  const auto start = std::chrono::steady_clock::now();
  const StudyPlan plan(config);
  const std::size_t samples = config.samples;

  std::size_t workers = config.workers != 0 ? config.workers : std::max(1u, std::thread::hardware_concurrency());
  workers = std::min(workers, samples);

  std::vector<std::vector<double>> per_sample(samples);
  std::vector<std::exception_ptr> failures(samples);
  std::atomic<std::size_t> next{0};
  std::atomic<std::size_t> done{0};
  std::atomic<bool> abort{false};
  std::mutex progress_mutex;

  auto worker = [&] {
    for (;;) {
      const std::size_t s = next.fetch_add(1);
      if (s >= samples || abort.load()) return;
      try {
        per_sample[s] = plan.squared_errors(plan.simulate(s));
      } catch (...) {
        failures[s] = std::current_exception();
        abort.store(true);
        return;
      }
      const std::size_t finished = done.fetch_add(1) + 1;
      if (progress) {
        std::lock_guard lock(progress_mutex);
        progress(finished, samples);
      }
    }
  };

  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(worker);
  }

  for (std::size_t s = 0; s < samples; ++s) {
    if (!failures[s]) continue;
    try {
      std::rethrow_exception(failures[s]);
    } catch (const std::exception& e) {
      throw StudyError(s, e.what());
    }
  }

  ConvergenceReport report;
  report.config = config;
  const std::size_t levels = plan.level_count();
  std::vector<double> errors;
  for (std::size_t l = 0; l < levels; ++l) {
    double sum = 0.0;
    double sum_sq = 0.0;
    for (std::size_t s = 0; s < samples; ++s) {
      sum += per_sample[s][l];
      sum_sq += per_sample[s][l] * per_sample[s][l];
    }
    const double n = static_cast<double>(samples);
    const double mean = sum / n;
    const double var = samples > 1 ? std::max(0.0, (sum_sq - n * mean * mean) / (n - 1.0)) : 0.0;
    const double u_error = std::sqrt(mean);
    const double se = u_error > 0.0 ? std::sqrt(var / n) / (2.0 * u_error) : 0.0;
    report.levels.push_back({config.ladder[l], u_error, se});
    errors.push_back(u_error);
  }
  if (levels >= 2) report.eoc = eoc(errors);

  for (std::size_t l = 0; l + 1 < levels; ++l) {
    if (!(errors[l + 1] < errors[l])) {
      report.warnings.push_back("u_error does not decrease from level " + std::to_string(l + 1) + " to level " +
                                std::to_string(l + 2));
    }
  }
  report.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

}  // namespace drmgfe::study
