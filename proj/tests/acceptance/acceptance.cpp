// Acceptance runner: one pass/fail line per clause.
//
//   drmgfe_acceptance <criterion> [variant]
//
// criterion 1|2 take desk|paper, 3 takes time|space; 4, 5, 6 take none.
// Each study's report is written to ./acceptance-<criterion>-<variant>.csv.
// Exit status 0 iff every clause passed.

#include <fmt/format.h>

#include <chrono>
#include <cmath>
#include <string>
#include <vector>

#include "drmgfe/oracle/validation.hpp"
#include "drmgfe/study/harness.hpp"
#include "drmgfe/study/report.hpp"

namespace {

using drmgfe::study::ConvergenceReport;
using drmgfe::study::Preset;
using drmgfe::study::StudyAxis;

struct Band {
  double lo;
  double hi;
};

// Pinned acceptance bands.
constexpr Band kTimeEoc1dFull{0.80, 1.15};
constexpr Band kTimeEoc1dDesk{0.75, 1.25};
constexpr Band kSpaceEoc1dFull{1.85, 2.10};
constexpr Band kSpaceEoc1dDesk{1.8, 2.2};
constexpr Band kTimeEoc2d{0.8, 1.1};
constexpr Band kSpaceEoc2d{1.85, 2.05};
constexpr double kTimeError1d = 6.4816e-4;   // u_error at dt = 1e-2
constexpr double kSpaceError1d = 3.4857e-3;  // u_error at h = 1/16
constexpr double kMagnitudeFactor = 3.0;
constexpr double kDeskRuntimeSeconds = 15.0 * 60.0;
constexpr std::size_t kMinSamples2d = 50;

bool all_passed = true;

void line(bool pass, const std::string& criterion, const std::string& text) {
  all_passed = all_passed && pass;
  fmt::print("{}  criterion {}: {}\n", pass ? "PASS" : "FAIL", criterion, text);
}

ConvergenceReport study(Preset preset, StudyAxis axis, int dim, const std::string& tag) {
  const auto config = drmgfe::study::make_preset(preset, axis, dim);
  fmt::print("running {} {} {}D study: {} samples, {} levels\n", drmgfe::study::to_string(preset),
             drmgfe::study::to_string(axis), dim, config.samples, config.ladder.size());
  std::fflush(stdout);
  auto report = drmgfe::study::run_study(config);
  drmgfe::study::emit_csv(report, "acceptance-" + tag + ".csv");
  for (std::size_t i = 0; i < report.levels.size(); ++i) {
    const auto& l = report.levels[i];
    fmt::print("    {:>12.6e}  u_error = {:.6e} (se {:.1e}){}\n", l.resolution, l.u_error, l.standard_error,
               i == 0 ? std::string() : fmt::format("  eoc = {:.4f}", report.eoc[i - 1]));
  }
  fmt::print("    {:.1f} s\n", report.wall_seconds);
  return report;
}

void eoc_lines(const ConvergenceReport& r, Band band, const std::string& criterion, const std::string& what) {
  for (std::size_t i = 0; i < r.eoc.size(); ++i) {
    const double e = r.eoc[i];
    line(e >= band.lo && e <= band.hi, criterion,
         fmt::format("{}[{}] = {:.4f} in [{}, {}]", what, i + 1, e, band.lo, band.hi));
  }
}

void magnitude_line(const ConvergenceReport& r, double target, const std::string& criterion, const std::string& at) {
  const double e = r.levels.front().u_error;
  const double factor = std::max(e / target, target / e);
  line(factor <= kMagnitudeFactor, criterion,
       fmt::format("u_error at {} = {:.4e} within {}x of {:.4e} (factor {:.2f})", at, e, kMagnitudeFactor, target,
                   factor));
}

void oracle_line(const drmgfe::oracle::OracleResult& r, const std::string& criterion) {
  line(r.passed, criterion, fmt::format("{}: {:.6g} (target {:.6g}, tol {:.3g})", r.label, r.value, r.target, r.tolerance));
}

int usage() {
  fmt::print(stderr, "usage: drmgfe_acceptance 1|2 desk|paper | 3 time|space | 4 | 5 | 6\n");
  return 2;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 2) return usage();
  const std::string criterion = argv[1];
  const std::string variant = argc > 2 ? argv[2] : "";

  if (criterion == "1" && (variant == "desk" || variant == "paper")) {
    const bool paper = variant == "paper";
    const auto r = study(paper ? Preset::Paper : Preset::Desk, StudyAxis::Time, 1, "1-" + variant);
    const std::string id = "1 (" + variant + ")";
    eoc_lines(r, paper ? kTimeEoc1dFull : kTimeEoc1dDesk, id, "EOC_time");
    if (paper) {
      magnitude_line(r, kTimeError1d, id, "dt = 1e-2");
    } else {
      line(r.wall_seconds <= kDeskRuntimeSeconds, id,
           fmt::format("runtime {:.1f} s <= {:.0f} s", r.wall_seconds, kDeskRuntimeSeconds));
    }
  } else if (criterion == "2" && (variant == "desk" || variant == "paper")) {
    const bool paper = variant == "paper";
    const auto r = study(paper ? Preset::Paper : Preset::Desk, StudyAxis::Space, 1, "2-" + variant);
    const std::string id = "2 (" + variant + ")";
    eoc_lines(r, paper ? kSpaceEoc1dFull : kSpaceEoc1dDesk, id, "EOC_space");
    if (paper) magnitude_line(r, kSpaceError1d, id, "h = 1/16");
  } else if (criterion == "3" && (variant == "time" || variant == "space")) {
    const bool time = variant == "time";
    const auto r = study(Preset::Desk, time ? StudyAxis::Time : StudyAxis::Space, 2, "3-" + variant);
    const std::string id = "3 (" + variant + ")";
    line(r.config.samples >= kMinSamples2d, id, fmt::format("{} samples >= {}", r.config.samples, kMinSamples2d));
    eoc_lines(r, time ? kTimeEoc2d : kSpaceEoc2d, id, time ? "EOC_time" : "EOC_space");
  } else if (criterion == "4" && variant.empty()) {
    oracle_line(drmgfe::oracle::check_degeneration(100), "4");
  } else if (criterion == "5" && variant.empty()) {
    const auto start = std::chrono::steady_clock::now();
    oracle_line(drmgfe::oracle::check_deterministic_time_slope(), "5");
    oracle_line(drmgfe::oracle::check_deterministic_space_slope(), "5");
    fmt::print("    {:.1f} s\n", std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count());
  } else if (criterion == "6" && variant.empty()) {
    oracle_line(drmgfe::oracle::check_fem_eigenvalues(), "6");
    oracle_line(drmgfe::oracle::check_resolvent_contractivity(1000), "6");
    oracle_line(drmgfe::oracle::check_resolvent_powers(), "6");
    oracle_line(drmgfe::oracle::check_projection_idempotence(), "6");
    oracle_line(drmgfe::oracle::check_covariance(), "6");
    oracle_line(drmgfe::oracle::check_covariance_negative_control(), "6");
    oracle_line(drmgfe::oracle::check_milstein_double_sum(), "6");
    oracle_line(drmgfe::oracle::check_path_additivity(), "6");
    oracle_line(drmgfe::oracle::check_study_reproducibility(), "6");
  } else {
    return usage();
  }
  return all_passed ? 0 : 1;
}
