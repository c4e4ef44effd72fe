#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "drmgfe/study/harness.hpp"

namespace drmgfe::study {

/// CSV rendering of a report:
///
///     # drmgfe convergence report        metadata, '# ' prefix
///     #! [problem] ...                   resolved config, '#! ' prefix
///     resolution,u_error,eoc
///     0.01,0.00064816...,                first row has no EOC
///     0.005,0.00032754...,0.9847...
///
/// Numbers carry 17 significant digits so parsing recovers them exactly.
std::string format_csv(const ConvergenceReport& report);

/// Writes format_csv(report). Throws std::runtime_error on I/O failure and
/// std::invalid_argument for a report without levels.
void emit_csv(const ConvergenceReport& report, const std::filesystem::path& path);

struct ParsedReport {
  std::vector<double> resolution;
  std::vector<double> u_error;
  std::vector<std::optional<double>> eoc;
  std::string config_text;
};

ParsedReport parse_csv(std::string_view text);

}  // namespace drmgfe::study
