#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "drmgfe/study/config.hpp"

namespace drmgfe::study {

/// Applies an ini-style text onto `base`.
///
///     [problem]  dim, final_time, delta, drift = bounded|zero, initial = sine|zero
///     [noise]    modes
///     [study]    axis = time|space, scheme = drmgfe|semi-implicit-milstein,
///                ladder = comma list, reference_dt, reference_h, samples, seed
///     [run]      workers
///
/// Lines starting with '#' or ';' are comments. Mesh sizes may be written as
/// fractions ("1/128"). Unknown sections or keys throw ConfigError naming them.
StudyConfig parse_config(std::string_view text, StudyConfig base);

/// Reads a config file. A ".csv" report is accepted too: its embedded
/// resolved-config block is used.
StudyConfig load_config_file(const std::filesystem::path& path, StudyConfig base);

/// Fully resolved config in the same format, doubles with 17 significant digits.
std::string format_config(const StudyConfig& config);

/// Lines prefixed with "#! " in a report, with the prefix removed.
std::string extract_embedded_config(std::string_view report_text);

}  // namespace drmgfe::study
