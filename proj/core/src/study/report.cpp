#include "drmgfe/study/report.hpp"

#include <fmt/format.h>

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "drmgfe/study/config_io.hpp"

namespace drmgfe::study {

namespace {

std::string real(double v) { return fmt::format("{:.17g}", v); }

double parse_number(const std::string& cell) {
  char* end = nullptr;
  const double v = std::strtod(cell.c_str(), &end);
  if (cell.empty() || end != cell.c_str() + cell.size()) throw std::invalid_argument("bad CSV number '" + cell + "'");
  return v;
}

}  // namespace

std::string format_csv(const ConvergenceReport& report) {
  if (report.levels.empty()) throw std::invalid_argument("report has no levels");
  const auto& c = report.config;
  std::string out = "# drmgfe convergence report\n";
  out += fmt::format("# axis = {}\n", to_string(c.axis));
  out += fmt::format("# scheme = {}\n", schemes::to_string(c.scheme));
  out += fmt::format("# reference_scheme = {}\n", schemes::to_string(schemes::SchemeKind::Drmgfe));
  out += fmt::format("# mode_family = {}\n", noise::to_string(c.mode_spec().family));
  out += fmt::format("# modes_per_axis = {}\n", c.modes_per_axis);
  out += fmt::format("# noise_load = {}\n", noise::to_string(c.noise_load));
  out += fmt::format("# seed = {}\n", c.seed);
  out += fmt::format("# samples = {}\n", c.samples);
  out += "# stage_fraction = quantized to the reference time grid\n";
  if (c.dim == 2 && c.initial == problem::InitialChoice::Sine) {
    out += "# initial_datum = sin(2 pi x) sin(2 pi y)\n";
  }
  for (const auto& level : report.levels) {
    out += fmt::format("# standard_error[{}] = {}\n", real(level.resolution), real(level.standard_error));
  }
  for (const auto& w : report.warnings) out += "# warning: " + w + "\n";
  out += fmt::format("# wall_seconds = {:.3f}\n", report.wall_seconds);

  std::istringstream config_lines(format_config(c));
  for (std::string line; std::getline(config_lines, line);) out += "#! " + line + "\n";

  out += "resolution,u_error,eoc\n";
  for (std::size_t i = 0; i < report.levels.size(); ++i) {
    const auto& level = report.levels[i];
    out += real(level.resolution) + "," + real(level.u_error) + ",";
    if (i > 0 && i - 1 < report.eoc.size()) out += real(report.eoc[i - 1]);
    out += "\n";
  }
  return out;
}

void emit_csv(const ConvergenceReport& report, const std::filesystem::path& path) {
  const std::string text = format_csv(report);
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out << text;
  out.flush();
  if (!out) throw std::runtime_error("failed writing " + path.string());
}

ParsedReport parse_csv(std::string_view text) {
  ParsedReport parsed;
  parsed.config_text = extract_embedded_config(text);
  std::istringstream lines{std::string(text)};
  bool header_seen = false;
  for (std::string line; std::getline(lines, line);) {
    if (line.empty() || line[0] == '#') continue;
    if (!header_seen) {
      if (line != "resolution,u_error,eoc") throw std::invalid_argument("unexpected CSV header '" + line + "'");
      header_seen = true;
      continue;
    }
    std::vector<std::string> cells;
    std::stringstream row(line);
    for (std::string cell; std::getline(row, cell, ',');) cells.push_back(cell);
    if (cells.size() == 2) cells.emplace_back();
    if (cells.size() != 3) throw std::invalid_argument("CSV row needs 3 columns: '" + line + "'");
    parsed.resolution.push_back(parse_number(cells[0]));
    parsed.u_error.push_back(parse_number(cells[1]));
    parsed.eoc.push_back(cells[2].empty() ? std::nullopt : std::optional<double>(parse_number(cells[2])));
  }
  if (!header_seen) throw std::invalid_argument("CSV has no header row");
  return parsed;
}

}  // namespace drmgfe::study
