#include "drmgfe/study/config_io.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <fmt/format.h>

#include <cerrno>
#include <cstdlib>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "drmgfe/errors.hpp"

namespace drmgfe::study {

namespace {

const std::map<std::string, std::set<std::string>>& known_keys() {
  static const std::map<std::string, std::set<std::string>> keys = {
      {"problem", {"dim", "final_time", "delta", "drift", "initial"}},
      {"noise", {"modes", "load"}},
      {"study", {"axis", "scheme", "ladder", "reference_dt", "reference_h", "samples", "seed"}},
      {"run", {"workers"}},
  };
  return keys;
}

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

double parse_real(const std::string& key, const std::string& raw) {
  const std::string text = trim(raw);
  if (const auto slash = text.find('/'); slash != std::string::npos) {
    const double num = parse_real(key, text.substr(0, slash));
    const double den = parse_real(key, text.substr(slash + 1));
    if (den == 0.0) throw ConfigError(key, "division by zero in '" + text + "'");
    return num / den;
  }
  errno = 0;
  char* end = nullptr;
  const double v = std::strtod(text.c_str(), &end);
  if (text.empty() || end != text.c_str() + text.size() || errno == ERANGE) {
    throw ConfigError(key, "expected a number, got '" + text + "'");
  }
  return v;
}

std::uint64_t parse_unsigned(const std::string& key, const std::string& raw) {
  const std::string text = trim(raw);
  errno = 0;
  char* end = nullptr;
  const unsigned long long v = std::strtoull(text.c_str(), &end, 10);
  if (text.empty() || text[0] == '-' || end != text.c_str() + text.size() || errno == ERANGE) {
    throw ConfigError(key, "expected a nonnegative integer, got '" + text + "'");
  }
  return v;
}

std::vector<double> parse_list(const std::string& key, const std::string& raw) {
  std::vector<double> out;
  std::stringstream ss(raw);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_real(key, item));
  return out;
}

template <typename Enum, typename Parser>
Enum parse_enum(const std::string& key, const std::string& raw, Parser parser, std::string_view choices) {
  const auto v = parser(trim(raw));
  if (!v) throw ConfigError(key, fmt::format("expected one of {}, got '{}'", choices, trim(raw)));
  return *v;
}

std::optional<problem::DriftChoice> parse_drift(std::string_view s) {
  if (s == "bounded") return problem::DriftChoice::Bounded;
  if (s == "zero") return problem::DriftChoice::Zero;
  return std::nullopt;
}

std::optional<problem::InitialChoice> parse_initial(std::string_view s) {
  if (s == "sine") return problem::InitialChoice::Sine;
  if (s == "zero") return problem::InitialChoice::Zero;
  return std::nullopt;
}

void apply(StudyConfig& c, const std::string& key, const std::string& value) {
  if (key == "problem.dim") {
    const auto d = parse_unsigned(key, value);
    if (d != 1 && d != 2) throw ConfigError(key, "must be 1 or 2");
    c.dim = static_cast<int>(d);
  } else if (key == "problem.final_time") {
    c.final_time = parse_real(key, value);
  } else if (key == "problem.delta") {
    c.delta = parse_real(key, value);
  } else if (key == "problem.drift") {
    c.drift = parse_enum<problem::DriftChoice>(key, value, parse_drift, "bounded|zero");
  } else if (key == "problem.initial") {
    c.initial = parse_enum<problem::InitialChoice>(key, value, parse_initial, "sine|zero");
  } else if (key == "noise.modes") {
    c.modes_per_axis = static_cast<int>(parse_unsigned(key, value));
  } else if (key == "noise.load") {
    c.noise_load = parse_enum<noise::NoiseLoad>(key, value, noise::parse_noise_load, "projected|nodal");
  } else if (key == "study.axis") {
    c.axis = parse_enum<StudyAxis>(key, value, parse_axis, "time|space");
  } else if (key == "study.scheme") {
    c.scheme = parse_enum<schemes::SchemeKind>(key, value, schemes::parse_scheme, "drmgfe|semi-implicit-milstein");
  } else if (key == "study.ladder") {
    c.ladder = parse_list(key, value);
  } else if (key == "study.reference_dt") {
    c.reference_dt = parse_real(key, value);
  } else if (key == "study.reference_h") {
    c.reference_h = parse_real(key, value);
  } else if (key == "study.samples") {
    c.samples = parse_unsigned(key, value);
  } else if (key == "study.seed") {
    c.seed = parse_unsigned(key, value);
  } else if (key == "run.workers") {
    c.workers = parse_unsigned(key, value);
  }
}

std::string real(double v) { return fmt::format("{:.17g}", v); }

}  // namespace

StudyConfig parse_config(std::string_view text, StudyConfig base) {
  // boost's ini reader only knows ';' comments
  std::string cleaned;
  std::istringstream lines{std::string(text)};
  for (std::string line; std::getline(lines, line);) {
    const std::string t = trim(line);
    if (!t.empty() && t[0] == '#') continue;
    cleaned += line;
    cleaned += '\n';
  }

  boost::property_tree::ptree tree;
  try {
    std::istringstream in(cleaned);
    boost::property_tree::ini_parser::read_ini(in, tree);
  } catch (const boost::property_tree::ini_parser_error& e) {
    throw ConfigError("", std::string("malformed config: ") + e.what());
  }

  for (const auto& [section, body] : tree) {
    const auto known = known_keys().find(section);
    if (body.empty() && !body.data().empty()) {
      throw ConfigError(section, "key outside of any section (expected [problem], [noise], [study] or [run])");
    }
    if (known == known_keys().end()) throw ConfigError(section, "unknown section");
    for (const auto& [name, leaf] : body) {
      const std::string key = section + "." + name;
      if (!known->second.contains(name)) throw ConfigError(key, "unknown key");
      apply(base, key, leaf.get_value<std::string>());
    }
  }
  return base;
}

StudyConfig load_config_file(const std::filesystem::path& path, StudyConfig base) {
  std::ifstream in(path);
  if (!in) throw ConfigError("", "cannot open config file " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  std::string text = buffer.str();
  if (path.extension() == ".csv") text = extract_embedded_config(text);
  return parse_config(text, std::move(base));
}

std::string format_config(const StudyConfig& c) {
  std::string ladder;
  for (std::size_t i = 0; i < c.ladder.size(); ++i) ladder += (i ? ", " : "") + real(c.ladder[i]);
  std::string out;
  out += "[problem]\n";
  out += fmt::format("dim = {}\n", c.dim);
  out += fmt::format("final_time = {}\n", real(c.final_time));
  out += fmt::format("delta = {}\n", real(c.delta));
  out += fmt::format("drift = {}\n", problem::to_string(c.drift));
  out += fmt::format("initial = {}\n", problem::to_string(c.initial));
  out += "[noise]\n";
  out += fmt::format("modes = {}\n", c.modes_per_axis);
  out += fmt::format("load = {}\n", noise::to_string(c.noise_load));
  out += "[study]\n";
  out += fmt::format("axis = {}\n", to_string(c.axis));
  out += fmt::format("scheme = {}\n", schemes::to_string(c.scheme));
  out += fmt::format("ladder = {}\n", ladder);
  out += fmt::format("reference_dt = {}\n", real(c.reference_dt));
  out += fmt::format("reference_h = {}\n", real(c.reference_h));
  out += fmt::format("samples = {}\n", c.samples);
  out += fmt::format("seed = {}\n", c.seed);
  out += "[run]\n";
  out += fmt::format("workers = {}\n", c.workers);
  return out;
}

std::string extract_embedded_config(std::string_view report_text) {
  std::string out;
  std::istringstream lines{std::string(report_text)};
  for (std::string line; std::getline(lines, line);) {
    if (line.rfind("#! ", 0) == 0) {
      out += line.substr(3);
      out += '\n';
    }
  }
  return out;
}

}  // namespace drmgfe::study
