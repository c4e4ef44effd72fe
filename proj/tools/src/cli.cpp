#include "cli.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>
#include <fmt/ostream.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>

#include "drmgfe/errors.hpp"
#include "drmgfe/oracle/validation.hpp"
#include "drmgfe/study/config_io.hpp"
#include "drmgfe/study/harness.hpp"
#include "drmgfe/study/report.hpp"

namespace drmgfe::cli {

namespace {

namespace fs = std::filesystem;
using study::StudyConfig;

struct Overrides {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> samples;
  std::optional<std::size_t> workers;
  std::string preset = "desk";
  std::string out_dir = ".";
  int dim = 1;
  bool print_preset = false;
  bool quiet = false;
  std::uint64_t sample = 0;
  int level = -1;  // -1: reference resolution
};

std::uint64_t parse_seed_env(const char* text) {
  char* end = nullptr;
  errno = 0;
  const unsigned long long v = std::strtoull(text, &end, 10);
  if (*text == '\0' || *end != '\0' || errno != 0 || *text == '-') {
    throw ConfigError("SPDE_SEED", fmt::format("not an unsigned 64-bit integer: '{}'", text));
  }
  return v;
}

// Preset for (axis, dim), then the config file, then flag overrides.
StudyConfig resolve_config(const Overrides& o, study::StudyAxis axis) {
  const auto preset = study::parse_preset(o.preset);
  if (!preset) throw ConfigError("--preset", "expected paper|desk, got '" + o.preset + "'");

  int dim = o.dim;
  std::string text;
  if (!o.config_path.empty()) {
    const fs::path path(o.config_path);
    std::ifstream in(path);
    if (!in) throw ConfigError("--config", "cannot open config file " + path.string());
    text.assign(std::istreambuf_iterator<char>(in), {});
    if (path.extension() == ".csv") text = study::extract_embedded_config(text);
    dim = study::parse_config(text, study::make_preset(*preset, axis, dim)).dim;
  }
  StudyConfig c = study::make_preset(*preset, axis, dim);
  if (!text.empty()) c = study::parse_config(text, c);
  if (c.axis != axis) {
    throw ConfigError("study.axis", fmt::format("config says '{}' but the subcommand runs the {} study",
                                                study::to_string(c.axis), study::to_string(axis)));
  }

  if (o.seed) {
    c.seed = *o.seed;
  } else if (const char* env = std::getenv("SPDE_SEED"); env != nullptr) {
    c.seed = parse_seed_env(env);
  }
  if (o.samples) {
    if (*o.samples == 0) throw ConfigError("--samples", "must be at least 1");
    c.samples = *o.samples;
  }
  if (o.workers) c.workers = *o.workers;
  study::resolve(c);
  return c;
}

int run_convergence(const Overrides& o, study::StudyAxis axis, std::ostream& out, std::ostream& err) {
  const StudyConfig c = resolve_config(o, axis);
  if (o.print_preset) {
    out << study::format_config(c);
    return kExitOk;
  }
  study::ProgressCallback progress;
  if (!o.quiet) {
    progress = [&err, step = std::max<std::size_t>(1, c.samples / 20)](std::size_t done, std::size_t total) {
      if (done % step == 0 || done == total) err << fmt::format("\r{}/{} samples", done, total) << std::flush;
    };
  }
  const auto report = study::run_study(c, progress);
  if (!o.quiet) err << "\n";

  fs::create_directories(o.out_dir);
  const fs::path path = fs::path(o.out_dir) / fmt::format("convergence-{}-{}d.csv", study::to_string(axis), c.dim);
  study::emit_csv(report, path);

  out << fmt::format("{:>14}  {:>14}  {:>8}\n", axis == study::StudyAxis::Time ? "dt" : "h", "u_error", "eoc");
  for (std::size_t i = 0; i < report.levels.size(); ++i) {
    const auto& l = report.levels[i];
    out << fmt::format("{:>14.6e}  {:>14.6e}  {:>8}\n", l.resolution, l.u_error,
                       i == 0 ? std::string("-") : fmt::format("{:.4f}", report.eoc[i - 1]));
  }
  for (const auto& w : report.warnings) out << "warning: " << w << "\n";
  out << fmt::format("wrote {} ({:.1f} s)\n", path.string(), report.wall_seconds);
  return kExitOk;
}

int run_single(const Overrides& o, std::ostream& out) {
  const StudyConfig c = resolve_config(o, study::StudyAxis::Time);
  if (o.print_preset) {
    out << study::format_config(c);
    return kExitOk;
  }
  if (o.level >= static_cast<int>(c.ladder.size())) {
    throw ConfigError("--level", fmt::format("ladder has {} levels", c.ladder.size()));
  }
  const study::StudyPlan plan(c);
  const bool reference = o.level < 0;
  const auto level = static_cast<std::size_t>(o.level);
  const auto& space = reference ? plan.reference_space() : plan.level_space(level);
  const auto& cov = reference ? plan.reference_covariance() : plan.level_covariance(level);
  const auto time = reference ? plan.reference_time_level() : plan.time_level(level);
  const auto ctx = plan.path(o.sample);
  const auto u = schemes::integrate(c.scheme, space, cov, plan.problem(), ctx, time);

  fs::create_directories(o.out_dir);
  const fs::path path = fs::path(o.out_dir) / fmt::format("single-run-{}d-sample{}.csv", c.dim, o.sample);
  std::ofstream file(path);
  if (!file) throw std::runtime_error("cannot open " + path.string() + " for writing");
  std::istringstream config_lines(study::format_config(c));
  file << fmt::format("# scheme = {}\n# sample = {}\n# dt = {:.17g}\n# h = {:.17g}\n", schemes::to_string(c.scheme),
                      o.sample, static_cast<double>(time.cells_per_step) * ctx.cell_dt(), space.h());
  for (std::string line; std::getline(config_lines, line);) file << "#! " << line << "\n";
  file << (c.dim == 1 ? "x,u\n" : "x,y,u\n");
  for (std::size_t d = 0; d < space.dof_count(); ++d) {
    const auto p = space.mesh().dof_point(d);
    if (c.dim == 1) {
      file << fmt::format("{:.17g},{:.17g}\n", p.x, u[static_cast<Eigen::Index>(d)]);
    } else {
      file << fmt::format("{:.17g},{:.17g},{:.17g}\n", p.x, p.y, u[static_cast<Eigen::Index>(d)]);
    }
  }
  if (!file.flush()) throw std::runtime_error("failed writing " + path.string());
  out << fmt::format("wrote {} ({} dofs, ||u||_M = {:.6e})\n", path.string(), space.dof_count(), space.mass_norm(u));
  return kExitOk;
}

int run_validate(std::ostream& out) {
  bool all = true;
  for (const auto& r : oracle::run_validation_suite()) {
    all = all && r.passed;
    out << fmt::format("{}  {}  value={:.6g} target={:.6g} tol={:.3g}\n", r.passed ? "pass" : "FAIL", r.label,
                       r.value, r.target, r.tolerance);
  }
  return all ? kExitOk : kExitRuntime;
}

}  // namespace

int run(const std::vector<std::string>& argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Drift-randomized Milstein-Galerkin FEM solver and convergence studies", "drmgfe"};
  app.require_subcommand(1);
  Overrides o;

  auto add_study_flags = [&o](CLI::App* sub) {
    sub->add_option("--config", o.config_path, "ini config file, or a report CSV to replay its embedded config");
    sub->add_option("--seed", o.seed, "master seed (falls back to $SPDE_SEED)");
    sub->add_option("--samples", o.samples, "Monte Carlo sample count");
    sub->add_option("--workers", o.workers, "worker threads (0 = available parallelism)");
    sub->add_option("--preset", o.preset, "paper | desk")->check(CLI::IsMember({"paper", "desk"}));
    sub->add_option("--dim", o.dim, "spatial dimension when no config sets it")->check(CLI::IsMember({1, 2}));
    sub->add_option("--out", o.out_dir, "output directory");
    sub->add_flag("--print-preset", o.print_preset, "print the resolved config and exit");
    sub->add_flag("--quiet,-q", o.quiet, "no progress on stderr");
  };

  auto* time = app.add_subcommand("convergence-time", "temporal strong-error study");
  auto* space = app.add_subcommand("convergence-space", "spatial strong-error study");
  auto* single = app.add_subcommand("single-run", "integrate one sample path and write the final nodal state");
  auto* validate = app.add_subcommand("validate", "run the oracle and property suite");
  add_study_flags(time);
  add_study_flags(space);
  add_study_flags(single);
  single->add_option("--sample", o.sample, "sample index");
  single->add_option("--level", o.level, "ladder level index (default: reference resolution)");

  std::vector<std::string> args(argv.rbegin(), argv.rend() - (argv.empty() ? 0 : 1));
  try {
    app.parse(args);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return kExitOk;
    }
    err << "drmgfe: " << e.what() << "\n";
    return kExitConfig;
  }

  try {
    if (*time) return run_convergence(o, study::StudyAxis::Time, out, err);
    if (*space) return run_convergence(o, study::StudyAxis::Space, out, err);
    if (*single) return run_single(o, out);
    if (*validate) return run_validate(out);
  } catch (const ConfigError& e) {
    err << "drmgfe: config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    err << "drmgfe: " << e.what() << "\n";
    return kExitRuntime;
  }
  return kExitRuntime;
}

}  // namespace drmgfe::cli
