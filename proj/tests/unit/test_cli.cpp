#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "drmgfe/study/report.hpp"

namespace {

namespace fs = std::filesystem;

struct Invocation {
  int code = -1;
  std::string out;
  std::string err;
};

Invocation run_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "drmgfe");
  std::ostringstream out;
  std::ostringstream err;
  Invocation r;
  r.code = drmgfe::cli::run(args, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p);
  return {std::istreambuf_iterator<char>(in), {}};
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / ("drmgfe-cli-" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
    ::unsetenv("SPDE_SEED");
  }
  void TearDown() override {
    ::unsetenv("SPDE_SEED");
    fs::remove_all(dir_);
  }
  fs::path write(const std::string& name, const std::string& text) {
    const fs::path p = dir_ / name;
    std::ofstream(p) << text;
    return p;
  }
  fs::path dir_;
};

constexpr const char* kSmallTimeStudy =
    "[problem]\ndim = 1\n[noise]\nmodes = 6\n[study]\naxis = time\nladder = 1/100, 1/200, 1/400\n"
    "reference_dt = 1/800\nreference_h = 1/16\nsamples = 3\nseed = 5\n";

TEST_F(CliTest, ValidatePassesEveryCheck) {
  const auto r = run_cli({"validate"});
  EXPECT_EQ(r.code, drmgfe::cli::kExitOk) << r.out;
  std::istringstream lines(r.out);
  int count = 0;
  for (std::string line; std::getline(lines, line); ++count) EXPECT_EQ(line.substr(0, 4), "pass") << line;
  EXPECT_EQ(count, 12);
}

TEST_F(CliTest, MissingConfigFileExitsOneNamingThePath) {
  const std::string path = (dir_ / "nope.ini").string();
  const auto r = run_cli({"convergence-time", "--config", path});
  EXPECT_EQ(r.code, drmgfe::cli::kExitConfig);
  EXPECT_NE(r.err.find(path), std::string::npos) << r.err;
}

TEST_F(CliTest, UnknownConfigKeyExitsOneNamingTheKey) {
  const auto cfg = write("bad.ini", "[study]\nsample_count = 4\n");
  const auto r = run_cli({"convergence-time", "--config", cfg.string()});
  EXPECT_EQ(r.code, drmgfe::cli::kExitConfig);
  EXPECT_NE(r.err.find("study.sample_count"), std::string::npos) << r.err;
}

TEST_F(CliTest, InconsistentGridExitsOne) {
  const auto cfg = write("grid.ini", "[study]\nreference_dt = 3e-3\n");
  const auto r = run_cli({"convergence-time", "--config", cfg.string()});
  EXPECT_EQ(r.code, drmgfe::cli::kExitConfig);
  EXPECT_NE(r.err.find("study.reference_dt"), std::string::npos) << r.err;
}

TEST_F(CliTest, AxisMismatchExitsOne) {
  const auto cfg = write("axis.ini", kSmallTimeStudy);
  const auto r = run_cli({"convergence-space", "--config", cfg.string()});
  EXPECT_EQ(r.code, drmgfe::cli::kExitConfig);
  EXPECT_NE(r.err.find("study.axis"), std::string::npos);
}

TEST_F(CliTest, BadFlagsExitOne) {
  EXPECT_EQ(run_cli({"convergence-time", "--preset", "huge"}).code, drmgfe::cli::kExitConfig);
  EXPECT_EQ(run_cli({"convergence-time", "--samples", "0"}).code, drmgfe::cli::kExitConfig);
  EXPECT_EQ(run_cli({"frobnicate"}).code, drmgfe::cli::kExitConfig);
  EXPECT_EQ(run_cli({}).code, drmgfe::cli::kExitConfig);
}

TEST_F(CliTest, HelpExitsZero) {
  const auto r = run_cli({"--help"});
  EXPECT_EQ(r.code, drmgfe::cli::kExitOk);
  EXPECT_NE(r.out.find("convergence-time"), std::string::npos);
}

TEST_F(CliTest, PrintPresetShowsTheResolvedConfig) {
  const auto r = run_cli({"convergence-time", "--preset", "paper", "--print-preset"});
  EXPECT_EQ(r.code, drmgfe::cli::kExitOk);
  EXPECT_NE(r.out.find("samples = 500"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("reference_dt = 9.9999999999999995e-07"), std::string::npos) << r.out;
  const auto d = run_cli({"convergence-space", "--dim", "2", "--print-preset"});
  EXPECT_NE(d.out.find("dim = 2"), std::string::npos);
  EXPECT_NE(d.out.find("samples = 50"), std::string::npos);
}

TEST_F(CliTest, FullScaleTimeStudyWritesFiveRowsWithEocs) {
  const auto r = run_cli({"convergence-time", "--preset", "paper", "--samples", "1", "--out", dir_.string(), "-q"});
  ASSERT_EQ(r.code, drmgfe::cli::kExitOk) << r.err;
  const auto parsed = drmgfe::study::parse_csv(read_file(dir_ / "convergence-time-1d.csv"));
  ASSERT_EQ(parsed.u_error.size(), 5u);
  EXPECT_EQ(parsed.resolution.front(), 1e-2);
  EXPECT_EQ(parsed.resolution.back(), 6.25e-4);
  EXPECT_FALSE(parsed.eoc[0].has_value());
  for (std::size_t i = 1; i < 5; ++i) EXPECT_TRUE(parsed.eoc[i].has_value());
}

TEST_F(CliTest, SeedFallsBackToTheEnvironment) {
  const auto cfg = write("s.ini", kSmallTimeStudy);
  ::setenv("SPDE_SEED", "77", 1);
  ASSERT_EQ(run_cli({"convergence-time", "--config", cfg.string(), "--print-preset"}).out.find("seed = 77") ==
                std::string::npos,
            false);
  EXPECT_NE(run_cli({"convergence-time", "--config", cfg.string(), "--seed", "8", "--print-preset"}).out.find("seed = 8"),
            std::string::npos);
  ::setenv("SPDE_SEED", "-4", 1);
  const auto bad = run_cli({"convergence-time", "--config", cfg.string(), "--print-preset"});
  EXPECT_EQ(bad.code, drmgfe::cli::kExitConfig);
  EXPECT_NE(bad.err.find("SPDE_SEED"), std::string::npos);
}

TEST_F(CliTest, ReportReplaysBitExactly) {
  const auto cfg = write("s.ini", kSmallTimeStudy);
  const fs::path first = dir_ / "a";
  const fs::path second = dir_ / "b";
  ASSERT_EQ(run_cli({"convergence-time", "--config", cfg.string(), "--out", first.string(), "-q"}).code, 0);
  const fs::path report = first / "convergence-time-1d.csv";
  ASSERT_EQ(run_cli({"convergence-time", "--config", report.string(), "--out", second.string(), "-q"}).code, 0);
  const auto strip = [](const std::string& text) {
    std::istringstream in(text);
    std::string kept;
    for (std::string line; std::getline(in, line);) {
      if (line.rfind("# wall_seconds", 0) != 0) kept += line + "\n";
    }
    return kept;
  };
  EXPECT_EQ(strip(read_file(report)), strip(read_file(second / "convergence-time-1d.csv")));
}

TEST_F(CliTest, SingleRunWritesTheNodalState) {
  const auto cfg = write("s.ini", kSmallTimeStudy);
  const auto r = run_cli({"single-run", "--config", cfg.string(), "--sample", "2", "--out", dir_.string()});
  ASSERT_EQ(r.code, drmgfe::cli::kExitOk) << r.err;
  std::istringstream in(read_file(dir_ / "single-run-1d-sample2.csv"));
  int rows = 0;
  bool header = false;
  for (std::string line; std::getline(in, line);) {
    if (line.rfind('#', 0) == 0) continue;
    if (!header) {
      EXPECT_EQ(line, "x,u");
      header = true;
      continue;
    }
    ++rows;
  }
  EXPECT_EQ(rows, 15);
  EXPECT_EQ(run_cli({"single-run", "--config", cfg.string(), "--level", "3", "--out", dir_.string()}).code,
            drmgfe::cli::kExitConfig);
}

}  // namespace
