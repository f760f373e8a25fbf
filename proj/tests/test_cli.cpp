#include <cstdlib>
#include <sys/wait.h>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"

#ifndef HVF_CLI_PATH
#define HVF_CLI_PATH "hvf"
#endif

namespace {

namespace fs = std::filesystem;

int run_cli(const std::string& args) {
  std::string cmd = std::string(HVF_CLI_PATH) + " " + args + " > /dev/null 2>&1";
  int status = std::system(cmd.c_str());
  return WEXITSTATUS(status);
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& name) : path(fs::temp_directory_path() / name) {
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

}  // namespace

TEST_SUITE_BEGIN("cli");

TEST_CASE("analyze writes a report and exits 0") {
  TempDir dir("hvf_cli_analyze");
  int rc = run_cli("analyze --model example21 --out " + dir.path.string());
  CHECK(rc == 0);
  CHECK(fs::exists(dir.path / "example21_analyze.json"));
  CHECK(fs::exists(dir.path / "example21_nu_samples.csv"));
}

TEST_CASE("model files on disk are accepted") {
  TempDir dir("hvf_cli_file");
  int rc = run_cli("analyze --model " + std::string(HVF_MODELS_DIR) +
                   "/heisenberg.vf --out " + dir.path.string());
  CHECK(rc == 0);
  CHECK(fs::exists(dir.path / "heisenberg_analyze.json"));
}

TEST_CASE("usage errors exit 1") {
  CHECK(run_cli("analyze --model no-such-model-anywhere") == 1);
  CHECK(run_cli("verify nash --model euclid2") == 1);  // regime rejection
  CHECK(run_cli("frobnicate") != 0);
}

TEST_CASE("identical config and seed reproduce byte-identical reports") {
  TempDir dir1("hvf_cli_repro1");
  TempDir dir2("hvf_cli_repro2");
  std::string base = "verify sobolev --model example21 --k 1 --p 2 --seed 7 --out ";
  REQUIRE(run_cli(base + dir1.path.string()) == 0);
  REQUIRE(run_cli(base + dir2.path.string()) == 0);
  auto j1 = slurp(dir1.path / "example21_sobolev.json");
  auto j2 = slurp(dir2.path / "example21_sobolev.json");
  REQUIRE(!j1.empty());
  CHECK(j1 == j2);
  CHECK(slurp(dir1.path / "example21_sobolev.csv") == slurp(dir2.path / "example21_sobolev.csv"));

  // Monte Carlo path too: same seed, same bytes.
  std::string bv =
      "ball-volume --model euclid2 --center 0.5,0.5 --r 0.25 --samples 5000 --seed 11 --out ";
  REQUIRE(run_cli(bv + dir1.path.string()) == 0);
  REQUIRE(run_cli(bv + dir2.path.string()) == 0);
  CHECK(slurp(dir1.path / "euclid2_ball_volume.json") ==
        slurp(dir2.path / "euclid2_ball_volume.json"));
}

TEST_CASE("report subcommand summarizes a run directory") {
  TempDir dir("hvf_cli_report");
  REQUIRE(run_cli("analyze --model euclid2 --out " + dir.path.string()) == 0);
  CHECK(run_cli("report --out " + dir.path.string()) == 0);
}

TEST_SUITE_END();
