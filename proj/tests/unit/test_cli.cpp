#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"

#include "../support/toy.hpp"

namespace fs = std::filesystem;

namespace {

int run(const std::string& args, const std::string& env = "") {
  const std::string cmd = env + " \"" BACH_CLI_PATH "\" " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  REQUIRE(WIFEXITED(status));
  return WEXITSTATUS(status);
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

// The bundled feeder with a small search budget.
fs::path small_config(const fs::path& dir) {
  fs::create_directories(dir);
  const fs::path data = testing_support::data_dir();
  std::ifstream in(data / "ieee33.ini");
  std::ostringstream body;
  std::string line;
  while (std::getline(in, line)) {
    if (line.rfind("network", 0) == 0) line = "network = " + (data / "ieee33_network.csv").string();
    if (line.rfind("profiles", 0) == 0)
      line = "profiles = " + (data / "ieee33_profiles.csv").string();
    if (line.rfind("max_evals", 0) == 0) line = "max_evals = 400";
    if (line.rfind("pareto_points", 0) == 0) line = "pareto_points = 2";
    if (line.rfind("population", 0) == 0) line = "population = 8";
    body << line << "\n";
  }
  const fs::path cfg = dir / "small.ini";
  std::ofstream(cfg) << body.str();
  return cfg;
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("exit codes") {
  const std::string cfg = (testing_support::data_dir() / "ieee33.ini").string();
  CHECK(run("") == 1);
  CHECK(run("frobnicate") == 1);
  CHECK(run("validate") == 1);
  CHECK(run("validate -c " + cfg) == 0);
  CHECK(run("powerflow -c " + cfg + " --slot 12") == 0);
  CHECK(run("powerflow -c " + cfg + " --slot 24") == 1);
  CHECK(run("sweep -c " + cfg + " --values 1") == 1);
  CHECK(run("sweep -c " + cfg + " --param lambda3") == 1);
  CHECK(run("validate -c /nonexistent.ini") == 2);
  const fs::path dir = fs::temp_directory_path() / "bach_cli_test";
  fs::create_directories(dir);
  std::ofstream(dir / "bad.ini") << "[scenario]\ncolour = blue\n";
  CHECK(run("validate -c " + (dir / "bad.ini").string()) == 2);
  fs::remove_all(dir);
}

TEST_CASE("reports are identical across thread counts") {
  const fs::path dir = fs::temp_directory_path() / "bach_cli_repro";
  fs::remove_all(dir);
  const std::string cfg = small_config(dir).string();
  const fs::path a = dir / "t1";
  const fs::path b = dir / "t4";
  const int ra = run("case -c " + cfg + " --case 1,3 -o " + a.string(), "BACH_THREADS=1");
  const int rb = run("case -c " + cfg + " --case 1,3 -o " + b.string(), "BACH_THREADS=4");
  CHECK(ra == rb);
  int files = 0;
  for (const auto& entry : fs::directory_iterator(a)) {
    ++files;
    const fs::path other = b / entry.path().filename();
    REQUIRE(fs::exists(other));
    CHECK_MESSAGE(slurp(entry.path()) == slurp(other), entry.path().filename().string());
  }
  CHECK(files >= 5);
  fs::remove_all(dir);
}

}
