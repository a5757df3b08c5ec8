#include <sys/wait.h>

#include <cstdlib>
#include <string>

#include "doctest.h"
#include "helpers.hpp"

using testutil::TempDir;

namespace {

std::string binary_path(const char* env_name) {
  const char* v = std::getenv(env_name);
  REQUIRE_MESSAGE(v != nullptr, env_name << " must point at the built tool");
  return std::string(v);
}

/// Runs a shell command, captures exit code; stdout/stderr land in files.
struct RunResult {
  int exit_code = -1;
  std::string out;
  std::string err;
};

RunResult run(const std::string& command, const TempDir& dir,
              const std::string& tag) {
  auto out_path = dir.file(tag + ".out");
  auto err_path = dir.file(tag + ".err");
  std::string full = command + " > " + out_path.string() + " 2> " +
                     err_path.string();
  int status = std::system(full.c_str());
  RunResult r;
  REQUIRE(status != -1);
  REQUIRE(WIFEXITED(status));
  r.exit_code = WEXITSTATUS(status);
  r.out = testutil::read_file(out_path);
  r.err = testutil::read_file(err_path);
  return r;
}

const char* kValidConfig =
    "[study]\n"
    "zones = NORD, SUD\n"
    "metadata_file = meta.csv\n"
    "\n"
    "[demand]\n"
    "observations_file = obs.csv\n"
    "temperature_file = temp.csv\n";

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("version and help exit cleanly") {
  TempDir dir("cli_info");
  std::string bin = binary_path("VREMIX_BIN");

  RunResult version = run(bin + " --version", dir, "version");
  CHECK(version.exit_code == 0);
  CHECK(!version.out.empty());

  RunResult help = run(bin + " --help", dir, "help");
  CHECK(help.exit_code == 0);
  CHECK(help.out.find("optimize") != std::string::npos);
  CHECK(help.out.find("fit-demand") != std::string::npos);
  CHECK(help.out.find("spectrum") != std::string::npos);

  RunResult fixture_help =
      run(binary_path("VREMIX_FIXTURE_BIN") + " --help", dir, "fixture_help");
  CHECK(fixture_help.exit_code == 0);
}

TEST_CASE("usage errors exit with the input-error code") {
  TempDir dir("cli_usage");
  std::string bin = binary_path("VREMIX_BIN");

  CHECK(run(bin, dir, "bare").exit_code == 2);
  CHECK(run(bin + " frobnicate", dir, "unknown_cmd").exit_code == 2);
  CHECK(run(bin + " optimize", dir, "no_config").exit_code == 2);
  CHECK(run(bin + " optimize --config", dir, "dangling").exit_code == 2);
}

TEST_CASE("a missing config file is an input error") {
  TempDir dir("cli_missing");
  std::string bin = binary_path("VREMIX_BIN");
  RunResult r = run(bin + " optimize --config " +
                        dir.file("absent.ini").string() + " --out " +
                        dir.file("out").string(),
                    dir, "missing");
  CHECK(r.exit_code == 2);
  CHECK(r.err.find("error") != std::string::npos);
}

TEST_CASE("an unknown config key is rejected by name") {
  TempDir dir("cli_badkey");
  std::string bin = binary_path("VREMIX_BIN");
  testutil::write_file(dir.file("bad.ini"),
                       std::string("[study]\n"
                                   "zones = NORD, SUD\n"
                                   "metadata_file = meta.csv\n"
                                   "bogus = 1\n"
                                   "\n"
                                   "[demand]\n"
                                   "observations_file = obs.csv\n"
                                   "temperature_file = temp.csv\n"));
  RunResult r = run(bin + " optimize --config " + dir.file("bad.ini").string() +
                        " --out " + dir.file("out").string(),
                    dir, "badkey");
  CHECK(r.exit_code == 2);
  CHECK(r.err.find("unknown key 'study.bogus'") != std::string::npos);
}

TEST_CASE("a valid config with missing inputs fails as an input error") {
  TempDir dir("cli_noinputs");
  std::string bin = binary_path("VREMIX_BIN");
  testutil::write_file(dir.file("study.ini"), std::string(kValidConfig));
  RunResult r = run(bin + " predict --config " +
                        dir.file("study.ini").string() + " --out " +
                        dir.file("out").string(),
                    dir, "noinputs");
  CHECK(r.exit_code == 2);
  CHECK(!r.err.empty());
}

}  // TEST_SUITE("cli")
