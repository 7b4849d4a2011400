#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

// End-to-end checks of the installed command-line surface: subcommands and
// the 0 / 1 / 2 exit-code contract.

namespace {

int run_cli(const std::string& args) {
  const std::string cmd = std::string(HEDGENET_CLI_PATH) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  REQUIRE(status != -1);
  return WEXITSTATUS(status);
}

std::filesystem::path smoke_config() {
  return std::filesystem::path(HEDGENET_SOURCE_DIR) / "configs" / "smoke.json";
}

}  // namespace

TEST_CASE("cli: train smoke config exits 0") {
  const auto out = std::filesystem::temp_directory_path() / "hedgenet_cli_smoke";
  std::filesystem::remove_all(out);
  CHECK(run_cli("train --config " + smoke_config().string() + " --out " + out.string()) == 0);
  CHECK(std::filesystem::exists(out / "smoke_run0_report.json"));
}

TEST_CASE("cli: export-grid exits 0 and writes the grid") {
  const auto out = std::filesystem::temp_directory_path() / "hedgenet_cli_grid";
  std::filesystem::remove_all(out);
  CHECK(run_cli("export-grid --config " + smoke_config().string() + " --out " + out.string()) ==
        0);
  CHECK(std::filesystem::exists(out / "smoke_grid.csv"));
}

TEST_CASE("cli: verify subsuites exit 0") {
  const auto out = std::filesystem::temp_directory_path() / "hedgenet_cli_verify";
  std::filesystem::remove_all(out);
  CHECK(run_cli("verify --gradients --out " + out.string()) == 0);
  CHECK(std::filesystem::exists(out / "verify_gradients.json"));
}

TEST_CASE("cli: usage and config errors exit 2") {
  CHECK(run_cli("") == 2);                         // missing subcommand
  CHECK(run_cli("train") == 2);                    // missing --config
  CHECK(run_cli("train --config /nonexistent.json") == 2);
  CHECK(run_cli("frobnicate") == 2);               // unknown subcommand

  const auto bad = std::filesystem::temp_directory_path() / "hedgenet_cli_bad.json";
  std::ofstream(bad) << "{\"payoff\": {\"kind\": \"best-of-call\", \"dim\": 0}}";
  CHECK(run_cli("train --config " + bad.string()) == 2);
  std::filesystem::remove(bad);
}

TEST_CASE("cli: help exits 0") { CHECK(run_cli("--help") == 0); }
