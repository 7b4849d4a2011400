#include <doctest.h>

#include <filesystem>
#include <fstream>

#include <json.hpp>

#include "hedgenet/experiment.hpp"
#include "hedgenet/io.hpp"

using namespace hedgenet;

namespace {

std::filesystem::path scratch_dir() {
  auto dir = std::filesystem::temp_directory_path() / "hedgenet_cli_test";
  std::filesystem::create_directories(dir);
  return dir;
}

std::filesystem::path write_config(const std::string& name, const std::string& body) {
  const auto path = scratch_dir() / name;
  std::ofstream out(path);
  out << body;
  return path;
}

const char* kSmokeConfig = R"({
  "name": "smoke",
  "payoff": {"kind": "dispersion-call", "dim": 2, "strike": 1.0},
  "sampling": {"mode": "uniform", "box": {"lo": 0.0, "hi": 2.0}, "m": 100, "seed": 5},
  "strategy": {"name": "unrestricted"},
  "train": {"n_options": 4, "epochs": 10, "seed": 3},
  "runs": 1,
  "grid_export": {"points_per_dim": 5}
})";

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in);
  return std::string(std::istreambuf_iterator<char>(in), {});
}

}  // namespace

TEST_CASE("config loading applies defaults and validates") {
  const auto path = write_config("smoke.json", kSmokeConfig);
  ExperimentConfig cfg = load_experiment_config(path);
  CHECK(cfg.name == "smoke");
  CHECK(cfg.payoff.kind == PayoffKind::kDispersionCall);
  CHECK(cfg.train.n_batches == 10);
  CHECK(cfg.train.lr0 == 0.01);
  CHECK(cfg.train.weight_decay == 0.001);
  CHECK(cfg.strategy.weight_box.lo[0] == -1.0);
  CHECK(cfg.runs == 1);
}

TEST_CASE("malformed configs raise ConfigError with a field path") {
  const auto bad_json = write_config("bad.json", "{ not json");
  CHECK_THROWS_AS(load_experiment_config(bad_json), ConfigError);

  const auto missing = write_config("missing.json", R"({"name": "x"})");
  CHECK_THROWS_WITH_AS(load_experiment_config(missing), doctest::Contains("payoff"), ConfigError);

  const auto bad_kind = write_config("badkind.json", R"({
    "payoff": {"kind": "lookback", "dim": 2},
    "sampling": {"box": {"lo": 0.0, "hi": 2.0}}
  })");
  CHECK_THROWS_WITH_AS(load_experiment_config(bad_kind), doctest::Contains("$.payoff.kind"),
                       ConfigError);

  const auto bad_box = write_config("badbox.json", R"({
    "payoff": {"kind": "best-of-call", "dim": 2},
    "sampling": {"box": {"lo": [0.0, 0.0], "hi": [2.0]}}
  })");
  CHECK_THROWS_WITH_AS(load_experiment_config(bad_box), doctest::Contains("$.sampling.box"),
                       ConfigError);

  CHECK_THROWS_AS(load_experiment_config(scratch_dir() / "does_not_exist.json"), ConfigError);
}

TEST_CASE("cmd_train smoke run writes exactly report, loss, portfolio") {
  const auto path = write_config("smoke.json", kSmokeConfig);
  const auto out = scratch_dir() / "out_smoke";
  std::filesystem::remove_all(out);
  CommandOptions opts;
  opts.out_dir = out;
  CHECK(cmd_train(path, opts) == 0);
  std::size_t files = 0;
  for (const auto& entry : std::filesystem::directory_iterator(out)) {
    ++files;
    (void)entry;
  }
  CHECK(files == 3);
  CHECK(std::filesystem::exists(out / "smoke_run0_report.json"));
  CHECK(std::filesystem::exists(out / "smoke_run0_loss.csv"));
  CHECK(std::filesystem::exists(out / "smoke_run0_portfolio.csv"));

  const auto report = nlohmann::json::parse(slurp(out / "smoke_run0_report.json"));
  CHECK(report.at("schema") == 1);
  CHECK(report.at("d") == 2);
  CHECK(report.at("l") == 4);
  CHECK(report.at("final_mae").get<double>() >= 0.0);
}

TEST_CASE("cmd_train reruns are byte-identical outside metadata") {
  const auto path = write_config("smoke.json", kSmokeConfig);
  const auto out_a = scratch_dir() / "out_a";
  const auto out_b = scratch_dir() / "out_b";
  std::filesystem::remove_all(out_a);
  std::filesystem::remove_all(out_b);
  CommandOptions opts_a, opts_b;
  opts_a.out_dir = out_a;
  opts_b.out_dir = out_b;
  REQUIRE(cmd_train(path, opts_a) == 0);
  REQUIRE(cmd_train(path, opts_b) == 0);

  CHECK(slurp(out_a / "smoke_run0_loss.csv") == slurp(out_b / "smoke_run0_loss.csv"));
  CHECK(slurp(out_a / "smoke_run0_portfolio.csv") == slurp(out_b / "smoke_run0_portfolio.csv"));
  auto ja = nlohmann::json::parse(slurp(out_a / "smoke_run0_report.json"));
  auto jb = nlohmann::json::parse(slurp(out_b / "smoke_run0_report.json"));
  ja.erase("metadata");
  jb.erase("metadata");
  CHECK(ja.dump() == jb.dump());
}

TEST_CASE("seed override changes the run") {
  const auto path = write_config("smoke.json", kSmokeConfig);
  const auto out_a = scratch_dir() / "out_seed_a";
  const auto out_b = scratch_dir() / "out_seed_b";
  std::filesystem::remove_all(out_a);
  std::filesystem::remove_all(out_b);
  CommandOptions opts_a, opts_b;
  opts_a.out_dir = out_a;
  opts_b.out_dir = out_b;
  opts_b.seed_override = 777;
  REQUIRE(cmd_train(path, opts_a) == 0);
  REQUIRE(cmd_train(path, opts_b) == 0);
  CHECK(slurp(out_a / "smoke_run0_portfolio.csv") != slurp(out_b / "smoke_run0_portfolio.csv"));
}

TEST_CASE("cmd_export_grid writes a contour grid") {
  const auto path = write_config("smoke.json", kSmokeConfig);
  const auto out = scratch_dir() / "out_grid";
  std::filesystem::remove_all(out);
  CommandOptions opts;
  opts.out_dir = out;
  CHECK(cmd_export_grid(path, opts) == 0);
  CsvTable grid = read_csv(out / "smoke_grid.csv");
  CHECK(grid.rows.size() == 25);
  CHECK(grid.header.size() == 5);
}

TEST_CASE("cmd_compare writes one row per strategy") {
  const char* compare_cfg = R"({
    "name": "cmp",
    "payoff": {"kind": "best-of-call", "dim": 2, "strike": 1.0},
    "sampling": {"mode": "uniform", "box": {"lo": 0.0, "hi": 2.0}, "m": 120, "seed": 5},
    "train": {"n_options": 4, "epochs": 6, "seed": 3},
    "runs": 2,
    "jobs": 2
  })";
  const auto path = write_config("cmp.json", compare_cfg);
  const auto out = scratch_dir() / "out_cmp";
  std::filesystem::remove_all(out);
  CommandOptions opts;
  opts.out_dir = out;
  CHECK(cmd_compare(path, opts) == 0);
  const std::string csv = slurp(out / "cmp_compare.csv");
  CHECK(csv.find("single-asset,") != std::string::npos);
  CHECK(csv.find("ls-gd,") != std::string::npos);
  CHECK(csv.find("long-only,") != std::string::npos);
  CHECK(csv.find("unrestricted,") != std::string::npos);
  std::size_t lines = static_cast<std::size_t>(std::count(csv.begin(), csv.end(), '\n'));
  CHECK(lines == 5);  // header + 4 strategies
}

TEST_CASE("ls-svd strategy reports diagnostics") {
  const char* ls_cfg = R"({
    "name": "lssvd",
    "payoff": {"kind": "best-of-call", "dim": 2, "strike": 1.0},
    "sampling": {"mode": "uniform", "box": {"lo": 0.0, "hi": 2.0}, "m": 500, "seed": 5},
    "strategy": {"name": "ls-svd", "grid": "uniform", "weight_box": {"lo": 0.0, "hi": 1.0}, "grid_seed": 9},
    "train": {"n_options": 6},
    "runs": 1
  })";
  const auto path = write_config("lssvd.json", ls_cfg);
  const auto out = scratch_dir() / "out_lssvd";
  std::filesystem::remove_all(out);
  CommandOptions opts;
  opts.out_dir = out;
  CHECK(cmd_train(path, opts) == 0);
  const auto report = nlohmann::json::parse(slurp(out / "lssvd_run0_report.json"));
  CHECK(report.at("diagnostics").at("rank").get<int>() >= 1);
  const auto& cond = report.at("diagnostics").at("condition_number");
  CHECK((cond.is_number() ? cond.get<double>() > 0.0 : cond.get<std::string>() == "infinity"));
  CHECK(report.at("strategy") == "ls-svd-uniform");
}
