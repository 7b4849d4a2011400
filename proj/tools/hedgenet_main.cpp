#include <cstdint>
#include <filesystem>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "hedgenet/experiment.hpp"
#include "hedgenet/quadrature.hpp"
#include "hedgenet/verify.hpp"

namespace {

struct CommonFlags {
  std::string config;
  std::string out_dir;
  int jobs = 0;
  std::int64_t seed_override = -1;
};

hedgenet::CommandOptions to_options(const CommonFlags& flags) {
  hedgenet::CommandOptions opts;
  if (!flags.out_dir.empty()) opts.out_dir = flags.out_dir;
  if (flags.jobs > 0) opts.jobs = flags.jobs;
  if (flags.seed_override >= 0)
    opts.seed_override = static_cast<std::uint64_t>(flags.seed_override);
  return opts;
}

void add_common(CLI::App* cmd, CommonFlags& flags, bool needs_config) {
  if (needs_config)
    cmd->add_option("--config", flags.config, "experiment config file")->required();
  cmd->add_option("--out", flags.out_dir, "output directory (default: out)");
  cmd->add_option("--jobs", flags.jobs, "parallel ensemble runs");
  cmd->add_option("--seed-override", flags.seed_override, "replace the train seed");
}

int run_verify(bool analytic, bool weakform, bool gradients, const std::string& out_dir) {
  // No flags = run everything.
  if (!analytic && !weakform && !gradients) analytic = weakform = gradients = true;
  bool ok = true;
  auto run_suite = [&](hedgenet::VerifySuiteResult suite) {
    hedgenet::print_suite(suite);
    if (!out_dir.empty())
      hedgenet::write_suite_json(suite, std::filesystem::path(out_dir) /
                                            ("verify_" + suite.suite + ".json"));
    ok = ok && suite.all_passed();
  };
  if (analytic) run_suite(hedgenet::analytic_suite());
  if (weakform) run_suite(hedgenet::weakform_suite());
  if (gradients) run_suite(hedgenet::gradient_suite());
  return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"hedgenet: static hedging of multi-asset payoffs with basket-option portfolios"};
  app.require_subcommand(1);

  CommonFlags train_flags, compare_flags, grid_flags, verify_flags;
  bool verify_analytic = false, verify_weakform = false, verify_gradients = false;

  CLI::App* train_cmd = app.add_subcommand("train", "train spanning networks from a config");
  add_common(train_cmd, train_flags, true);

  CLI::App* compare_cmd =
      app.add_subcommand("compare", "compare the four spanning strategies on one payoff");
  add_common(compare_cmd, compare_flags, true);

  CLI::App* verify_cmd =
      app.add_subcommand("verify", "run the analytic / weak-form / gradient oracle suites");
  verify_cmd->add_flag("--analytic", verify_analytic, "closed-form identity suite");
  verify_cmd->add_flag("--weakform", verify_weakform, "principal-value identity suite");
  verify_cmd->add_flag("--gradients", verify_gradients, "finite-difference gradient suite");
  verify_cmd->add_option("--out", verify_flags.out_dir, "directory for JSON verification reports");

  CLI::App* grid_cmd = app.add_subcommand("export-grid", "train once and export an error grid");
  add_common(grid_cmd, grid_flags, true);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (train_cmd->parsed()) return hedgenet::cmd_train(train_flags.config, to_options(train_flags));
    if (compare_cmd->parsed())
      return hedgenet::cmd_compare(compare_flags.config, to_options(compare_flags));
    if (verify_cmd->parsed())
      return run_verify(verify_analytic, verify_weakform, verify_gradients, verify_flags.out_dir);
    if (grid_cmd->parsed())
      return hedgenet::cmd_export_grid(grid_flags.config, to_options(grid_flags));
  } catch (const hedgenet::ConfigError& e) {
    std::cerr << e.what() << "\n";
    return 2;
  } catch (const hedgenet::ToleranceError& e) {
    std::cerr << "tolerance failure: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
