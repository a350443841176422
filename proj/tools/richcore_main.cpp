#include <CLI11.hpp>

#include <string>

#include "cli/commands.hpp"

namespace {

void add_shared_options(CLI::App* cmd, richcore::cli::RunConfig& cfg,
                        bool needs_input) {
  cmd->add_option("--mode", cfg.mode,
                  "simple | multi_objective | arbitrary_constrained | "
                  "multiple_spectral | multiple_frobenius | agnostic");
  cmd->add_option("-r", cfg.r_values, "coreset size(s)")->delimiter(',');
  auto* input = cmd->add_option("--input", cfg.input_path, "data matrix CSV");
  if (needs_input) input->required();
  cmd->add_option("--target", cfg.target_paths, "target CSV (repeatable)");
  cmd->add_option("--target-col", cfg.target_col,
                  "0-based column of --input to use as the target");
  cmd->add_flag("--header", cfg.header, "skip one header line in CSV inputs");
  cmd->add_option("--domain", cfg.domain, "unconstrained | nnls");
  cmd->add_option("--seed", cfg.seed, "seed for every randomized artifact");
  cmd->add_option("--out", cfg.out_path, "report path (default: stdout)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Deterministic coreset construction and verification for "
               "constrained least-squares regression"};
  app.require_subcommand(1);

  richcore::cli::RunConfig cfg;

  auto* build = app.add_subcommand("build", "construct a coreset and report it");
  add_shared_options(build, cfg, true);

  auto* verify =
      app.add_subcommand("verify", "construct, solve, and check the error bound");
  add_shared_options(verify, cfg, true);

  auto* bench = app.add_subcommand(
      "bench", "sweep coreset sizes against a uniform-sampling baseline");
  add_shared_options(bench, cfg, true);
  bench->add_option("--trials", cfg.trials, "baseline trials per size");

  auto* adversarial = app.add_subcommand(
      "adversarial", "evaluate the hard instances for target-agnostic selection");
  add_shared_options(adversarial, cfg, false);
  adversarial->add_option("--n", cfg.adv_n, "instance rows")->required();
  adversarial->add_option("--d", cfg.adv_d, "instance columns");
  adversarial->add_option("--ell", cfg.adv_ell,
                          "target size; when set, checks the sampler-miss bound");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    std::string report;
    if (build->parsed()) report = richcore::cli::run_build(cfg);
    if (verify->parsed()) report = richcore::cli::run_verify(cfg);
    if (bench->parsed()) report = richcore::cli::run_bench(cfg);
    if (adversarial->parsed()) report = richcore::cli::run_adversarial(cfg);
    richcore::cli::emit_report(cfg, report);
  } catch (...) {
    return richcore::cli::exit_code_for_current_exception();
  }
  return 0;
}
