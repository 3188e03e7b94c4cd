#include <cstdio>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "hcm/experiment.hpp"

namespace {

struct CliArgs {
  std::string config_path;
  std::string out_dir = ".";
  std::optional<std::uint64_t> seed;
  bool star = false;
};

void add_common(CLI::App* cmd, CliArgs& args, bool with_star) {
  cmd->add_option("--config", args.config_path, "experiment config file (JSON)")
      ->required();
  cmd->add_option("--out-dir", args.out_dir, "directory for CSV/JSON outputs");
  cmd->add_option("--seed", args.seed, "override the config probe seed");
  if (with_star) cmd->add_flag("--star", args.star, "track starred-pairing defects as well");
}

int run(const CliArgs& args, const hcm::RunSelection& sel) {
  hcm::ExperimentConfig cfg = hcm::load_config(args.config_path);
  if (args.seed) cfg.probes.seed = *args.seed;
  const hcm::RunReport report = hcm::run_experiment(cfg, sel);
  const hcm::EmitResult emitted = hcm::emit_report(report, args.out_dir);
  std::printf("report: %s\n", emitted.json_path.c_str());
  if (report.stabilizer) std::printf("csv: %s\n", emitted.csv_path.c_str());
  std::printf("hash: %s\n", emitted.report_hash.c_str());
  std::printf("overall_pass: %s\n", report.overall_pass ? "true" : "false");
  return report.overall_pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"module homomorphism stability experiments"};
  app.require_subcommand(1);
  CliArgs args;

  CLI::App* axioms = app.add_subcommand("axioms", "pairing axiom check only");
  add_common(axioms, args, false);
  CLI::App* stab = app.add_subcommand("stabilize", "certify + iterate + verify bounds");
  add_common(stab, args, true);
  CLI::App* fixed = app.add_subcommand("fixed-point", "contraction iteration diagnostics");
  add_common(fixed, args, false);
  CLI::App* full = app.add_subcommand("full", "complete pipeline");
  add_common(full, args, true);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (axioms->parsed()) return run(args, hcm::RunSelection::axioms_only());
    if (stab->parsed()) return run(args, hcm::RunSelection::stabilizer_only(args.star));
    if (fixed->parsed()) return run(args, hcm::RunSelection::fixed_point_only());
    return run(args, hcm::RunSelection::full(args.star));
  } catch (const hcm::ParseError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const hcm::IoError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 4;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  }
}
