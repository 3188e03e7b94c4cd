#pragma once

#include "hcm/report.hpp"

namespace hcm {

// Which pipeline stages a run executes. The CLI subcommands are thin
// wrappers over these flags; `full` sets all three.
struct RunSelection {
  bool axioms = true;
  bool stabilizer = true;
  bool fixed_point = true;
  bool star = false;

  static RunSelection full(bool star = false) { return RunSelection{true, true, true, star}; }
  static RunSelection axioms_only() { return RunSelection{true, false, false, false}; }
  static RunSelection stabilizer_only(bool star = false) {
    return RunSelection{false, true, false, star};
  }
  static RunSelection fixed_point_only() { return RunSelection{false, false, true, false}; }
};

// Config resolved into live objects: descriptor, control, map, probe set.
struct Materialized {
  ModuleDescriptor desc;
  ControlFunction phi;
  ApproxMap map;
  ProbeSet probes;
};

Materialized materialize(const ExperimentConfig& cfg);

// Executes the selected stages in order (axioms, certify, stabilize, verify,
// fixed point) and assembles the report. Deterministic for a fixed config.
// Exceptions from a stage are rethrown with the stage name prefixed, same
// type, so the CLI exit mapping still sees the original class.
RunReport run_experiment(const ExperimentConfig& cfg, const RunSelection& sel);

struct EmitResult {
  std::string csv_path;
  std::string json_path;
  std::string report_hash;
};

// Writes the CSV (when a stabilizer section exists) and the JSON document
// under out_dir at the config's output names, filling report_hash with the
// hash of the deterministic region. Throws IoError on any write failure and
// removes the CSV if the JSON cannot be completed.
EmitResult emit_report(const RunReport& report, const std::string& out_dir);

}  // namespace hcm
