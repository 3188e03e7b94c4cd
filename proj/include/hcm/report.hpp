#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "hcm/config.hpp"
#include "hcm/fixed_point.hpp"

namespace hcm {

// Stabilizer verdicts bundled for the run report. bound_pass / decay_pass
// re-evaluate the raw reports under the config tolerances (the raw reports
// use the fixed 1e-9 headroom).
struct StabilizerSection {
  StabilizerResult result;
  BoundReport bound;
  DecayReport decay;
  LinearityReport linearity;
  bool bound_pass = false;
  bool decay_pass = false;
  // Closed-form coefficient 2*theta / (2 - 2^p) (expand) or 2*theta / (2^p - 8)
  // (contract); 0 for non-power controls.
  double paper_bound_constant = 0.0;
};

struct FixedPointSection {
  DmDiagnostics primary;
  std::optional<DmDiagnostics> alternate;
  DmReport verdict;
};

struct RunReport {
  ExperimentConfig config;
  std::uint64_t seed = 0;
  std::optional<AxiomReport> axioms;
  std::optional<CertificationReport> certification;
  std::optional<StabilizerSection> stabilizer;
  std::optional<FixedPointSection> fixed_point;
  bool overall_pass = false;
  double wall_seconds = 0.0;
};

// Nonfinite doubles have no JSON number encoding; they serialize as the
// strings "infinity", "-infinity", "nan".
OrderedJson json_real(double v);

OrderedJson to_json(const AxiomReport& report);
OrderedJson to_json(const CertificationReport& report);
OrderedJson to_json(const StabilizerSection& section);
OrderedJson to_json(const FixedPointSection& section);

// Full document in fixed key order: config, seed, executed sections,
// overall_pass, timing, report_hash. The timing and report_hash keys are
// excluded from the hashed region; report_to_json leaves report_hash empty
// for emit_report to fill.
OrderedJson report_to_json(const RunReport& report);

std::uint64_t fnv1a(std::string_view bytes, std::uint64_t state = 14695981039346656037ull);
std::string hash_hex(std::uint64_t h);

// Hash of the run's deterministic bytes: the CSV contents followed by the
// JSON document with "timing" and "report_hash" removed.
std::string region_hash(std::string_view csv_bytes, OrderedJson document);

}  // namespace hcm
