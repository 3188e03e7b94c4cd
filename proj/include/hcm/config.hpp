#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace hcm {

// Stable-key-order JSON used for configs and reports so identical runs give
// identical bytes.
using OrderedJson = nlohmann::ordered_json;

// Flat experiment description. Field defaults are the documented run
// defaults; iterations.N = -1 means "direction default" (30 expand,
// 20 contract). probes.count counts the random elements drawn in addition to
// the always-included zero element.
struct ExperimentConfig {
  struct Base {
    std::string kind = "identity";  // identity | zero | random
    std::uint64_t seed = 1;
    bool operator==(const Base&) const = default;
  };
  struct Perturbation {
    std::string kind = "none";  // none | constant_shift | bump | homogeneous
    double amplitude = 1.0;
    double radius = 8.0;
    double exponent = 4.0;
    std::uint64_t seed = 1;
    bool operator==(const Perturbation&) const = default;
  };
  struct Control {
    std::string kind = "power";
    double theta = 0.1;
    double p = 0.5;
    std::string direction = "expand";
    bool operator==(const Control&) const = default;
  };
  struct Probes {
    int count = 200;
    std::vector<double> scales{0.01, 0.1, 1.0, 10.0};
    std::uint64_t seed = 42;
    bool operator==(const Probes&) const = default;
  };
  struct Tolerances {
    double axiom = 1e-10;
    double bound = 1e-9;
    double decay = 1e-9;
    bool operator==(const Tolerances&) const = default;
  };
  struct Outputs {
    std::string csv = "stabilizer.csv";
    std::string json = "report.json";
    bool operator==(const Outputs&) const = default;
  };

  int algebra_dim = 2;
  int module_rank = 2;
  Base base;
  Perturbation perturbation;
  Control control;
  int iterations_N = -1;
  Probes probes;
  Tolerances tolerances;
  Outputs outputs;

  bool operator==(const ExperimentConfig&) const = default;
};

// Parses and validates a config document. Malformed JSON or unknown keys
// throw ParseError; well-formed documents with out-of-range or incompatible
// values throw ConfigError (or DomainError from the range checks they
// delegate to), with messages naming the violated constraint.
ExperimentConfig parse_config(const std::string& text);

// parse_config over the file's bytes; an unreadable file throws ParseError.
ExperimentConfig load_config(const std::string& path);

OrderedJson config_to_json(const ExperimentConfig& cfg);

// Canonical document form; parse_config(dump_config(c)) == c.
std::string dump_config(const ExperimentConfig& cfg);

}  // namespace hcm
