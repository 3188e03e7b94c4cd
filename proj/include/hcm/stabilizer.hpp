#pragma once

#include <limits>
#include <string>

#include "hcm/maps.hpp"

namespace hcm {

// H_n, the n-th Hyers approximant: f(2^n x)/2^n for Expand, 2^n f(x/2^n) for
// Contract. n = 0 gives f(x) exactly; all scalings go through ldexp so they
// are exact and the n-fold contraction composition evaluates through this
// same arithmetic path. Guards: n in [0, 60]; Expand additionally requires
// 2^n * norm_of(x) <= 1e100 (ScaleError).
ModuleElement approximant(const ApproxMap& f, int n, Direction dir, const ModuleElement& x);

// Evaluatable handle for a fixed H_n.
struct Approximant {
  ApproxMap f;
  Direction dir = Direction::Expand;
  int n = 0;

  ModuleElement operator()(const ModuleElement& x) const { return approximant(f, n, dir, x); }
};

// Regional enforcement caps distilled from a certification report: envelope
// checks apply to a tuple at iteration scale 2^(+-n) only when its scaled
// max-component norm stays strictly below the relevant cap. +infinity means
// the hypothesis was certified on the whole swept region (or never failed).
struct HypothesisGates {
  double additive_cap = std::numeric_limits<double>::infinity();
  double product_cap = std::numeric_limits<double>::infinity();
  double star_cap = std::numeric_limits<double>::infinity();

  static HypothesisGates open() { return HypothesisGates{}; }
  static HypothesisGates from(const CertificationReport& cert);
};

struct IterationRecord {
  int n = 0;
  double sup_cauchy_increment = 0.0;  // max over probes of ||H_{n+1}(x) - H_n(x)||
  double sup_additive_defect = 0.0;   // max over (pair, mu) of the H_n additive defect
  double sup_triple_defect = 0.0;     // H_{3n} alignment; 0.0 past the horizon
  double sup_star_defect = 0.0;       // same alignment with the starred pairing
  double sup_distance_to_f = 0.0;     // max over probes of ||f(x) - H_n(x)||
  double envelope = 0.0;              // L^n * max over pairs of the additive budget
};

struct BoundCheck {
  std::size_t probe = 0;
  double distance = 0.0;  // ||f(x) - H_N(x)||
  double bound = 0.0;     // K * phi(x, x, 0), K direction-dependent
  bool pass = false;      // distance <= bound * (1 + 1e-9) + 1e-12
};

// Per-row envelope bookkeeping over the gated tuples.
struct EnvelopeTrack {
  std::vector<double> worst_ratio;   // defect / (L^n * budget), 0 when nothing enforced
  std::vector<double> worst_excess;  // defect - envelope*(1+1e-9) - 1e-12, clamped at 0 rows
  std::vector<int> enforced;         // tuples enforced at this row
};

struct StabilizerResult {
  Direction direction = Direction::Expand;
  int N = 0;
  int triple_horizon = 0;  // last row carrying triple/star defects
  bool star_tracked = false;
  double bound_constant = 0.0;  // 1/(2-2L) or L/(8-8L)

  std::vector<IterationRecord> records;  // n = 0..N
  Approximant final_map;                 // H_N
  std::vector<BoundCheck> bound_checks;  // one per probe
  HypothesisGates gates;

  EnvelopeTrack additive_track, triple_track, star_track;
  std::vector<double> increment_sum;    // per probe, sum of Cauchy increments over rows
  std::vector<double> phi_self;         // per probe, additive budget at (x, x)
  std::vector<double> telescope_ratio;  // per row, max ratio against (L^n/2)*phi_self
};

struct StabilizeOptions {
  int N = -1;  // -1 selects the direction default: 30 Expand, 20 Contract
  bool track_star = false;
  std::uint64_t seed = 0;  // mu palette; match the certification seed
  HypothesisGates gates = HypothesisGates::open();
};

// Runs the direct method over the probe set: evaluates H_n at every probe for
// n = 0..N(+1), sweeps pair x mu additive defects and H_{3n}-aligned triple
// (and optionally star) defects, and records per-row suprema plus the
// per-probe bound comparisons against K * phi(x, x, 0).
StabilizerResult stabilize(const ApproxMap& f, const ControlFunction& phi,
                           const ProbeSet& probes, const StabilizeOptions& opt);

struct BoundReport {
  double worst_margin = -std::numeric_limits<double>::infinity();  // distance - bound
  double worst_ratio = 0.0;
  std::size_t worst_probe = 0;
  bool pass = false;
};

// Re-derives each probe's bound from phi and compares the recorded distances;
// pass iff every probe satisfies distance <= bound*(1+1e-9) + 1e-12.
BoundReport verify_error_bound(const StabilizerResult& result, const ControlFunction& phi);

struct DecayCheck {
  std::string name;
  int enforced_rows = 0;
  double worst_ratio = 0.0;
  double worst_excess = 0.0;
  bool pass = true;
};

struct DecayReport {
  DecayCheck additive, triple, star;
  double measured_rate = 0.0;  // geometric mean of successive additive sup ratios
  double rate_limit = 0.0;     // L + 0.05
  bool rate_pass = true;
  bool pass = false;
};

// Envelope verdicts from the tracks plus the empirical decay rate after a
// burn-in of 3 rows (zero rows are skipped; no surviving ratio means rate 0).
DecayReport defect_decay(const StabilizerResult& result, const ControlFunction& phi);

struct LinearityReport {
  double max_defect = 0.0;
  double envelope = 0.0;     // L^N * max pair budget
  double worst_ratio = 0.0;  // per-pair defect / (L^N * pair budget)
  bool pass = false;
};

// Additive defect of the final approximant over pair x mu, compared against
// the L^N-damped budget.
LinearityReport check_linearity(const Approximant& h, const ProbeSet& probes,
                                std::span<const UnitScalar> mus, const ControlFunction& phi);

inline constexpr const char* kCsvHeader =
    "n,sup_cauchy_increment,sup_additive_defect,sup_triple_defect,sup_star_defect,"
    "sup_distance_to_f,envelope";

// One row per record, 17 significant digits, empty cells for triple/star
// columns past the horizon (or when star tracking is off). Throws IoError.
void write_csv(const StabilizerResult& result, const std::string& path);

}  // namespace hcm
