#pragma once

#include <functional>
#include <span>
#include <vector>

#include "hcm/module.hpp"

namespace hcm {

// Which Hyers scheme the run uses: Expand iterates x -> 2x and averages down
// (H(x) = lim f(2^n x)/2^n), Contract iterates x -> x/2 and scales up
// (H(x) = lim 2^n f(x/2^n)).
enum class Direction { Expand, Contract };

const char* to_string(Direction d);

// Contraction constant of the power family: 2^(p-1) for Expand (p in [0,1)),
// 2^(3-p) for Contract (p > 3). Throws DomainError outside those windows.
double power_lipschitz(double p, Direction dir);

// Measured per-step rate of the Contract scaling identity, 2^(1-p). Strictly
// tighter than the certified envelope rate 2^(3-p); both are surfaced so the
// reports can show the gap.
double contract_power_rate(double p);

// Control function phi on argument triples. Either the power family
//   phi(x,y,z) = theta * (||x||^p + ||y||^p + ||z||^p)
// with the convention ||x||^0 := 1 (also at x = 0), or a caller-supplied
// evaluator with a caller-asserted Lipschitz constant.
class ControlFunction {
 public:
  using Evaluator =
      std::function<double(const ModuleElement&, const ModuleElement&, const ModuleElement&)>;

  static ControlFunction power(double theta, double p, Direction dir);
  static ControlFunction custom(Evaluator eval, double lipschitz, Direction dir);

  double operator()(const ModuleElement& x, const ModuleElement& y,
                    const ModuleElement& z) const;
  // Same evaluation with the norms already known (saves eigensolves in sweeps).
  double eval_norms(double nx, double ny, double nz) const;

  // Additive-hypothesis budget, the phi(x, y, 0) that bounds the additive
  // defect. The power family uses the two-term form theta*(||x||^p + ||y||^p):
  // the third slot never appears in that hypothesis, which at p = 0 makes the
  // budget 2*theta rather than 3*theta. Custom controls evaluate the caller's
  // phi at a literal zero third argument.
  double pair_budget(double nx, double ny) const;  // power form only
  double pair_budget(const ModuleElement& x, const ModuleElement& y) const;

  Direction direction() const { return direction_; }
  double lipschitz() const { return lipschitz_; }
  bool is_power() const { return !custom_; }
  double theta() const { return theta_; }
  double exponent() const { return p_; }

 private:
  ControlFunction() = default;

  Direction direction_ = Direction::Expand;
  double lipschitz_ = 0.0;
  double theta_ = 0.0;
  double p_ = 0.0;
  Evaluator custom_;
};

struct ProbeTriple {
  ModuleElement x, y, z;
};

struct DominationReport {
  double worst_ratio = 0.0;
  std::size_t worst_index = 0;
  bool pass = false;
};

// Checks the direction-appropriate domination hypothesis on every probe:
//   Expand:   phi(x,y,z) <= 2L * phi(x/2, y/2, z/2)
//   Contract: phi(x,y,z) <= (L/8) * phi(2x, 2y, 2z)
// Ratio convention: 0/0 counts 0, positive/0 counts +infinity.
DominationReport check_domination(const ControlFunction& phi,
                                  std::span<const ProbeTriple> probes);

// L^n * phi(x,y,z), the certified decay envelope at step n.
double decay_envelope(const ControlFunction& phi, int n, const ModuleElement& x,
                      const ModuleElement& y, const ModuleElement& z);

}  // namespace hcm
