#include "hcm/control.hpp"

#include <cmath>
#include <limits>
#include <string>
#include <utility>

namespace hcm {

const char* to_string(Direction d) { return d == Direction::Expand ? "expand" : "contract"; }

double power_lipschitz(double p, Direction dir) {
  if (!std::isfinite(p) || p < 0.0) throw DomainError("power_lipschitz: p must be finite and >= 0");
  if (dir == Direction::Expand) {
    if (p >= 1.0)
      throw DomainError("power_lipschitz: expand direction requires p in [0,1), got " +
                        std::to_string(p));
    return std::exp2(p - 1.0);
  }
  if (p <= 3.0)
    throw DomainError("power_lipschitz: contract direction requires p > 3, got " +
                      std::to_string(p));
  return std::exp2(3.0 - p);
}

double contract_power_rate(double p) {
  if (p <= 3.0) throw DomainError("contract_power_rate: requires p > 3");
  return std::exp2(1.0 - p);
}

ControlFunction ControlFunction::power(double theta, double p, Direction dir) {
  if (!std::isfinite(theta) || theta < 0.0)
    throw DomainError("ControlFunction::power: theta must be finite and >= 0");
  ControlFunction phi;
  phi.direction_ = dir;
  phi.theta_ = theta;
  phi.p_ = p;
  phi.lipschitz_ = power_lipschitz(p, dir);  // validates the exponent window
  return phi;
}

ControlFunction ControlFunction::custom(Evaluator eval, double lipschitz, Direction dir) {
  if (!eval) throw DomainError("ControlFunction::custom: evaluator required");
  if (!(lipschitz >= 0.0 && lipschitz < 1.0))
    throw DomainError("ControlFunction::custom: lipschitz must lie in [0,1)");
  ControlFunction phi;
  phi.direction_ = dir;
  phi.lipschitz_ = lipschitz;
  phi.custom_ = std::move(eval);
  return phi;
}

double ControlFunction::eval_norms(double nx, double ny, double nz) const {
  if (custom_) throw ContractError("ControlFunction: norm-only evaluation needs the power form");
  // ||x||^0 := 1 by convention, including at the zero element.
  const auto pw = [this](double t) { return p_ == 0.0 ? 1.0 : std::pow(t, p_); };
  return theta_ * (pw(nx) + pw(ny) + pw(nz));
}

double ControlFunction::pair_budget(double nx, double ny) const {
  if (custom_) throw ContractError("ControlFunction: norm-only evaluation needs the power form");
  const auto pw = [this](double t) { return p_ == 0.0 ? 1.0 : std::pow(t, p_); };
  return theta_ * (pw(nx) + pw(ny));
}

double ControlFunction::pair_budget(const ModuleElement& x, const ModuleElement& y) const {
  if (custom_) {
    const double v = custom_(x, y, ModuleElement::zero(x.descriptor()));
    if (!(v >= 0.0) || !std::isfinite(v))
      throw ContractError("ControlFunction: evaluation must be nonnegative and finite");
    return v;
  }
  return pair_budget(norm_of(x), norm_of(y));
}

double ControlFunction::operator()(const ModuleElement& x, const ModuleElement& y,
                                   const ModuleElement& z) const {
  double v;
  if (custom_) {
    v = custom_(x, y, z);
  } else {
    v = eval_norms(norm_of(x), norm_of(y), norm_of(z));
  }
  if (!(v >= 0.0))
    throw ContractError("ControlFunction: evaluation must be nonnegative and finite");
  if (!std::isfinite(v)) throw ContractError("ControlFunction: evaluation must be finite");
  return v;
}

DominationReport check_domination(const ControlFunction& phi,
                                  std::span<const ProbeTriple> probes) {
  DominationReport report;
  const double L = phi.lipschitz();
  constexpr ComplexScalar kHalf{0.5, 0.0};
  constexpr ComplexScalar kTwo{2.0, 0.0};
  for (std::size_t i = 0; i < probes.size(); ++i) {
    const auto& t = probes[i];
    const double lhs = phi(t.x, t.y, t.z);
    double rhs;
    if (phi.direction() == Direction::Expand) {
      rhs = 2.0 * L * phi(kHalf * t.x, kHalf * t.y, kHalf * t.z);
    } else {
      rhs = (L / 8.0) * phi(kTwo * t.x, kTwo * t.y, kTwo * t.z);
    }
    double ratio;
    if (lhs == 0.0) {
      ratio = 0.0;
    } else if (rhs == 0.0) {
      ratio = std::numeric_limits<double>::infinity();
    } else {
      ratio = lhs / rhs;
    }
    if (ratio > report.worst_ratio) {
      report.worst_ratio = ratio;
      report.worst_index = i;
    }
  }
  report.pass = report.worst_ratio <= 1.0 + 1e-12;
  return report;
}

double decay_envelope(const ControlFunction& phi, int n, const ModuleElement& x,
                      const ModuleElement& y, const ModuleElement& z) {
  if (n < 0) throw DomainError("decay_envelope: n must be >= 0");
  return std::pow(phi.lipschitz(), n) * phi(x, y, z);
}

}  // namespace hcm
