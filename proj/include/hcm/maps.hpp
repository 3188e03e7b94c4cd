#pragma once

#include <optional>
#include <string>

#include "hcm/control.hpp"
#include "hcm/probes.hpp"

namespace hcm {

// Catalog of exact *-homomorphisms of A^n: a permutation of the components,
// a right multiplication by a unitary, and a global unit phase (or the zero
// map). For the pairing sum_i x_i y_i* these satisfy both module-map
// identities exactly: the unitary cancels inside <Hx, Hy> and the phase has
// unit modulus.
struct HomomorphismSpec {
  std::vector<int> permutation;  // output slot i reads input component permutation[i]
  AlgebraElement right_unitary;
  UnitScalar phase;
  bool zero_map = false;

  static HomomorphismSpec identity(ModuleDescriptor desc);
  static HomomorphismSpec zero(ModuleDescriptor desc);
  static HomomorphismSpec random(ModuleDescriptor desc, std::uint64_t seed);
};

// Additive perturbation recipe. The effective coefficient is resolved at
// build time against the control function (see build preconditions below).
struct PerturbationSpec {
  enum class Kind { ConstantShift, Bump, Homogeneous };

  Kind kind = Kind::ConstantShift;
  // ConstantShift: target norm of the shift. Bump/Homogeneous: a factor on
  // the calibrated coefficient theta / (2^(p-1) + 1).
  double amplitude = 1.0;
  double radius = 8.0;    // Bump support radius
  double exponent = 4.0;  // Homogeneous growth exponent; must match the control
  std::uint64_t seed = 1;
  // Optional explicit direction; normalized to unit norm at build time and
  // drawn from the seed when absent.
  std::optional<ModuleElement> payload;
};

struct ResolvedPerturbation {
  PerturbationSpec::Kind kind = PerturbationSpec::Kind::ConstantShift;
  double amplitude = 0.0;       // effective coefficient (ConstantShift: the shift norm)
  double spec_amplitude = 0.0;  // the amplitude field as given in the spec struct
  double radius = 0.0;
  double exponent = 0.0;
  ModuleElement direction;  // unit norm
};

// Bump cutoff profile: cubic smoothstep rise on [0, radius/4], plateau 1 on
// [radius/4, radius/2], cubic taper to 0 on [radius/2, radius], identically
// zero beyond. Vanishes at 0 so the perturbation respects f(0) = 0.
double bump_profile(double t, double radius);

class ApproxMap {
 public:
  ApproxMap() = default;

  ModuleElement operator()(const ModuleElement& x) const;

  ModuleDescriptor descriptor() const { return desc_; }
  bool linear() const { return !pert_.has_value(); }
  const std::optional<ResolvedPerturbation>& perturbation() const { return pert_; }
  double perturbation_amplitude() const { return pert_ ? pert_->amplitude : 0.0; }
  // Copy with a different effective amplitude (certification rescale probes).
  ApproxMap with_amplitude(double amplitude) const;

  friend ApproxMap build_homomorphism(const HomomorphismSpec& spec, ModuleDescriptor desc);
  friend ApproxMap build_perturbed(const HomomorphismSpec& base, const PerturbationSpec& pert,
                                   const ControlFunction& phi, ModuleDescriptor desc);

 private:
  ModuleDescriptor desc_;
  HomomorphismSpec base_;
  std::optional<ResolvedPerturbation> pert_;
};

// Exact catalog homomorphism. Throws ContractError when right_unitary fails
// the ||u u* - I|| <= 1e-12 check, ShapeError on a malformed permutation.
ApproxMap build_homomorphism(const HomomorphismSpec& spec, ModuleDescriptor desc);

// f = base + eps with the kind-dependent shape:
//   ConstantShift  eps(x) = c                       (needs power control, p = 0)
//   Bump           eps(x) = A * rho(||x||) * e      (needs expand direction)
//   Homogeneous    eps(x) = A * ||x||^p * e         (needs contract, matching p)
// where A = amplitude * theta / (2^(p-1) + 1) for Bump/Homogeneous; that
// calibration makes the additive hypothesis hold analytically, not just on
// the sweep. Incompatible pairings throw ConfigError.
ApproxMap build_perturbed(const HomomorphismSpec& base, const PerturbationSpec& pert,
                          const ControlFunction& phi, ModuleDescriptor desc);

// Defect meters. F is any pure map ModuleElement -> ModuleElement (ApproxMap,
// stabilizer approximants, fixed-point iterates).
template <class F>
double additive_defect(const F& f, const ModuleElement& x, const ModuleElement& y,
                       UnitScalar mu) {
  const ComplexScalar m = mu.value();
  return norm_of(f(m * x + y) - m * f(x) - f(y));
}

template <class F>
double triple_defect(const F& f, const ModuleElement& x, const ModuleElement& y,
                     const ModuleElement& z) {
  const ModuleElement lhs = f(module_action(inner_product(x, y), z));
  const ModuleElement rhs = module_action(inner_product(f(x), f(y)), f(z));
  return norm_of(lhs - rhs);
}

template <class F>
double star_defect(const F& f, const ModuleElement& x, const ModuleElement& y,
                   const ModuleElement& z) {
  const ModuleElement lhs = f(module_action(adjoint(inner_product(x, y)), z));
  const ModuleElement rhs = module_action(adjoint(inner_product(f(x), f(y))), f(z));
  return norm_of(lhs - rhs);
}

struct HypothesisCertificate {
  std::string name;
  double worst_ratio = 0.0;  // may be +infinity (defect over vanishing phi)
  std::size_t worst_tuple = 0;
  std::size_t tuples = 0;
  bool pass = false;
  // Smallest max-component norm among failing tuples; +infinity when the
  // hypothesis holds on the whole swept region. Downstream envelope checks
  // are enforced for tuples strictly below this cap.
  double certified_norm_cap = 0.0;
  double suggested_amplitude = 0.0;
};

struct CertificationReport {
  HypothesisCertificate additive;
  HypothesisCertificate product;
  HypothesisCertificate star;
  bool star_checked = false;
  std::string region;  // human-readable sweep inventory
};

struct CertifyOptions {
  int levels = 30;    // iteration scales 2^n (expand) or 2^-n (contract), n = 0..levels
  int level_stride = 1;
  bool star = false;
  std::uint64_t seed = 7;  // mu palette draws
};

// Sweeps the hypothesis ratios defect/phi over the probe set crossed with the
// iteration scales the stabilizer will visit, with both sides measured in the
// rescaled arithmetic frame (the common exact 2^(+-n) factor divided out, so
// the linear part of f cancels instead of drowning the defect in rounding
// granularity). Per tuple: fail when defect > phi*(1 + 1e-9) + resolution,
// where resolution = 1e-13 at the tuple's base magnitude; defects below the
// resolution are indistinguishable from exact. A positive resolvable defect
// where phi vanishes counts ratio +infinity. Triple tuples stop at the 3n-fold
// alignment horizon.
CertificationReport certify(const ApproxMap& f, const ControlFunction& phi,
                            const ProbeSet& probes, const CertifyOptions& opt);

}  // namespace hcm
