#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hcm/algebra.hpp"

namespace hcm {

// Free module A^n over A = M_k(C) with the A-valued pairing
//   <x, y> = sum_i x_i y_i*
// and induced norm ||x|| = ||<x, x>||^(1/2). Desk-scale guard: 1 <= n <= 8.
struct ModuleDescriptor {
  AlgebraDescriptor algebra;
  int rank = 1;

  ModuleDescriptor() = default;
  ModuleDescriptor(AlgebraDescriptor alg, int n);
  bool operator==(const ModuleDescriptor&) const = default;
};

class ModuleElement {
 public:
  ModuleElement() : ModuleElement(ModuleDescriptor{}) {}
  explicit ModuleElement(ModuleDescriptor desc);
  ModuleElement(ModuleDescriptor desc, std::vector<AlgebraElement> components);

  static ModuleElement zero(ModuleDescriptor desc) { return ModuleElement(desc); }

  ModuleDescriptor descriptor() const { return desc_; }
  int rank() const { return desc_.rank; }

  AlgebraElement& component(int i) { return comps_[static_cast<std::size_t>(i)]; }
  const AlgebraElement& component(int i) const { return comps_[static_cast<std::size_t>(i)]; }

  bool finite() const;
  bool operator==(const ModuleElement&) const = default;

 private:
  ModuleDescriptor desc_;
  std::vector<AlgebraElement> comps_;
};

// <x, y> = sum_i x_i y_i*. Throws ShapeError when descriptors disagree.
AlgebraElement inner_product(const ModuleElement& x, const ModuleElement& y);

// Left action a.x, componentwise a * x_i.
ModuleElement module_action(const AlgebraElement& a, const ModuleElement& x);

// ||x|| = operator_norm(<x, x>)^(1/2).
double norm_of(const ModuleElement& x);

// Frobenius-style upper bound on norm_of, cheap enough for overflow guards.
double frobenius_bound(const ModuleElement& x);

ModuleElement operator+(const ModuleElement& x, const ModuleElement& y);
ModuleElement operator-(const ModuleElement& x, const ModuleElement& y);
ModuleElement operator*(ComplexScalar alpha, const ModuleElement& x);

// x * 2^e with ldexp on every real component, so the scaling is exact and
// commutes bitwise with any other exact power-of-two scaling.
ModuleElement scale_pow2(const ModuleElement& x, int e);

// Gaussian element whose norm concentrates near `scale` (entry standard
// deviation scale / sqrt(n*k)).
ModuleElement random_element(ModuleDescriptor desc, double scale, Rng& rng);
ModuleElement random_element(ModuleDescriptor desc, double scale, std::uint64_t seed,
                             std::uint64_t stream);

struct AxiomCheck {
  std::string name;
  double max_violation = 0.0;  // already divided by the per-sample scale gauge
  bool pass = false;
};

struct AxiomReport {
  ModuleDescriptor descriptor;
  int samples = 0;
  std::uint64_t seed = 0;
  double tol = 0.0;
  std::vector<AxiomCheck> checks;
  bool pass = false;

  const AxiomCheck* find(const std::string& name) const;
};

// Samples `samples` seeded tuples and measures the worst relative violation of
// the pairing axioms: linearity in the first slot, compatibility with the
// algebra action, conjugate symmetry, positivity/definiteness, and scalar
// action compatibility. Violations are divided by max(1, product of the
// participating norms) before comparison with tol.
AxiomReport check_axioms(ModuleDescriptor desc, int samples, std::uint64_t seed, double tol);

}  // namespace hcm
