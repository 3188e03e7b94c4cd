#include "hcm/module.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <utility>

#include "hcm/sweep.hpp"

namespace hcm {

namespace {

void require_same(const ModuleDescriptor& a, const ModuleDescriptor& b, const char* op) {
  if (!(a == b)) throw ShapeError(std::string(op) + ": module descriptors disagree");
}

constexpr std::array<double, 4> kSampleScales{0.01, 0.1, 1.0, 10.0};

// Scalars whose complex product is computed exactly (sign flips and
// component swaps only), used for the bitwise compatibility identity.
constexpr std::array<ComplexScalar, 4> kExactScalars{
    ComplexScalar{0.0, 0.0}, ComplexScalar{1.0, 0.0}, ComplexScalar{-1.0, 0.0},
    ComplexScalar{0.0, 1.0}};

constexpr std::array<ComplexScalar, 5> kCoefficientPalette{
    ComplexScalar{0.0, 0.0}, ComplexScalar{1.0, 0.0}, ComplexScalar{-1.0, 0.0},
    ComplexScalar{0.0, 1.0}, ComplexScalar{0.5, -0.5}};

ComplexScalar palette_or_random(Rng& rng) {
  const std::uint64_t pick = rng.next_u64() % (kCoefficientPalette.size() + 1);
  if (pick < kCoefficientPalette.size()) return kCoefficientPalette[pick];
  return rng.next_complex_gaussian();
}

struct AxiomSample {
  ModuleElement x, y, z;
  AlgebraElement a;
  ComplexScalar alpha, beta, lambda, exact_lambda;
};

AxiomSample draw_sample(ModuleDescriptor desc, std::uint64_t seed, std::size_t index) {
  Rng rng(seed, index);
  const double scale = kSampleScales[index % kSampleScales.size()];
  AxiomSample s{ModuleElement(desc), ModuleElement(desc), ModuleElement(desc),
                AlgebraElement(desc.algebra), {}, {}, {}, {}};
  s.x = random_element(desc, scale, rng);
  s.y = random_element(desc, scale, rng);
  s.z = random_element(desc, scale, rng);
  const double sd = 0.5 / std::sqrt(static_cast<double>(desc.algebra.dim));
  s.a = AlgebraElement::random_gaussian(desc.algebra, sd, rng);
  s.alpha = palette_or_random(rng);
  s.beta = palette_or_random(rng);
  s.lambda = palette_or_random(rng);
  s.exact_lambda = kExactScalars[rng.next_u64() % kExactScalars.size()];
  return s;
}

double gauge(double product_of_norms) { return std::max(1.0, product_of_norms); }

}  // namespace

ModuleDescriptor::ModuleDescriptor(AlgebraDescriptor alg, int n) : algebra(alg), rank(n) {
  if (n < 1 || n > 8)
    throw DomainError("ModuleDescriptor: rank must lie in [1, 8], got " + std::to_string(n));
}

ModuleElement::ModuleElement(ModuleDescriptor desc)
    : desc_(desc),
      comps_(static_cast<std::size_t>(desc.rank), AlgebraElement(desc.algebra)) {}

ModuleElement::ModuleElement(ModuleDescriptor desc, std::vector<AlgebraElement> components)
    : desc_(desc), comps_(std::move(components)) {
  if (comps_.size() != static_cast<std::size_t>(desc_.rank))
    throw ShapeError("ModuleElement: component count does not match rank");
  for (const auto& c : comps_)
    if (!(c.descriptor() == desc_.algebra))
      throw ShapeError("ModuleElement: component algebra descriptor mismatch");
}

bool ModuleElement::finite() const {
  for (const auto& c : comps_)
    if (!c.finite()) return false;
  return true;
}

AlgebraElement inner_product(const ModuleElement& x, const ModuleElement& y) {
  require_same(x.descriptor(), y.descriptor(), "inner_product");
  AlgebraElement acc(x.descriptor().algebra);
  for (int i = 0; i < x.rank(); ++i) acc = acc + mul(x.component(i), adjoint(y.component(i)));
  return acc;
}

ModuleElement module_action(const AlgebraElement& a, const ModuleElement& x) {
  if (!(a.descriptor() == x.descriptor().algebra))
    throw ShapeError("module_action: algebra descriptors disagree");
  ModuleElement r(x.descriptor());
  for (int i = 0; i < x.rank(); ++i) r.component(i) = mul(a, x.component(i));
  return r;
}

double norm_of(const ModuleElement& x) {
  // The pairing squares the entries, so elements beyond ~1e150 need the same
  // exact power-of-two detour operator_norm uses internally.
  double mx = 0.0;
  for (int i = 0; i < x.rank(); ++i)
    for (const auto& z : x.component(i).entries())
      mx = std::max({mx, std::abs(z.real()), std::abs(z.imag())});
  if (mx > 1e140) {
    const int e = std::ilogb(mx);
    return std::ldexp(norm_of(scale_pow2(x, -e)), e);
  }
  return std::sqrt(operator_norm(inner_product(x, x)));
}

double frobenius_bound(const ModuleElement& x) {
  double s = 0.0;
  for (int i = 0; i < x.rank(); ++i) {
    const double f = frobenius_norm(x.component(i));
    s += f * f;
  }
  return std::sqrt(s);
}

ModuleElement operator+(const ModuleElement& x, const ModuleElement& y) {
  require_same(x.descriptor(), y.descriptor(), "operator+");
  ModuleElement r(x.descriptor());
  for (int i = 0; i < x.rank(); ++i) r.component(i) = x.component(i) + y.component(i);
  return r;
}

ModuleElement operator-(const ModuleElement& x, const ModuleElement& y) {
  require_same(x.descriptor(), y.descriptor(), "operator-");
  ModuleElement r(x.descriptor());
  for (int i = 0; i < x.rank(); ++i) r.component(i) = x.component(i) - y.component(i);
  return r;
}

ModuleElement operator*(ComplexScalar alpha, const ModuleElement& x) {
  ModuleElement r(x.descriptor());
  for (int i = 0; i < x.rank(); ++i) r.component(i) = alpha * x.component(i);
  return r;
}

ModuleElement scale_pow2(const ModuleElement& x, int e) {
  ModuleElement r = x;
  for (int i = 0; i < r.rank(); ++i) {
    AlgebraElement& c = r.component(i);
    for (int row = 0; row < c.dim(); ++row)
      for (int col = 0; col < c.dim(); ++col) {
        ComplexScalar& v = c(row, col);
        v = ComplexScalar{std::ldexp(v.real(), e), std::ldexp(v.imag(), e)};
      }
  }
  return r;
}

ModuleElement random_element(ModuleDescriptor desc, double scale, Rng& rng) {
  if (!(scale > 0.0)) throw DomainError("random_element: scale must be positive");
  const double sd = scale / std::sqrt(static_cast<double>(desc.rank) * desc.algebra.dim);
  ModuleElement r(desc);
  for (int i = 0; i < desc.rank; ++i)
    r.component(i) = AlgebraElement::random_gaussian(desc.algebra, sd, rng);
  return r;
}

ModuleElement random_element(ModuleDescriptor desc, double scale, std::uint64_t seed,
                             std::uint64_t stream) {
  Rng rng(seed, stream);
  return random_element(desc, scale, rng);
}

const AxiomCheck* AxiomReport::find(const std::string& name) const {
  for (const auto& c : checks)
    if (c.name == name) return &c;
  return nullptr;
}

AxiomReport check_axioms(ModuleDescriptor desc, int samples, std::uint64_t seed, double tol) {
  if (samples < 1) throw DomainError("check_axioms: samples must be >= 1");
  const auto n = static_cast<std::size_t>(samples);

  // Each lambda regenerates its sample from (seed, i), so the sweeps are pure
  // and parallel-safe without shared state.
  const double linearity = sweep::max_over(n, [&](std::size_t i) {
    const AxiomSample s = draw_sample(desc, seed, i);
    const AlgebraElement lhs = inner_product(s.alpha * s.x + s.beta * s.y, s.z);
    const AlgebraElement rhs =
        lin_comb(s.alpha, inner_product(s.x, s.z), s.beta, inner_product(s.y, s.z));
    const double g = gauge((std::abs(s.alpha) * norm_of(s.x) + std::abs(s.beta) * norm_of(s.y)) *
                           norm_of(s.z));
    return operator_norm(lhs - rhs) / g;
  });

  const double action = sweep::max_over(n, [&](std::size_t i) {
    const AxiomSample s = draw_sample(desc, seed, i);
    const AlgebraElement lhs = inner_product(module_action(s.a, s.x), s.y);
    const AlgebraElement rhs = mul(s.a, inner_product(s.x, s.y));
    const double g = gauge(operator_norm(s.a) * norm_of(s.x) * norm_of(s.y));
    return operator_norm(lhs - rhs) / g;
  });

  const double symmetry = sweep::max_over(n, [&](std::size_t i) {
    const AxiomSample s = draw_sample(desc, seed, i);
    const AlgebraElement lhs = adjoint(inner_product(s.x, s.y));
    const AlgebraElement rhs = inner_product(s.y, s.x);
    return operator_norm(lhs - rhs) / gauge(norm_of(s.x) * norm_of(s.y));
  });

  const double positivity = sweep::max_over(n, [&](std::size_t i) {
    const AxiomSample s = draw_sample(desc, seed, i);
    const AlgebraElement g = inner_product(s.x, s.x);
    // Violation is the relative defect from positivity: asymmetry plus the
    // magnitude of the most negative eigenvalue.
    const double gau = gauge(operator_norm(g));
    const double asym = operator_norm(g - adjoint(g)) / gau;
    const double neg = std::max(0.0, -min_hermitian_eigenvalue(g)) / gau;
    return std::max(asym, neg);
  });

  // Definiteness: the zero element has norm exactly 0; a sample with visibly
  // nonzero entries must not collapse below the tolerance floor.
  const double definiteness = std::max(
      norm_of(ModuleElement::zero(desc)),
      sweep::max_over(n, [&](std::size_t i) {
        const AxiomSample s = draw_sample(desc, seed, i);
        const bool visibly_nonzero = frobenius_bound(s.x) > 1e-6;
        return (visibly_nonzero && norm_of(s.x) <= 1e-12) ? 1.0 : 0.0;
      }));

  const double compat_exact = sweep::max_over(n, [&](std::size_t i) {
    const AxiomSample s = draw_sample(desc, seed, i);
    const ModuleElement lhs = s.exact_lambda * module_action(s.a, s.x);
    const ModuleElement rhs = module_action(s.exact_lambda * s.a, s.x);
    return lhs == rhs ? 0.0 : norm_of(lhs - rhs) + 1.0;
  });

  const double compat = sweep::max_over(n, [&](std::size_t i) {
    const AxiomSample s = draw_sample(desc, seed, i);
    const ModuleElement lhs = module_action(s.lambda * s.a, s.x);
    const ModuleElement rhs = module_action(s.a, s.lambda * s.x);
    return norm_of(lhs - rhs) / gauge(operator_norm(s.a) * norm_of(s.x));
  });

  const double cauchy_schwarz = sweep::max_over(n, [&](std::size_t i) {
    const AxiomSample s = draw_sample(desc, seed, i);
    const double excess = operator_norm(inner_product(s.x, s.y)) - norm_of(s.x) * norm_of(s.y);
    return std::max(0.0, excess);
  });

  AxiomReport report;
  report.descriptor = desc;
  report.samples = samples;
  report.seed = seed;
  report.tol = tol;
  report.checks = {
      AxiomCheck{"linearity", linearity, linearity <= tol},
      AxiomCheck{"action", action, action <= tol},
      AxiomCheck{"conjugate_symmetry", symmetry, symmetry <= tol},
      AxiomCheck{"positivity", positivity, positivity <= tol},
      AxiomCheck{"definiteness", definiteness, definiteness <= 1e-12},
      AxiomCheck{"scalar_compatibility_exact", compat_exact, compat_exact == 0.0},
      AxiomCheck{"scalar_compatibility", compat, compat <= tol},
      AxiomCheck{"cauchy_schwarz", cauchy_schwarz, cauchy_schwarz <= 1e-10},
  };
  report.pass = true;
  for (const auto& c : report.checks) report.pass = report.pass && c.pass;
  return report;
}

}  // namespace hcm
