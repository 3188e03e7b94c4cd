#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "hcm/module.hpp"

using namespace hcm;

namespace {

const ModuleDescriptor kM2R2{AlgebraDescriptor{2}, 2};

ModuleElement basis_like(ModuleDescriptor desc, int slot) {
  ModuleElement x(desc);
  x.component(slot) = AlgebraElement::identity(desc.algebra);
  return x;
}

}  // namespace

TEST_CASE("inner product on pinned elements") {
  SUBCASE("(I,0) with itself gives I") {
    const ModuleElement x = basis_like(kM2R2, 0);
    CHECK(inner_product(x, x) == AlgebraElement::identity(kM2R2.algebra));
  }
  SUBCASE("rank 1 reduces to a b*") {
    const ModuleDescriptor r1{AlgebraDescriptor{3}, 1};
    Rng ra(5, 0), rb(5, 1);
    const AlgebraElement a = AlgebraElement::random_gaussian(r1.algebra, 1.0, ra);
    const AlgebraElement b = AlgebraElement::random_gaussian(r1.algebra, 1.0, rb);
    ModuleElement x(r1), y(r1);
    x.component(0) = a;
    y.component(0) = b;
    CHECK(inner_product(x, y) == mul(a, adjoint(b)));
  }
  SUBCASE("(e11, e12) pairs to 2 e11 by hand expansion") {
    // e11 e11* + e12 e12* = e11 + e11 = 2 e11.
    ModuleElement x(kM2R2);
    x.component(0) = AlgebraElement::unit(kM2R2.algebra, 0, 0);
    x.component(1) = AlgebraElement::unit(kM2R2.algebra, 0, 1);
    const AlgebraElement expect =
        ComplexScalar{2.0, 0.0} * AlgebraElement::unit(kM2R2.algebra, 0, 0);
    CHECK(inner_product(x, x) == expect);
    CHECK(norm_of(x) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-14));
  }
}

TEST_CASE("norm on pinned elements") {
  const ModuleDescriptor desc{AlgebraDescriptor{3}, 4};
  CHECK(norm_of(basis_like(desc, 0)) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(norm_of(ModuleElement::zero(desc)) == 0.0);
}

TEST_CASE("module action basics") {
  const ModuleElement x = random_element(kM2R2, 1.0, 9, 0);
  const AlgebraElement id = AlgebraElement::identity(kM2R2.algebra);

  CHECK(module_action(id, x) == x);
  CHECK(module_action(AlgebraElement(kM2R2.algebra), x) == ModuleElement::zero(kM2R2));

  for (std::uint64_t s = 0; s < 100; ++s) {
    Rng rng(33, s);
    const AlgebraElement a = AlgebraElement::random_gaussian(kM2R2.algebra, 1.0, rng);
    const ModuleElement u = random_element(kM2R2, 1.0, 34, 2 * s);
    const ModuleElement v = random_element(kM2R2, 1.0, 34, 2 * s + 1);
    const AlgebraElement lhs = inner_product(module_action(a, u), v);
    const AlgebraElement rhs = mul(a, inner_product(u, v));
    const double scale = operator_norm(a) * norm_of(u) * norm_of(v);
    REQUIRE(operator_norm(lhs - rhs) <= 1e-12 * std::max(1.0, scale));
  }
}

TEST_CASE("axiom checker passes at 1e-10 with tight per-axiom floors") {
  const AxiomReport rep = check_axioms(kM2R2, 1000, 4242, 1e-10);
  REQUIRE(rep.pass);
  REQUIRE(rep.samples == 1000);

  // Violations are already divided by the per-sample gauge, so these compare
  // directly against the published floors.
  struct Floor {
    const char* name;
    double cap;
  };
  const Floor floors[] = {
      {"linearity", 1e-12},        {"action", 1e-12},
      {"conjugate_symmetry", 1e-13}, {"positivity", 1e-10},
      {"definiteness", 1e-12},     {"scalar_compatibility", 1e-14},
      {"cauchy_schwarz", 1e-10},
  };
  for (const auto& f : floors) {
    const AxiomCheck* c = rep.find(f.name);
    REQUIRE(c != nullptr);
    CHECK(c->pass);
    CHECK(c->max_violation <= f.cap);
  }
  const AxiomCheck* exact = rep.find("scalar_compatibility_exact");
  REQUIRE(exact != nullptr);
  CHECK(exact->max_violation == 0.0);
}

TEST_CASE("axiom checker flags the transposed pairing") {
  // sum_i adjoint(x_i) y_i fails linearity in the first slot and the action
  // axiom; it happens to stay conjugate-symmetric. Emulate by feeding
  // adjointed components through the real checker's sampled identities.
  const ModuleDescriptor desc{AlgebraDescriptor{2}, 2};
  auto wrong = [](const ModuleElement& x, const ModuleElement& y) {
    AlgebraElement acc(x.descriptor().algebra);
    for (int i = 0; i < x.rank(); ++i) acc = acc + mul(adjoint(x.component(i)), y.component(i));
    return acc;
  };

  double worst_linearity = 0.0;
  double worst_action = 0.0;
  for (std::uint64_t s = 0; s < 64; ++s) {
    const ModuleElement x = random_element(desc, 1.0, 71, 3 * s);
    const ModuleElement y = random_element(desc, 1.0, 71, 3 * s + 1);
    const ModuleElement z = random_element(desc, 1.0, 71, 3 * s + 2);
    Rng rng(72, s);
    const AlgebraElement a = AlgebraElement::random_gaussian(desc.algebra, 1.0, rng);
    const ComplexScalar alpha{0.0, 1.0};

    const AlgebraElement lin_lhs = wrong(alpha * x + y, z);
    const AlgebraElement lin_rhs = lin_comb(alpha, wrong(x, z), {1.0, 0.0}, wrong(y, z));
    worst_linearity = std::max(worst_linearity, operator_norm(lin_lhs - lin_rhs));

    const AlgebraElement act_lhs = wrong(module_action(a, x), y);
    const AlgebraElement act_rhs = mul(a, wrong(x, y));
    worst_action = std::max(worst_action, operator_norm(act_lhs - act_rhs));
  }
  CHECK(worst_linearity > 1e-2);
  CHECK(worst_action > 1e-2);
}

TEST_CASE("descriptor mismatch throws shape errors") {
  const ModuleDescriptor a{AlgebraDescriptor{2}, 2};
  const ModuleDescriptor b{AlgebraDescriptor{2}, 3};
  const ModuleDescriptor c{AlgebraDescriptor{3}, 2};
  CHECK_THROWS_AS(inner_product(ModuleElement(a), ModuleElement(b)), ShapeError);
  CHECK_THROWS_AS(inner_product(ModuleElement(a), ModuleElement(c)), ShapeError);
  CHECK_THROWS_AS(module_action(AlgebraElement(AlgebraDescriptor{3}), ModuleElement(a)),
                  ShapeError);
  CHECK_THROWS_AS(ModuleElement(a) + ModuleElement(b), ShapeError);
}

TEST_CASE("descriptor guard rejects out-of-range ranks") {
  CHECK_THROWS_AS(ModuleDescriptor(AlgebraDescriptor{2}, 0), DomainError);
  CHECK_THROWS_AS(ModuleDescriptor(AlgebraDescriptor{2}, 9), DomainError);
  CHECK_NOTHROW(ModuleDescriptor(AlgebraDescriptor{2}, 8));
}

TEST_CASE("random elements are seed-deterministic and calibrated") {
  const ModuleDescriptor desc{AlgebraDescriptor{2}, 2};
  CHECK(random_element(desc, 1.0, 5, 0) == random_element(desc, 1.0, 5, 0));
  CHECK(random_element(desc, 1.0, 5, 0) != random_element(desc, 1.0, 6, 0));

  // Norms concentrate near the requested scale: all draws stay within a
  // decade of it.
  for (std::uint64_t s = 0; s < 200; ++s) {
    const double n = norm_of(random_element(desc, 0.01, 91, s));
    REQUIRE(n > 0.001);
    REQUIRE(n < 0.1);
  }
}

TEST_CASE("scale_pow2 is exact and invertible") {
  const ModuleDescriptor desc{AlgebraDescriptor{3}, 2};
  const ModuleElement x = random_element(desc, 1.0, 17, 0);

  CHECK(scale_pow2(x, 0) == x);
  CHECK(scale_pow2(scale_pow2(x, 30), -30) == x);
  CHECK(scale_pow2(scale_pow2(x, -40), 40) == x);

  // Matches the plain scalar product where that product is itself exact.
  CHECK(scale_pow2(x, 3) == ComplexScalar{8.0, 0.0} * x);
  CHECK(norm_of(scale_pow2(x, 10)) == doctest::Approx(1024.0 * norm_of(x)).epsilon(1e-13));
}

TEST_CASE("frobenius bound dominates the norm") {
  const ModuleDescriptor desc{AlgebraDescriptor{3}, 3};
  for (std::uint64_t s = 0; s < 100; ++s) {
    const ModuleElement x = random_element(desc, 1.0, 23, s);
    CHECK(norm_of(x) <= frobenius_bound(x) + 1e-12);
  }
}
