#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>
#include <vector>

#include "hcm/control.hpp"

using namespace hcm;

namespace {

const ModuleDescriptor kDesc{AlgebraDescriptor{2}, 2};

// Element with a prescribed norm: t * (I, 0).
ModuleElement with_norm(double t) {
  ModuleElement x(kDesc);
  x.component(0) = AlgebraElement::identity(kDesc.algebra);
  return ComplexScalar{t, 0.0} * x;
}

}  // namespace

TEST_CASE("power family evaluation on pinned inputs") {
  const ModuleElement zero = ModuleElement::zero(kDesc);

  SUBCASE("all-zero arguments with p > 0 give 0") {
    const auto phi = ControlFunction::power(0.7, 0.5, Direction::Expand);
    CHECK(phi(zero, zero, zero) == 0.0);
  }
  SUBCASE("theta 0.1, p 0.5, ||x|| = 4 gives 0.2") {
    const auto phi = ControlFunction::power(0.1, 0.5, Direction::Expand);
    CHECK(phi(with_norm(4.0), zero, zero) == doctest::Approx(0.2).epsilon(1e-12));
    CHECK(phi.eval_norms(4.0, 0.0, 0.0) == doctest::Approx(0.2).epsilon(1e-12));
  }
  SUBCASE("p = 0 uses the convention ||x||^0 = 1 everywhere, including 0") {
    const auto phi = ControlFunction::power(1.0, 0.0, Direction::Expand);
    CHECK(phi(zero, zero, zero) == doctest::Approx(3.0).epsilon(1e-15));
    CHECK(phi(with_norm(2.0), with_norm(5.0), zero) == doctest::Approx(3.0).epsilon(1e-15));
  }
}

TEST_CASE("lipschitz constants of the power family") {
  CHECK(power_lipschitz(0.5, Direction::Expand) ==
        doctest::Approx(std::pow(2.0, -0.5)).epsilon(1e-15));
  CHECK(power_lipschitz(0.0, Direction::Expand) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(power_lipschitz(4.0, Direction::Contract) == doctest::Approx(0.5).epsilon(1e-15));

  // Both windows map into (0, 1).
  for (double p : {0.0, 0.25, 0.9, 0.999}) {
    const double L = power_lipschitz(p, Direction::Expand);
    CHECK(L > 0.0);
    CHECK(L < 1.0);
  }
  for (double p : {3.001, 4.0, 7.5, 20.0}) {
    const double L = power_lipschitz(p, Direction::Contract);
    CHECK(L > 0.0);
    CHECK(L < 1.0);
  }
}

TEST_CASE("lipschitz windows reject out-of-range exponents") {
  CHECK_THROWS_AS(power_lipschitz(1.0, Direction::Expand), DomainError);
  CHECK_THROWS_AS(power_lipschitz(4.0, Direction::Expand), DomainError);
  CHECK_THROWS_AS(power_lipschitz(3.0, Direction::Contract), DomainError);
  CHECK_THROWS_AS(power_lipschitz(0.5, Direction::Contract), DomainError);
  CHECK_THROWS_AS(power_lipschitz(-1.0, Direction::Expand), DomainError);
  CHECK_THROWS_AS(power_lipschitz(std::numeric_limits<double>::quiet_NaN(), Direction::Expand),
                  DomainError);

  CHECK_THROWS_WITH_AS(power_lipschitz(4.0, Direction::Expand),
                       "power_lipschitz: expand direction requires p in [0,1), got 4.000000",
                       DomainError);
}

TEST_CASE("contract measured rate is 2^(1-p) and beats the envelope rate") {
  CHECK(contract_power_rate(4.0) == doctest::Approx(0.125).epsilon(1e-15));
  CHECK(contract_power_rate(5.0) == doctest::Approx(0.0625).epsilon(1e-15));
  for (double p : {3.5, 4.0, 6.0}) {
    CHECK(contract_power_rate(p) < power_lipschitz(p, Direction::Contract));
  }
  CHECK_THROWS_AS(contract_power_rate(3.0), DomainError);
}

TEST_CASE("pair budget uses the two-term form") {
  SUBCASE("p = 0 gives 2 theta, not 3 theta") {
    const auto phi = ControlFunction::power(0.15, 0.0, Direction::Expand);
    CHECK(phi.pair_budget(0.0, 0.0) == doctest::Approx(0.3).epsilon(1e-15));
    CHECK(phi.pair_budget(with_norm(7.0), with_norm(0.5)) ==
          doctest::Approx(0.3).epsilon(1e-15));
  }
  SUBCASE("general p sums the two norm powers") {
    const auto phi = ControlFunction::power(0.1, 0.5, Direction::Expand);
    CHECK(phi.pair_budget(4.0, 9.0) == doctest::Approx(0.1 * (2.0 + 3.0)).epsilon(1e-13));
  }
  SUBCASE("custom controls evaluate at a literal zero third slot") {
    const auto phi = ControlFunction::custom(
        [](const ModuleElement& x, const ModuleElement& y, const ModuleElement& z) {
          return norm_of(x) + norm_of(y) + 10.0 * norm_of(z);
        },
        0.5, Direction::Expand);
    CHECK(phi.pair_budget(with_norm(2.0), with_norm(3.0)) == doctest::Approx(5.0).epsilon(1e-12));
    // The norm-only overload has no custom path.
    CHECK_THROWS_AS(phi.pair_budget(1.0, 1.0), ContractError);
  }
}

TEST_CASE("negative custom evaluation is a contract violation") {
  const auto phi = ControlFunction::custom(
      [](const ModuleElement&, const ModuleElement&, const ModuleElement&) { return -1.0; }, 0.5,
      Direction::Expand);
  const ModuleElement zero = ModuleElement::zero(kDesc);
  CHECK_THROWS_AS(phi(zero, zero, zero), ContractError);
}

TEST_CASE("domination holds with equality for the matched lipschitz constant") {
  std::vector<ProbeTriple> probes;
  for (std::uint64_t s = 0; s < 24; ++s)
    probes.push_back(ProbeTriple{random_element(kDesc, 1.0, 800, 3 * s),
                                 random_element(kDesc, 0.1, 800, 3 * s + 1),
                                 random_element(kDesc, 10.0, 800, 3 * s + 2)});

  SUBCASE("expand, p = 0.5") {
    const auto phi = ControlFunction::power(0.1, 0.5, Direction::Expand);
    const auto rep = check_domination(phi, probes);
    CHECK(rep.pass);
    CHECK(rep.worst_ratio == doctest::Approx(1.0).epsilon(1e-12));
  }
  SUBCASE("contract, p = 4") {
    const auto phi = ControlFunction::power(0.1, 4.0, Direction::Contract);
    const auto rep = check_domination(phi, probes);
    CHECK(rep.pass);
    // (L/8) phi(2x,2y,2z) = (2^(3-p)/8) 2^p phi = phi, so equality again.
    CHECK(rep.worst_ratio == doctest::Approx(1.0).epsilon(1e-12));
  }
  SUBCASE("understated L fails") {
    const auto matched = ControlFunction::power(0.1, 0.5, Direction::Expand);
    const auto lying = ControlFunction::custom(
        [phi = matched](const ModuleElement& x, const ModuleElement& y, const ModuleElement& z) {
          return phi(x, y, z);
        },
        0.5, Direction::Expand);
    const auto rep = check_domination(lying, probes);
    CHECK_FALSE(rep.pass);
    CHECK(rep.worst_ratio > 1.0 + 1e-12);
  }
  SUBCASE("all-zero probes with p > 0 pass as 0 <= 0") {
    const ModuleElement zero = ModuleElement::zero(kDesc);
    const std::vector<ProbeTriple> zeros(4, ProbeTriple{zero, zero, zero});
    const auto phi = ControlFunction::power(0.1, 0.5, Direction::Expand);
    const auto rep = check_domination(phi, zeros);
    CHECK(rep.pass);
    CHECK(rep.worst_ratio == 0.0);
  }
  SUBCASE("positive over vanishing RHS reports infinity and fails") {
    const auto phi = ControlFunction::custom(
        [](const ModuleElement& x, const ModuleElement&, const ModuleElement&) {
          return norm_of(x) >= 1.0 ? 1.0 : 0.0;
        },
        0.5, Direction::Expand);
    const std::vector<ProbeTriple> one{
        ProbeTriple{with_norm(1.0), ModuleElement::zero(kDesc), ModuleElement::zero(kDesc)}};
    const auto rep = check_domination(phi, one);
    CHECK_FALSE(rep.pass);
    CHECK(std::isinf(rep.worst_ratio));
  }
}

TEST_CASE("decay envelope is L^n phi") {
  const auto phi = ControlFunction::power(0.1, 0.5, Direction::Expand);
  const ModuleElement x = with_norm(4.0);
  const ModuleElement zero = ModuleElement::zero(kDesc);
  const double L = phi.lipschitz();
  CHECK(decay_envelope(phi, 0, x, zero, zero) == doctest::Approx(0.2).epsilon(1e-12));
  CHECK(decay_envelope(phi, 7, x, zero, zero) ==
        doctest::Approx(std::pow(L, 7) * 0.2).epsilon(1e-12));
  CHECK_THROWS_AS(decay_envelope(phi, -1, x, zero, zero), DomainError);
}

TEST_CASE("power scaling identities across the iteration range") {
  const ModuleElement x = with_norm(3.0);
  const ModuleElement y = with_norm(0.25);
  const ModuleElement zero = ModuleElement::zero(kDesc);

  SUBCASE("expand: phi(2^n x) = 2^(np) phi(x)") {
    const auto phi = ControlFunction::power(0.1, 0.5, Direction::Expand);
    const double base = phi(x, y, zero);
    for (int n = 1; n <= 40; ++n) {
      const double scaled = phi(scale_pow2(x, n), scale_pow2(y, n), zero);
      REQUIRE(scaled == doctest::Approx(std::pow(2.0, 0.5 * n) * base).epsilon(1e-11));
    }
  }
  SUBCASE("contract: phi(x/2^n) = 2^(-np) phi(x)") {
    const auto phi = ControlFunction::power(0.1, 4.0, Direction::Contract);
    const double base = phi(x, y, zero);
    for (int n = 1; n <= 40; ++n) {
      const double scaled = phi(scale_pow2(x, -n), scale_pow2(y, -n), zero);
      REQUIRE(scaled == doctest::Approx(std::pow(2.0, -4.0 * n) * base).epsilon(1e-11));
    }
  }
}

TEST_CASE("constructor guards") {
  CHECK_THROWS_AS(ControlFunction::power(-0.1, 0.5, Direction::Expand), DomainError);
  CHECK_THROWS_AS(ControlFunction::power(0.1, 2.0, Direction::Expand), DomainError);
  CHECK_THROWS_AS(ControlFunction::custom(nullptr, 0.5, Direction::Expand), DomainError);
  CHECK_THROWS_AS(ControlFunction::custom(
                      [](const ModuleElement&, const ModuleElement&, const ModuleElement&) {
                        return 0.0;
                      },
                      1.0, Direction::Expand),
                  DomainError);
}
