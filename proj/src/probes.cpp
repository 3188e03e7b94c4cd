#include "hcm/probes.hpp"

namespace hcm {

ProbeSet ProbeSet::build(ModuleDescriptor desc, int count, std::span<const double> scales,
                        std::uint64_t seed) {
  if (count < 1) throw DomainError("ProbeSet: count must be >= 1");
  if (scales.empty()) throw DomainError("ProbeSet: at least one norm scale required");
  for (double s : scales)
    if (!(s > 0.0)) throw DomainError("ProbeSet: norm scales must be positive");

  ProbeSet set;
  set.descriptor = desc;
  set.seed = seed;
  set.elements.reserve(static_cast<std::size_t>(count));
  set.elements.push_back(ModuleElement::zero(desc));
  for (int i = 1; i < count; ++i) {
    const double scale = scales[static_cast<std::size_t>(i - 1) % scales.size()];
    set.elements.push_back(random_element(desc, scale, seed, static_cast<std::uint64_t>(i)));
  }
  set.norms.reserve(set.elements.size());
  for (const auto& e : set.elements) set.norms.push_back(norm_of(e));
  return set;
}

std::vector<PairIndex> default_pairs(std::size_t count) {
  std::vector<PairIndex> pairs;
  pairs.reserve(count);
  const std::size_t step = count / 2 + 1;
  for (std::size_t i = 0; i < count; ++i) pairs.push_back(PairIndex{i, (i + step) % count});
  return pairs;
}

std::vector<TripleIndex> default_triples(std::size_t count) {
  std::vector<TripleIndex> triples;
  triples.reserve(count);
  const std::size_t a = count / 3 + 1;
  const std::size_t b = 2 * count / 3 + 1;
  for (std::size_t i = 0; i < count; ++i)
    triples.push_back(TripleIndex{i, (i + a) % count, (i + b) % count});
  return triples;
}

std::vector<UnitScalar> mu_palette(std::uint64_t seed, int random_count) {
  constexpr double kPi = 3.14159265358979323846;
  std::vector<UnitScalar> palette = {
      UnitScalar::from_angle(0.0),
      UnitScalar::from_angle(kPi / 4.0),
      UnitScalar::from_angle(kPi / 2.0),
      UnitScalar::from_angle(kPi),
      UnitScalar::from_angle(3.0 * kPi / 2.0),
      UnitScalar::from_angle(2.0 * kPi / 3.0),
      UnitScalar::from_angle(1.0),
      UnitScalar::from_angle(2.3999632297286533222),  // golden angle
  };
  Rng rng(seed, 0x6d75ull);
  for (int i = 0; i < random_count; ++i)
    palette.push_back(UnitScalar::from_angle(rng.next_unit() * 2.0 * kPi));
  return palette;
}

}  // namespace hcm
