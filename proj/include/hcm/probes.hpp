#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "hcm/module.hpp"

namespace hcm {

// Seeded probe inventory shared by certification, the stabilizer, and the
// fixed-point engine. Element 0 is always the zero element; the rest cycle
// through the requested norm-scale classes. Norms are cached.
struct ProbeSet {
  ModuleDescriptor descriptor;
  std::vector<ModuleElement> elements;
  std::vector<double> norms;
  std::uint64_t seed = 0;

  static ProbeSet build(ModuleDescriptor desc, int count, std::span<const double> scales,
                        std::uint64_t seed);

  std::size_t size() const { return elements.size(); }
  const ModuleElement& operator[](std::size_t i) const { return elements[i]; }
};

struct PairIndex {
  std::size_t x = 0, y = 0;
};

struct TripleIndex {
  std::size_t x = 0, y = 0, z = 0;
};

// Deterministic pairings across scale classes: probe i with probe i + m/2.
std::vector<PairIndex> default_pairs(std::size_t count);

// Deterministic triangles: (i, i + m/3, i + 2m/3).
std::vector<TripleIndex> default_triples(std::size_t count);

// Unit scalars exercised in the additive defect: fixed angles covering the
// axes, a few irrational ones, plus `random_count` seeded draws.
std::vector<UnitScalar> mu_palette(std::uint64_t seed, int random_count = 4);

}  // namespace hcm
