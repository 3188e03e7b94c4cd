#include "hcm/maps.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>

#include "hcm/sweep.hpp"

namespace hcm {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kCertifyTol = 1e-9;

double ratio_of(double defect, double budget) {
  if (defect == 0.0) return 0.0;
  if (budget == 0.0) return kInf;
  return defect / budget;
}

ModuleElement unit_direction(ModuleDescriptor desc, const PerturbationSpec& pert) {
  ModuleElement dir(desc);
  if (pert.payload) {
    if (!(pert.payload->descriptor() == desc))
      throw ShapeError("build_perturbed: payload descriptor does not match the module");
    dir = *pert.payload;
  } else {
    dir = random_element(desc, 1.0, pert.seed, 0x70617964ull);
  }
  const double n = norm_of(dir);
  if (!(n > 0.0)) throw DomainError("build_perturbed: perturbation direction has zero norm");
  return ComplexScalar{1.0 / n, 0.0} * dir;
}

// Calibration factor theta / (2^(p-1) + 1) shared by Bump and Homogeneous;
// sized so the shape-scaled perturbation stays inside the additive budget
// phi(x, y, 0) for every mu, x, y, not just on the sampled region.
double calibrated_coefficient(const PerturbationSpec& pert, const ControlFunction& phi) {
  return pert.amplitude * phi.theta() / (std::exp2(phi.exponent() - 1.0) + 1.0);
}

struct SweepCell {
  double defect = 0.0;      // hypothesis defect, measured in the rescaled frame
  double budget = 0.0;      // phi at the scaled tuple, same frame
  double floor = 0.0;       // measurement resolution allowance for this tuple
  double tuple_norm = 0.0;  // max component norm of the scaled argument tuple
};

// A tuple fails when its defect clears the budget by more than the headroom
// plus the arithmetic resolution at the tuple's magnitude. Ratios are only
// meaningful for defects above the resolution floor; sub-floor cells are
// indistinguishable from exact and contribute ratio 0.
HypothesisCertificate summarize(const std::string& name, const std::vector<SweepCell>& cells,
                                double spec_amplitude) {
  HypothesisCertificate cert;
  cert.name = name;
  cert.tuples = cells.size();
  cert.certified_norm_cap = kInf;
  bool any_fail = false;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    const SweepCell& c = cells[i];
    const double ratio = c.defect > c.floor ? ratio_of(c.defect, c.budget) : 0.0;
    if (ratio > cert.worst_ratio) {
      cert.worst_ratio = ratio;
      cert.worst_tuple = i;
    }
    if (c.defect > c.budget * (1.0 + kCertifyTol) + c.floor) {
      any_fail = true;
      cert.certified_norm_cap = std::min(cert.certified_norm_cap, c.tuple_norm);
    }
  }
  cert.pass = !any_fail;
  if (cert.pass) {
    cert.suggested_amplitude = spec_amplitude;
  } else if (std::isinf(cert.worst_ratio) || cert.worst_ratio == 0.0) {
    cert.suggested_amplitude = 0.0;
  } else {
    cert.suggested_amplitude = spec_amplitude / cert.worst_ratio;
  }
  return cert;
}

}  // namespace

HomomorphismSpec HomomorphismSpec::identity(ModuleDescriptor desc) {
  HomomorphismSpec s;
  s.permutation.resize(static_cast<std::size_t>(desc.rank));
  std::iota(s.permutation.begin(), s.permutation.end(), 0);
  s.right_unitary = AlgebraElement::identity(desc.algebra);
  s.phase = UnitScalar{};
  return s;
}

HomomorphismSpec HomomorphismSpec::zero(ModuleDescriptor desc) {
  HomomorphismSpec s = identity(desc);
  s.zero_map = true;
  return s;
}

HomomorphismSpec HomomorphismSpec::random(ModuleDescriptor desc, std::uint64_t seed) {
  HomomorphismSpec s = identity(desc);
  Rng rng(seed, 0x686f6d6full);
  for (std::size_t i = s.permutation.size(); i > 1; --i) {
    const auto j = static_cast<std::size_t>(rng.next_u64() % i);
    std::swap(s.permutation[i - 1], s.permutation[j]);
  }
  s.right_unitary = random_unitary(desc.algebra, rng.next_u64());
  s.phase = UnitScalar::from_angle(rng.next_unit() * 6.283185307179586);
  return s;
}

double bump_profile(double t, double radius) {
  if (!(radius > 0.0)) throw DomainError("bump_profile: radius must be positive");
  const auto smooth = [](double u) { return u * u * (3.0 - 2.0 * u); };
  const double r0 = 0.25 * radius;
  if (!(t > 0.0)) return 0.0;
  if (t < r0) return smooth(t / r0);
  if (t <= 0.5 * radius) return 1.0;
  if (t < radius) return smooth((radius - t) / (0.5 * radius));
  return 0.0;
}

ModuleElement ApproxMap::operator()(const ModuleElement& x) const {
  if (!(x.descriptor() == desc_)) throw ShapeError("ApproxMap: argument descriptor mismatch");
  ModuleElement out(desc_);
  if (!base_.zero_map) {
    const ComplexScalar phase = base_.phase.value();
    for (int i = 0; i < desc_.rank; ++i)
      out.component(i) =
          phase * mul(x.component(base_.permutation[static_cast<std::size_t>(i)]),
                      base_.right_unitary);
  }
  if (pert_) {
    double shape = 1.0;
    switch (pert_->kind) {
      case PerturbationSpec::Kind::ConstantShift:
        break;
      case PerturbationSpec::Kind::Bump:
        shape = bump_profile(norm_of(x), pert_->radius);
        break;
      case PerturbationSpec::Kind::Homogeneous:
        shape = std::pow(norm_of(x), pert_->exponent);
        break;
    }
    out = out + ComplexScalar{pert_->amplitude * shape, 0.0} * pert_->direction;
  }
  return out;
}

ApproxMap ApproxMap::with_amplitude(double amplitude) const {
  if (!pert_) throw DomainError("ApproxMap::with_amplitude: map has no perturbation");
  if (!(amplitude >= 0.0) || !std::isfinite(amplitude))
    throw DomainError("ApproxMap::with_amplitude: amplitude must be finite and >= 0");
  ApproxMap copy = *this;
  const double old = copy.pert_->amplitude;
  copy.pert_->amplitude = amplitude;
  copy.pert_->spec_amplitude = old > 0.0 ? copy.pert_->spec_amplitude * amplitude / old : amplitude;
  return copy;
}

ApproxMap build_homomorphism(const HomomorphismSpec& spec, ModuleDescriptor desc) {
  const auto n = static_cast<std::size_t>(desc.rank);
  if (spec.permutation.size() != n)
    throw ShapeError("build_homomorphism: permutation length does not match rank");
  std::vector<bool> seen(n, false);
  for (int p : spec.permutation) {
    if (p < 0 || p >= desc.rank || seen[static_cast<std::size_t>(p)])
      throw ShapeError("build_homomorphism: permutation is not a bijection on [0, rank)");
    seen[static_cast<std::size_t>(p)] = true;
  }
  if (!(spec.right_unitary.descriptor() == desc.algebra))
    throw ShapeError("build_homomorphism: unitary algebra descriptor mismatch");
  const AlgebraElement uut =
      mul(spec.right_unitary, adjoint(spec.right_unitary)) - AlgebraElement::identity(desc.algebra);
  const double defect = operator_norm(uut);
  if (defect > 1e-12)
    throw ContractError("build_homomorphism: right factor is not unitary, ||u u* - I|| = " +
                        std::to_string(defect));
  ApproxMap f;
  f.desc_ = desc;
  f.base_ = spec;
  return f;
}

ApproxMap build_perturbed(const HomomorphismSpec& base, const PerturbationSpec& pert,
                          const ControlFunction& phi, ModuleDescriptor desc) {
  if (!(pert.amplitude >= 0.0) || !std::isfinite(pert.amplitude))
    throw ConfigError("build_perturbed: amplitude must be finite and >= 0");
  if (!phi.is_power())
    throw ConfigError("build_perturbed: perturbation calibration requires a power control");

  ApproxMap f = build_homomorphism(base, desc);
  ResolvedPerturbation r;
  r.kind = pert.kind;
  r.spec_amplitude = pert.amplitude;
  r.radius = pert.radius;
  r.direction = unit_direction(desc, pert);

  switch (pert.kind) {
    case PerturbationSpec::Kind::ConstantShift:
      if (phi.exponent() != 0.0)
        throw ConfigError("build_perturbed: CONSTANT_SHIFT requires a power control with p=0");
      r.amplitude = pert.amplitude;
      r.exponent = 0.0;
      break;
    case PerturbationSpec::Kind::Bump:
      if (phi.direction() != Direction::Expand)
        throw ConfigError("build_perturbed: BUMP requires direction=expand");
      if (!(pert.radius > 0.0))
        throw ConfigError("build_perturbed: BUMP requires radius > 0");
      r.amplitude = calibrated_coefficient(pert, phi);
      r.exponent = 0.0;
      break;
    case PerturbationSpec::Kind::Homogeneous:
      if (phi.direction() != Direction::Contract || !(phi.exponent() > 3.0))
        throw ConfigError("build_perturbed: HOMOGENEOUS requires direction=contract and p>3");
      if (pert.exponent != phi.exponent())
        throw ConfigError("build_perturbed: HOMOGENEOUS exponent must equal the control exponent");
      r.amplitude = calibrated_coefficient(pert, phi);
      r.exponent = pert.exponent;
      break;
  }
  f.pert_ = std::move(r);
  return f;
}

CertificationReport certify(const ApproxMap& f, const ControlFunction& phi,
                            const ProbeSet& probes, const CertifyOptions& opt) {
  if (probes.size() == 0) throw DomainError("certify: probe set is empty");
  if (!(probes.descriptor == f.descriptor()))
    throw ShapeError("certify: probe descriptor does not match the map");
  if (opt.levels < 0 || opt.level_stride < 1)
    throw DomainError("certify: levels must be >= 0 and level_stride >= 1");

  std::vector<int> levels;
  for (int n = 0; n <= opt.levels; n += opt.level_stride) levels.push_back(n);
  const int sign = phi.direction() == Direction::Expand ? 1 : -1;

  const std::vector<PairIndex> pairs = default_pairs(probes.size());
  const std::vector<TripleIndex> triples = default_triples(probes.size());
  const std::vector<UnitScalar> mus = mu_palette(opt.seed);
  const double spec_amplitude =
      f.perturbation() ? f.perturbation()->spec_amplitude : 0.0;

  // The hypothesis at the 2^(+-n)-scaled tuple is measured after dividing the
  // scaling back out, i.e. through the same exact-power-of-two arithmetic the
  // iteration uses. The ratio is unchanged (both sides carry the identical
  // 2^(+-n) factor) but the linear part of f cancels exactly instead of
  // swamping the defect with the rounding granularity of the scaled-up
  // arguments.
  const auto scaled_map = [&f](int e) {
    return [&f, e](const ModuleElement& v) {
      return scale_pow2(f(scale_pow2(v, e)), -e);
    };
  };
  constexpr double kResolution = 1e-13;

  const std::size_t add_count = levels.size() * pairs.size() * mus.size();
  std::vector<SweepCell> add_cells(add_count);
  {
    std::vector<double> defects(add_count);
    sweep::fill(add_count, defects.data(), [&](std::size_t j) {
      const std::size_t mi = j % mus.size();
      const std::size_t pi = (j / mus.size()) % pairs.size();
      const std::size_t li = j / (mus.size() * pairs.size());
      const PairIndex pq = pairs[pi];
      return additive_defect(scaled_map(sign * levels[li]), probes[pq.x], probes[pq.y],
                             mus[mi]);
    });
    for (std::size_t j = 0; j < add_count; ++j) {
      const std::size_t pi = (j / mus.size()) % pairs.size();
      const std::size_t li = j / (mus.size() * pairs.size());
      const PairIndex pq = pairs[pi];
      const double nx = probes.norms[pq.x], ny = probes.norms[pq.y];
      const int e = sign * levels[li];
      SweepCell& c = add_cells[j];
      c.defect = defects[j];
      c.budget = phi.is_power()
                     ? std::ldexp(phi.pair_budget(std::ldexp(nx, e), std::ldexp(ny, e)), -e)
                     : std::ldexp(phi.pair_budget(scale_pow2(probes[pq.x], e),
                                                  scale_pow2(probes[pq.y], e)),
                                  -e);
      c.floor = kResolution * std::max({1.0, nx, ny});
      c.tuple_norm = std::ldexp(std::max(nx, ny), e);
    }
  }

  // Triple tuples are aligned against the 3n-fold scaling, so the sweep stops
  // at the alignment horizon the iteration itself can reach.
  std::vector<int> trip_levels;
  for (int n : levels)
    if (3 * n <= 60) trip_levels.push_back(n);

  const std::size_t trip_count = trip_levels.size() * triples.size();
  const auto triple_cells = [&](bool star) {
    std::vector<SweepCell> cells(trip_count);
    std::vector<double> defects(trip_count);
    sweep::fill(trip_count, defects.data(), [&](std::size_t j) {
      const std::size_t ti = j % triples.size();
      const std::size_t li = j / triples.size();
      const int e = sign * trip_levels[li];
      const ModuleElement& x = probes[triples[ti].x];
      const ModuleElement& y = probes[triples[ti].y];
      const ModuleElement& z = probes[triples[ti].z];
      const auto fe = scaled_map(e);
      const AlgebraElement pairing =
          star ? adjoint(inner_product(fe(x), fe(y))) : inner_product(fe(x), fe(y));
      const AlgebraElement arg_pairing =
          star ? adjoint(inner_product(x, y)) : inner_product(x, y);
      const ModuleElement lhs = scaled_map(3 * e)(module_action(arg_pairing, z));
      const ModuleElement rhs = module_action(pairing, fe(z));
      return norm_of(lhs - rhs);
    });
    for (std::size_t j = 0; j < trip_count; ++j) {
      const std::size_t ti = j % triples.size();
      const std::size_t li = j / triples.size();
      const int e = sign * trip_levels[li];
      const double nx = probes.norms[triples[ti].x];
      const double ny = probes.norms[triples[ti].y];
      const double nz = probes.norms[triples[ti].z];
      SweepCell& c = cells[j];
      c.defect = defects[j];
      c.budget =
          phi.is_power()
              ? std::ldexp(phi.eval_norms(std::ldexp(nx, e), std::ldexp(ny, e),
                                          std::ldexp(nz, e)),
                           -3 * e)
              : std::ldexp(phi(scale_pow2(probes[triples[ti].x], e),
                               scale_pow2(probes[triples[ti].y], e),
                               scale_pow2(probes[triples[ti].z], e)),
                           -3 * e);
      c.floor = kResolution * std::max(1.0, nx * ny * nz);
      c.tuple_norm = std::ldexp(std::max({nx, ny, nz}), e);
    }
    return cells;
  };

  CertificationReport report;
  report.additive = summarize("additive", add_cells, spec_amplitude);
  report.product = summarize("product", triple_cells(false), spec_amplitude);
  report.star_checked = opt.star;
  if (opt.star) report.star = summarize("star", triple_cells(true), spec_amplitude);

  char buf[176];
  std::snprintf(buf, sizeof(buf),
                "%zu probes, %zu pairs x %zu mu, %zu triples, levels 0..%d step %d, "
                "triple levels to %d (%s)",
                probes.size(), pairs.size(), mus.size(), triples.size(), opt.levels,
                opt.level_stride, trip_levels.empty() ? 0 : trip_levels.back(),
                to_string(phi.direction()));
  report.region = buf;
  return report;
}

}  // namespace hcm
