#include "hcm/stabilizer.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <utility>

#include "hcm/sweep.hpp"

namespace hcm {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kGuardLimit = 1e100;
constexpr double kHeadroom = 1e-9;
constexpr double kFloor = 1e-12;

double gated_ratio(double defect, double envelope) {
  if (defect == 0.0) return 0.0;
  if (envelope == 0.0) return kInf;
  return defect / envelope;
}

double bound_coefficient(Direction dir, double L) {
  return dir == Direction::Expand ? 1.0 / (2.0 - 2.0 * L) : L / (8.0 - 8.0 * L);
}

struct TupleBudgets {
  std::vector<double> pair;        // additive budget per pair
  std::vector<double> pair_norm;   // max component norm per pair
  std::vector<double> triple;      // three-slot phi per triple
  std::vector<double> triple_norm; // max component norm per triple
  double pair_max = 0.0;
};

TupleBudgets make_budgets(const ControlFunction& phi, const ProbeSet& probes,
                          const std::vector<PairIndex>& pairs,
                          const std::vector<TripleIndex>& triples) {
  TupleBudgets b;
  b.pair.resize(pairs.size());
  b.pair_norm.resize(pairs.size());
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    b.pair[i] = phi.is_power() ? phi.pair_budget(probes.norms[pairs[i].x], probes.norms[pairs[i].y])
                               : phi.pair_budget(probes[pairs[i].x], probes[pairs[i].y]);
    b.pair_norm[i] = std::max(probes.norms[pairs[i].x], probes.norms[pairs[i].y]);
    b.pair_max = std::max(b.pair_max, b.pair[i]);
  }
  b.triple.resize(triples.size());
  b.triple_norm.resize(triples.size());
  for (std::size_t i = 0; i < triples.size(); ++i) {
    const auto& t = triples[i];
    b.triple[i] = phi.is_power()
                      ? phi.eval_norms(probes.norms[t.x], probes.norms[t.y], probes.norms[t.z])
                      : phi(probes[t.x], probes[t.y], probes[t.z]);
    b.triple_norm[i] = std::max({probes.norms[t.x], probes.norms[t.y], probes.norms[t.z]});
  }
  return b;
}

// Per-row reduction of a defect buffer against L^n-damped budgets, enforcing
// only tuples whose scaled norm sits strictly under the cap.
void reduce_track(EnvelopeTrack& track, const std::vector<double>& defects,
                  std::size_t inner,  // jobs per tuple (mu count; 1 for triples)
                  const std::vector<double>& budgets, const std::vector<double>& tuple_norms,
                  double Ln, int scale_exp, double cap) {
  double worst_ratio = 0.0;
  double worst_excess = 0.0;
  int enforced = 0;
  const std::size_t tuples = budgets.size();
  for (std::size_t t = 0; t < tuples; ++t) {
    if (!(std::ldexp(tuple_norms[t], scale_exp) < cap)) continue;
    double defect = 0.0;
    for (std::size_t j = 0; j < inner; ++j) defect = std::max(defect, defects[t * inner + j]);
    const double envelope = Ln * budgets[t];
    worst_ratio = std::max(worst_ratio, gated_ratio(defect, envelope));
    worst_excess = std::max(worst_excess, defect - envelope * (1.0 + kHeadroom) - kFloor);
    ++enforced;
  }
  track.worst_ratio.push_back(worst_ratio);
  track.worst_excess.push_back(worst_excess);
  track.enforced.push_back(enforced);
}

}  // namespace

ModuleElement approximant(const ApproxMap& f, int n, Direction dir, const ModuleElement& x) {
  if (n < 0 || n > 60)
    throw ScaleError("approximant: n must lie in [0, 60], got " + std::to_string(n));
  if (dir == Direction::Expand && n > 0 && std::ldexp(frobenius_bound(x), n) > kGuardLimit) {
    // The Frobenius screen overestimates; settle borderline cases exactly.
    const double nx = norm_of(x);
    if (std::ldexp(nx, n) > kGuardLimit)
      throw ScaleError("approximant: overflow guard, 2^" + std::to_string(n) +
                       " * ||x|| = " + std::to_string(std::ldexp(nx, n)) + " exceeds 1e100");
  }
  if (n == 0) return f(x);
  const int e = dir == Direction::Expand ? n : -n;
  return scale_pow2(f(scale_pow2(x, e)), -e);
}

HypothesisGates HypothesisGates::from(const CertificationReport& cert) {
  HypothesisGates g;
  g.additive_cap = cert.additive.certified_norm_cap;
  g.product_cap = cert.product.certified_norm_cap;
  g.star_cap = cert.star_checked ? cert.star.certified_norm_cap : kInf;
  return g;
}

StabilizerResult stabilize(const ApproxMap& f, const ControlFunction& phi,
                           const ProbeSet& probes, const StabilizeOptions& opt) {
  if (probes.size() == 0) throw DomainError("stabilize: probe set is empty");
  if (!(probes.descriptor == f.descriptor()))
    throw ShapeError("stabilize: probe descriptor does not match the map");
  const Direction dir = phi.direction();
  const int N = opt.N < 0 ? (dir == Direction::Expand ? 30 : 20) : opt.N;
  if (N < 1 || N > 60)
    throw DomainError("stabilize: N must lie in [1, 60], got " + std::to_string(N));
  const int horizon = 3 * N <= 60 ? N : N / 3;
  const double L = phi.lipschitz();
  const int sign = dir == Direction::Expand ? 1 : -1;

  const std::size_t P = probes.size();
  const std::vector<PairIndex> pairs = default_pairs(P);
  const std::vector<TripleIndex> triples = default_triples(P);
  const std::vector<UnitScalar> mus = mu_palette(opt.seed);
  const TupleBudgets budgets = make_budgets(phi, probes, pairs, triples);

  // Overflow prechecks, serial so the error can name the offending tuple
  // before any parallel region starts.
  if (dir == Direction::Expand) {
    const int top = std::min(N + 1, 60);
    for (std::size_t i = 0; i < P; ++i)
      if (std::ldexp(probes.norms[i], top) > kGuardLimit)
        throw ScaleError("stabilize: probe " + std::to_string(i) + " trips the overflow guard at n=" +
                         std::to_string(top));
    for (std::size_t i = 0; i < pairs.size(); ++i)
      if (std::ldexp(probes.norms[pairs[i].x] + probes.norms[pairs[i].y], N) > kGuardLimit)
        throw ScaleError("stabilize: pair " + std::to_string(i) + " trips the overflow guard");
    for (std::size_t i = 0; i < triples.size(); ++i) {
      const auto& t = triples[i];
      const double prod = probes.norms[t.x] * probes.norms[t.y] * probes.norms[t.z];
      if (std::ldexp(prod, 3 * horizon) > kGuardLimit)
        throw ScaleError("stabilize: triple " + std::to_string(i) + " trips the overflow guard");
    }
  }

  StabilizerResult result;
  result.direction = dir;
  result.N = N;
  result.triple_horizon = horizon;
  result.star_tracked = opt.track_star;
  result.bound_constant = bound_coefficient(dir, L);
  result.gates = opt.gates;
  result.phi_self.resize(P);
  for (std::size_t i = 0; i < P; ++i)
    result.phi_self[i] = phi.is_power() ? phi.pair_budget(probes.norms[i], probes.norms[i])
                                        : phi.pair_budget(probes[i], probes[i]);
  result.increment_sum.assign(P, 0.0);

  const ModuleDescriptor desc = probes.descriptor;
  std::vector<ModuleElement> e_zero(P, ModuleElement(desc));  // H_0 = f at each probe
  std::vector<ModuleElement> e_curr(P, ModuleElement(desc));
  std::vector<ModuleElement> e_next(P, ModuleElement(desc));
  sweep::for_each_index(P, [&](std::size_t i) { e_zero[i] = f(probes[i]); });
  e_curr = e_zero;

  // The triple lhs arguments <x,y>z (and the starred ones) do not depend on n.
  std::vector<ModuleElement> w_triple(triples.size(), ModuleElement(desc));
  std::vector<ModuleElement> w_star(triples.size(), ModuleElement(desc));
  sweep::for_each_index(triples.size(), [&](std::size_t i) {
    const AlgebraElement g = inner_product(probes[triples[i].x], probes[triples[i].y]);
    w_triple[i] = module_action(g, probes[triples[i].z]);
    if (opt.track_star) w_star[i] = module_action(adjoint(g), probes[triples[i].z]);
  });

  std::vector<double> add_buf(pairs.size() * mus.size());
  std::vector<double> trip_buf(triples.size());
  std::vector<double> star_buf(triples.size());
  std::vector<double> probe_buf(P);

  for (int n = 0; n <= N; ++n) {
    const double Ln = std::pow(L, n);
    IterationRecord rec;
    rec.n = n;
    rec.envelope = Ln * budgets.pair_max;

    const bool have_next = n + 1 <= 60;
    if (have_next)
      sweep::for_each_index(P, [&](std::size_t i) { e_next[i] = approximant(f, n + 1, dir, probes[i]); });

    // Cauchy increments, telescoping check, and running sums.
    if (have_next) {
      sweep::fill(P, probe_buf.data(), [&](std::size_t i) { return norm_of(e_next[i] - e_curr[i]); });
      double telescope = 0.0;
      for (std::size_t i = 0; i < P; ++i) {
        rec.sup_cauchy_increment = std::max(rec.sup_cauchy_increment, probe_buf[i]);
        result.increment_sum[i] += probe_buf[i];
        telescope = std::max(telescope, gated_ratio(probe_buf[i], 0.5 * Ln * result.phi_self[i]));
      }
      result.telescope_ratio.push_back(telescope);
    } else {
      result.telescope_ratio.push_back(0.0);
    }

    sweep::fill(P, probe_buf.data(), [&](std::size_t i) { return norm_of(e_zero[i] - e_curr[i]); });
    for (std::size_t i = 0; i < P; ++i)
      rec.sup_distance_to_f = std::max(rec.sup_distance_to_f, probe_buf[i]);
    if (n == N) {
      result.bound_checks.resize(P);
      for (std::size_t i = 0; i < P; ++i) {
        BoundCheck bc;
        bc.probe = i;
        bc.distance = probe_buf[i];
        bc.bound = result.bound_constant * result.phi_self[i];
        bc.pass = bc.distance <= bc.bound * (1.0 + kHeadroom) + kFloor;
        result.bound_checks[i] = bc;
      }
    }

    sweep::fill(add_buf.size(), add_buf.data(), [&](std::size_t j) {
      const std::size_t mi = j % mus.size();
      const std::size_t pi = j / mus.size();
      const ComplexScalar mu = mus[mi].value();
      const ModuleElement arg = mu * probes[pairs[pi].x] + probes[pairs[pi].y];
      const ModuleElement lhs = approximant(f, n, dir, arg);
      return norm_of(lhs - mu * e_curr[pairs[pi].x] - e_curr[pairs[pi].y]);
    });
    for (double d : add_buf) rec.sup_additive_defect = std::max(rec.sup_additive_defect, d);
    reduce_track(result.additive_track, add_buf, mus.size(), budgets.pair, budgets.pair_norm, Ln,
                 sign * n, opt.gates.additive_cap);

    if (n <= horizon) {
      sweep::fill(trip_buf.size(), trip_buf.data(), [&](std::size_t t) {
        const ModuleElement lhs = approximant(f, 3 * n, dir, w_triple[t]);
        const ModuleElement rhs = module_action(
            inner_product(e_curr[triples[t].x], e_curr[triples[t].y]), e_curr[triples[t].z]);
        return norm_of(lhs - rhs);
      });
      for (double d : trip_buf) rec.sup_triple_defect = std::max(rec.sup_triple_defect, d);
      reduce_track(result.triple_track, trip_buf, 1, budgets.triple, budgets.triple_norm, Ln,
                   sign * n, opt.gates.product_cap);

      if (opt.track_star) {
        sweep::fill(star_buf.size(), star_buf.data(), [&](std::size_t t) {
          const ModuleElement lhs = approximant(f, 3 * n, dir, w_star[t]);
          const ModuleElement rhs = module_action(
              adjoint(inner_product(e_curr[triples[t].x], e_curr[triples[t].y])),
              e_curr[triples[t].z]);
          return norm_of(lhs - rhs);
        });
        for (double d : star_buf) rec.sup_star_defect = std::max(rec.sup_star_defect, d);
        reduce_track(result.star_track, star_buf, 1, budgets.triple, budgets.triple_norm, Ln,
                     sign * n, opt.gates.star_cap);
      }
    }

    result.records.push_back(rec);
    if (have_next) std::swap(e_curr, e_next);
  }

  result.final_map = Approximant{f, dir, N};
  return result;
}

BoundReport verify_error_bound(const StabilizerResult& result, const ControlFunction& phi) {
  if (result.bound_checks.size() != result.phi_self.size())
    throw ContractError("verify_error_bound: result is incomplete");
  const double K = bound_coefficient(result.direction, phi.lipschitz());
  BoundReport report;
  report.pass = true;
  for (std::size_t i = 0; i < result.bound_checks.size(); ++i) {
    const double bound = K * result.phi_self[i];
    const double distance = result.bound_checks[i].distance;
    const bool ok = distance <= bound * (1.0 + kHeadroom) + kFloor;
    report.pass = report.pass && ok;
    const double margin = distance - bound;
    if (margin > report.worst_margin) {
      report.worst_margin = margin;
      report.worst_probe = i;
      report.worst_ratio = gated_ratio(distance, bound);
    }
  }
  return report;
}

DecayReport defect_decay(const StabilizerResult& result, const ControlFunction& phi) {
  const auto check = [](const std::string& name, const EnvelopeTrack& track) {
    DecayCheck c;
    c.name = name;
    for (std::size_t n = 0; n < track.worst_ratio.size(); ++n) {
      if (track.enforced[n] > 0) ++c.enforced_rows;
      c.worst_ratio = std::max(c.worst_ratio, track.worst_ratio[n]);
      c.worst_excess = std::max(c.worst_excess, track.worst_excess[n]);
    }
    c.pass = c.worst_excess <= 0.0;
    return c;
  };

  DecayReport report;
  report.additive = check("additive", result.additive_track);
  report.triple = check("triple", result.triple_track);
  report.star = result.star_tracked ? check("star", result.star_track)
                                    : DecayCheck{"star", 0, 0.0, 0.0, true};

  // Rows at the numerical noise floor carry no decay signal (an exact
  // homomorphism has ~1e-15 defects at every n); only fit rows above it.
  constexpr double kRateFloor = 1e-13;
  double log_sum = 0.0;
  int count = 0;
  for (std::size_t n = 3; n + 1 < result.records.size(); ++n) {
    const double a = result.records[n].sup_additive_defect;
    const double b = result.records[n + 1].sup_additive_defect;
    if (a > kRateFloor && b > kRateFloor) {
      log_sum += std::log(b / a);
      ++count;
    }
  }
  report.measured_rate = count > 0 ? std::exp(log_sum / count) : 0.0;
  report.rate_limit = phi.lipschitz() + 0.05;
  report.rate_pass = count == 0 || report.measured_rate <= report.rate_limit;
  report.pass = report.additive.pass && report.triple.pass && report.star.pass && report.rate_pass;
  return report;
}

LinearityReport check_linearity(const Approximant& h, const ProbeSet& probes,
                                std::span<const UnitScalar> mus, const ControlFunction& phi) {
  if (probes.size() == 0) throw DomainError("check_linearity: probe set is empty");
  const std::vector<PairIndex> pairs = default_pairs(probes.size());
  const double Ln = std::pow(phi.lipschitz(), h.n);

  std::vector<double> buf(pairs.size() * mus.size());
  sweep::fill(buf.size(), buf.data(), [&](std::size_t j) {
    const std::size_t mi = j % mus.size();
    const std::size_t pi = j / mus.size();
    const ComplexScalar mu = mus[mi].value();
    const ModuleElement x = probes[pairs[pi].x];
    const ModuleElement y = probes[pairs[pi].y];
    return norm_of(h(mu * x + y) - mu * h(x) - h(y));
  });

  LinearityReport report;
  report.pass = true;
  for (std::size_t pi = 0; pi < pairs.size(); ++pi) {
    const double budget = phi.is_power()
                              ? phi.pair_budget(probes.norms[pairs[pi].x], probes.norms[pairs[pi].y])
                              : phi.pair_budget(probes[pairs[pi].x], probes[pairs[pi].y]);
    double defect = 0.0;
    for (std::size_t mi = 0; mi < mus.size(); ++mi)
      defect = std::max(defect, buf[pi * mus.size() + mi]);
    const double envelope = Ln * budget;
    report.max_defect = std::max(report.max_defect, defect);
    report.envelope = std::max(report.envelope, envelope);
    report.worst_ratio = std::max(report.worst_ratio, gated_ratio(defect, envelope));
    report.pass = report.pass && defect <= envelope * (1.0 + kHeadroom) + kFloor;
  }
  return report;
}

void write_csv(const StabilizerResult& result, const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("write_csv: cannot open " + path);
  out << kCsvHeader << "\n";
  char cell[40];
  const auto put = [&](double v) {
    std::snprintf(cell, sizeof(cell), "%.17g", v);
    out << cell;
  };
  for (const auto& rec : result.records) {
    out << rec.n << ",";
    put(rec.sup_cauchy_increment);
    out << ",";
    put(rec.sup_additive_defect);
    out << ",";
    if (rec.n <= result.triple_horizon) put(rec.sup_triple_defect);
    out << ",";
    if (rec.n <= result.triple_horizon && result.star_tracked) put(rec.sup_star_defect);
    out << ",";
    put(rec.sup_distance_to_f);
    out << ",";
    put(rec.envelope);
    out << "\n";
  }
  out.flush();
  if (!out.good()) throw IoError("write_csv: write failed for " + path);
}

}  // namespace hcm
