#include "hcm/experiment.hpp"

#include <chrono>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <utility>

namespace hcm {

namespace {

namespace fs = std::filesystem;

template <class F>
auto stage(const char* name, F&& body) -> decltype(body()) {
  const auto prefix = [name](const std::exception& e) {
    return std::string("stage ") + name + ": " + e.what();
  };
  try {
    return body();
  } catch (const ParseError& e) {
    throw ParseError(prefix(e));
  } catch (const IoError& e) {
    throw IoError(prefix(e));
  } catch (const ShapeError& e) {
    throw ShapeError(prefix(e));
  } catch (const DomainError& e) {
    throw DomainError(prefix(e));
  } catch (const ContractError& e) {
    throw ContractError(prefix(e));
  } catch (const ScaleError& e) {
    throw ScaleError(prefix(e));
  } catch (const ConfigError& e) {
    throw ConfigError(prefix(e));
  } catch (const Error& e) {
    throw Error(prefix(e));
  } catch (const std::exception& e) {
    throw Error(prefix(e));
  }
}

HomomorphismSpec make_base(const ExperimentConfig::Base& base, ModuleDescriptor desc) {
  if (base.kind == "zero") return HomomorphismSpec::zero(desc);
  if (base.kind == "random") return HomomorphismSpec::random(desc, base.seed);
  return HomomorphismSpec::identity(desc);
}

PerturbationSpec make_perturbation(const ExperimentConfig::Perturbation& p) {
  PerturbationSpec spec;
  if (p.kind == "constant_shift")
    spec.kind = PerturbationSpec::Kind::ConstantShift;
  else if (p.kind == "bump")
    spec.kind = PerturbationSpec::Kind::Bump;
  else
    spec.kind = PerturbationSpec::Kind::Homogeneous;
  spec.amplitude = p.amplitude;
  spec.radius = p.radius;
  spec.exponent = p.exponent;
  spec.seed = p.seed;
  return spec;
}

constexpr int kDmMaxIter = 60;
constexpr double kDmTol = 1e-14;

bool config_bound_pass(const StabilizerResult& r, double tol) {
  for (const BoundCheck& c : r.bound_checks)
    if (c.distance > c.bound * (1.0 + tol) + 1e-12) return false;
  return true;
}

bool track_rows_pass(const EnvelopeTrack& t, double tol) {
  for (std::size_t r = 0; r < t.worst_ratio.size(); ++r) {
    if (r < t.enforced.size() && t.enforced[r] == 0) continue;
    const bool ok = (r < t.worst_excess.size() && t.worst_excess[r] <= 0.0) ||
                    t.worst_ratio[r] <= 1.0 + tol;
    if (!ok) return false;
  }
  return true;
}

bool config_decay_pass(const StabilizerResult& r, double tol) {
  if (!track_rows_pass(r.additive_track, tol)) return false;
  if (!track_rows_pass(r.triple_track, tol)) return false;
  if (r.star_tracked && !track_rows_pass(r.star_track, tol)) return false;
  return true;
}

}  // namespace

Materialized materialize(const ExperimentConfig& cfg) {
  ModuleDescriptor desc(AlgebraDescriptor(cfg.algebra_dim), cfg.module_rank);
  const Direction dir =
      cfg.control.direction == "contract" ? Direction::Contract : Direction::Expand;
  ControlFunction phi = ControlFunction::power(cfg.control.theta, cfg.control.p, dir);
  const HomomorphismSpec base = make_base(cfg.base, desc);
  ApproxMap map = cfg.perturbation.kind == "none"
                      ? build_homomorphism(base, desc)
                      : build_perturbed(base, make_perturbation(cfg.perturbation), phi, desc);
  ProbeSet probes =
      ProbeSet::build(desc, cfg.probes.count + 1, cfg.probes.scales, cfg.probes.seed);
  return Materialized{desc, std::move(phi), std::move(map), std::move(probes)};
}

RunReport run_experiment(const ExperimentConfig& cfg, const RunSelection& sel) {
  const auto t0 = std::chrono::steady_clock::now();
  RunReport rep;
  rep.config = cfg;
  rep.seed = cfg.probes.seed;

  Materialized mat = stage("materialize", [&] { return materialize(cfg); });
  const Direction dir = mat.phi.direction();
  const int n_resolved =
      cfg.iterations_N > 0 ? cfg.iterations_N : (dir == Direction::Expand ? 30 : 20);
  bool ok = true;

  if (sel.axioms) {
    rep.axioms = stage("axioms", [&] {
      return check_axioms(mat.desc, 1000, cfg.probes.seed, cfg.tolerances.axiom);
    });
    ok = ok && rep.axioms->pass;
  }

  if (sel.stabilizer) {
    CertifyOptions copt;
    copt.levels = n_resolved;
    copt.star = sel.star;
    copt.seed = cfg.probes.seed;
    rep.certification =
        stage("certify", [&] { return certify(mat.map, mat.phi, mat.probes, copt); });

    StabilizeOptions sopt;
    sopt.N = n_resolved;
    sopt.track_star = sel.star;
    sopt.seed = cfg.probes.seed;
    sopt.gates = HypothesisGates::from(*rep.certification);
    StabilizerSection sec;
    sec.result =
        stage("stabilize", [&] { return stabilize(mat.map, mat.phi, mat.probes, sopt); });

    stage("verify", [&] {
      sec.bound = verify_error_bound(sec.result, mat.phi);
      sec.decay = defect_decay(sec.result, mat.phi);
      const std::vector<UnitScalar> mus = mu_palette(cfg.probes.seed);
      sec.linearity = check_linearity(sec.result.final_map, mat.probes, mus, mat.phi);
      return 0;
    });
    sec.bound_pass = config_bound_pass(sec.result, cfg.tolerances.bound);
    sec.decay_pass = config_decay_pass(sec.result, cfg.tolerances.decay);
    sec.paper_bound_constant =
        mat.phi.is_power() ? 2.0 * mat.phi.theta() * sec.result.bound_constant : 0.0;

    ok = ok && rep.certification->additive.pass && sec.bound_pass && sec.decay_pass &&
         sec.decay.rate_pass && sec.linearity.pass;
    rep.stabilizer = std::move(sec);
  }

  if (sel.fixed_point) {
    FixedPointSection sec = stage("fixed_point", [&] {
      FixedPointSection s;
      const ContractionOperator J = ContractionOperator::for_control(mat.phi);
      const MapPoint x0 = MapPoint::wrap(mat.map, dir, "f");
      s.primary = dm_iterate(x0, J, mat.phi, mat.probes, kDmMaxIter, kDmTol);
      if (cfg.perturbation.kind != "none") {
        ExperimentConfig::Perturbation alt_p = cfg.perturbation;
        alt_p.seed += 1;
        const ApproxMap alt_map = build_perturbed(make_base(cfg.base, mat.desc),
                                                  make_perturbation(alt_p), mat.phi, mat.desc);
        const MapPoint alt0 = MapPoint::wrap(alt_map, dir, "g");
        s.alternate = dm_iterate(alt0, J, mat.phi, mat.probes, kDmMaxIter, kDmTol);
      }
      s.verdict = verify_dm_conclusions(s.primary, s.alternate, mat.phi, mat.probes);
      return s;
    });
    ok = ok && sec.verdict.pass;
    rep.fixed_point = std::move(sec);
  }

  rep.overall_pass = ok;
  rep.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rep;
}

EmitResult emit_report(const RunReport& report, const std::string& out_dir) {
  const fs::path dir = out_dir.empty() ? fs::path(".") : fs::path(out_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("emit: cannot create directory " + dir.string() + ": " + ec.message());

  const fs::path csv_path = dir / report.config.outputs.csv;
  const fs::path json_path = dir / report.config.outputs.json;

  std::string csv_bytes;
  const bool have_csv = report.stabilizer.has_value();
  if (have_csv) {
    write_csv(report.stabilizer->result, csv_path.string());
    std::ifstream in(csv_path, std::ios::binary);
    if (!in) throw IoError("emit: cannot reread " + csv_path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    csv_bytes = buf.str();
  }

  OrderedJson doc = report_to_json(report);
  const std::string hash = region_hash(csv_bytes, doc);
  doc["report_hash"] = hash;

  std::ofstream out(json_path, std::ios::binary);
  if (out) out << doc.dump(2) << "\n";
  if (!out) {
    if (have_csv) fs::remove(csv_path, ec);
    throw IoError("emit: cannot write " + json_path.string());
  }
  return EmitResult{csv_path.string(), json_path.string(), hash};
}

}  // namespace hcm
