#include "hcm/report.hpp"

#include <cmath>
#include <cstdio>

namespace hcm {

OrderedJson json_real(double v) {
  if (std::isfinite(v)) return v;
  if (std::isnan(v)) return "nan";
  return v > 0 ? "infinity" : "-infinity";
}

OrderedJson to_json(const AxiomReport& report) {
  OrderedJson j;
  j["algebra_dim"] = report.descriptor.algebra.dim;
  j["module_rank"] = report.descriptor.rank;
  j["samples"] = report.samples;
  j["seed"] = report.seed;
  j["tol"] = report.tol;
  OrderedJson checks = OrderedJson::array();
  for (const AxiomCheck& c : report.checks)
    checks.push_back({{"name", c.name}, {"max_violation", c.max_violation}, {"pass", c.pass}});
  j["checks"] = std::move(checks);
  j["pass"] = report.pass;
  return j;
}

namespace {

OrderedJson certificate_json(const HypothesisCertificate& cert) {
  OrderedJson j;
  j["name"] = cert.name;
  j["worst_ratio"] = json_real(cert.worst_ratio);
  j["worst_tuple"] = cert.worst_tuple;
  j["tuples"] = cert.tuples;
  j["certified_norm_cap"] = json_real(cert.certified_norm_cap);
  j["suggested_amplitude"] = cert.suggested_amplitude;
  j["pass"] = cert.pass;
  return j;
}

OrderedJson decay_check_json(const DecayCheck& c) {
  OrderedJson j;
  j["enforced_rows"] = c.enforced_rows;
  j["worst_ratio"] = json_real(c.worst_ratio);
  j["worst_excess"] = json_real(c.worst_excess);
  j["pass"] = c.pass;
  return j;
}

}  // namespace

OrderedJson to_json(const CertificationReport& report) {
  OrderedJson j;
  j["region"] = report.region;
  j["additive"] = certificate_json(report.additive);
  j["product"] = certificate_json(report.product);
  j["star_checked"] = report.star_checked;
  if (report.star_checked) j["star"] = certificate_json(report.star);
  return j;
}

OrderedJson to_json(const StabilizerSection& section) {
  const StabilizerResult& r = section.result;
  OrderedJson j;
  j["direction"] = to_string(r.direction);
  j["N"] = r.N;
  j["triple_horizon"] = r.triple_horizon;
  j["star_tracked"] = r.star_tracked;
  j["probes"] = r.phi_self.size();
  j["bound_constant"] = r.bound_constant;
  j["paper_bound_constant"] = section.paper_bound_constant;

  OrderedJson bound;
  bound["worst_margin"] = json_real(section.bound.worst_margin);
  bound["worst_ratio"] = json_real(section.bound.worst_ratio);
  bound["worst_probe"] = section.bound.worst_probe;
  bound["pass"] = section.bound.pass;
  bound["config_pass"] = section.bound_pass;
  j["bound"] = std::move(bound);

  OrderedJson decay;
  decay["additive"] = decay_check_json(section.decay.additive);
  decay["triple"] = decay_check_json(section.decay.triple);
  if (r.star_tracked) decay["star"] = decay_check_json(section.decay.star);
  decay["measured_rate"] = json_real(section.decay.measured_rate);
  decay["rate_limit"] = section.decay.rate_limit;
  decay["rate_pass"] = section.decay.rate_pass;
  decay["pass"] = section.decay.pass;
  decay["config_pass"] = section.decay_pass;
  j["decay"] = std::move(decay);

  OrderedJson lin;
  lin["max_defect"] = section.linearity.max_defect;
  lin["envelope"] = section.linearity.envelope;
  lin["worst_ratio"] = json_real(section.linearity.worst_ratio);
  lin["pass"] = section.linearity.pass;
  j["linearity"] = std::move(lin);

  OrderedJson records = OrderedJson::array();
  for (const IterationRecord& rec : r.records) {
    OrderedJson row;
    row["n"] = rec.n;
    row["sup_cauchy_increment"] = rec.sup_cauchy_increment;
    row["sup_additive_defect"] = rec.sup_additive_defect;
    row["sup_triple_defect"] = rec.sup_triple_defect;
    row["sup_star_defect"] = rec.sup_star_defect;
    row["sup_distance_to_f"] = rec.sup_distance_to_f;
    row["envelope"] = rec.envelope;
    records.push_back(std::move(row));
  }
  j["records"] = std::move(records);
  return j;
}

namespace {

OrderedJson diagnostics_json(const DmDiagnostics& d, bool with_steps) {
  OrderedJson j;
  j["start"] = d.start.name();
  j["fixed_point"] = d.fixed_point.name();
  j["tol"] = d.tol;
  j["converged"] = d.converged;
  j["iterations"] = d.iterations;
  j["n0"] = d.n0;
  j["d_start_step"] = json_real(d.d_start_step);
  j["certificate"] = json_real(d.certificate);
  j["measured"] = json_real(d.measured);
  j["residual"] = json_real(d.residual);
  if (with_steps) {
    OrderedJson steps = OrderedJson::array();
    for (double s : d.step_distances) steps.push_back(json_real(s));
    j["step_distances"] = std::move(steps);
  }
  return j;
}

}  // namespace

OrderedJson to_json(const FixedPointSection& section) {
  OrderedJson j = diagnostics_json(section.primary, true);
  if (section.alternate) j["alternate"] = diagnostics_json(*section.alternate, false);
  OrderedJson v;
  v["worst_step_ratio"] = json_real(section.verdict.worst_step_ratio);
  v["fitted_rate"] = json_real(section.verdict.fitted_rate);
  v["rate_limit"] = section.verdict.rate_limit;
  v["rate_pass"] = section.verdict.rate_pass;
  v["residual_pass"] = section.verdict.residual_pass;
  v["certificate_pass"] = section.verdict.certificate_pass;
  v["uniqueness_gap"] = json_real(section.verdict.uniqueness_gap);
  v["uniqueness_pass"] = section.verdict.uniqueness_pass;
  v["pass"] = section.verdict.pass;
  j["verdict"] = std::move(v);
  return j;
}

OrderedJson report_to_json(const RunReport& report) {
  OrderedJson j;
  j["config"] = config_to_json(report.config);
  j["seed"] = report.seed;
  if (report.axioms) j["axioms"] = to_json(*report.axioms);
  if (report.certification) j["certification"] = to_json(*report.certification);
  if (report.stabilizer) j["stabilizer"] = to_json(*report.stabilizer);
  if (report.fixed_point) j["fixed_point"] = to_json(*report.fixed_point);
  j["overall_pass"] = report.overall_pass;
  j["timing"] = {{"wall_seconds", report.wall_seconds}};
  j["report_hash"] = "";
  return j;
}

std::uint64_t fnv1a(std::string_view bytes, std::uint64_t state) {
  for (unsigned char c : bytes) {
    state ^= c;
    state *= 1099511628211ull;
  }
  return state;
}

std::string hash_hex(std::uint64_t h) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string region_hash(std::string_view csv_bytes, OrderedJson document) {
  document.erase("timing");
  document.erase("report_hash");
  std::uint64_t h = fnv1a(csv_bytes);
  h = fnv1a(document.dump(2), h);
  return hash_hex(h);
}

}  // namespace hcm
