#include "hcm/fixed_point.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "hcm/sweep.hpp"

namespace hcm {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double distance_ratio(double gap, double budget) {
  if (gap == 0.0) return 0.0;
  if (budget == 0.0) return kInf;
  return gap / budget;
}

}  // namespace

MapPoint MapPoint::wrap(ApproxMap f, Direction dir, std::string tag) {
  MapPoint p;
  p.f_ = std::move(f);
  p.dir_ = dir;
  p.tag_ = std::move(tag);
  return p;
}

ModuleElement MapPoint::operator()(const ModuleElement& x) const {
  return approximant(f_, level_, dir_, x);
}

std::string MapPoint::name() const {
  if (level_ == 0) return tag_;
  return "J^" + std::to_string(level_) + "(" + tag_ + ")";
}

MapPoint apply_contraction(const ContractionOperator& J, const MapPoint& g) {
  if (J.direction != g.dir_)
    throw DomainError("apply_contraction: operator and map point disagree on direction");
  if (g.level_ >= 60)
    throw ScaleError("apply_contraction: level cap reached at " + std::to_string(g.level_));
  MapPoint next = g;
  next.level_ = g.level_ + 1;
  return next;
}

GeneralizedDistance probe_distance(const MapPoint& g, const MapPoint& h,
                                   const ControlFunction& phi, const ProbeSet& probes) {
  if (probes.size() == 0) throw DomainError("probe_distance: probe set is empty");
  if (!(g.base().descriptor() == h.base().descriptor()) ||
      !(g.base().descriptor() == probes.descriptor))
    throw ShapeError("probe_distance: descriptor mismatch");
  const double worst = sweep::max_over(probes.size(), [&](std::size_t i) {
    const double gap = norm_of(g(probes[i]) - h(probes[i]));
    const double budget = phi.is_power() ? phi.pair_budget(probes.norms[i], probes.norms[i])
                                         : phi.pair_budget(probes[i], probes[i]);
    return distance_ratio(gap, budget);
  });
  return GeneralizedDistance{worst};
}

DmDiagnostics dm_iterate(const MapPoint& x0, const ContractionOperator& J,
                         const ControlFunction& phi, const ProbeSet& probes, int max_iter,
                         double tol) {
  if (max_iter < 1) throw DomainError("dm_iterate: max_iter must be >= 1");
  if (!(tol >= 0.0)) throw DomainError("dm_iterate: tol must be >= 0");
  if (!(J.lipschitz >= 0.0 && J.lipschitz < 1.0))
    throw DomainError("dm_iterate: contraction constant must lie in [0, 1)");
  if (J.direction != x0.direction() || J.direction != phi.direction())
    throw DomainError("dm_iterate: direction mismatch between operator, start, and control");

  DmDiagnostics diag;
  diag.start = x0;
  diag.tol = tol;

  MapPoint g = x0;
  for (int it = 0; it < max_iter && g.level() < 60; ++it) {
    const MapPoint h = apply_contraction(J, g);
    const double d = probe_distance(g, h, phi, probes).value;
    diag.step_distances.push_back(d);
    if (diag.n0 < 0 && std::isfinite(d)) diag.n0 = it;
    if (it == 0) {
      diag.d_start_step = d;
      diag.certificate = std::isfinite(d) ? d / (1.0 - J.lipschitz) : kInf;
    }
    if (d <= tol) {
      diag.converged = true;
      diag.fixed_point = h;
      diag.iterations = it + 1;
      break;
    }
    g = h;
  }
  if (!diag.converged) {
    diag.fixed_point = g;
    diag.iterations = static_cast<int>(diag.step_distances.size());
  }
  diag.measured = probe_distance(x0, diag.fixed_point, phi, probes).value;
  diag.residual =
      diag.fixed_point.level() < 60
          ? probe_distance(diag.fixed_point, apply_contraction(J, diag.fixed_point), phi, probes)
                .value
          : kInf;
  return diag;
}

DmReport verify_dm_conclusions(const DmDiagnostics& diag, const std::optional<DmDiagnostics>& alt,
                               const ControlFunction& phi, const ProbeSet& probes) {
  DmReport report;
  report.rate_limit = phi.lipschitz() + 0.05;
  // Steps within two decades of tol sit at the measurement resolution of the
  // probe metric and carry no rate signal; the fit stops there.
  const double step_floor = 100.0 * diag.tol;
  double log_sum = 0.0;
  int count = 0;
  for (std::size_t i = 3; i + 1 < diag.step_distances.size(); ++i) {
    const double a = diag.step_distances[i];
    const double b = diag.step_distances[i + 1];
    if (a > step_floor && b > step_floor && std::isfinite(a) && std::isfinite(b)) {
      const double ratio = b / a;
      report.worst_step_ratio = std::max(report.worst_step_ratio, ratio);
      log_sum += std::log(ratio);
      ++count;
    }
  }
  report.fitted_rate = count > 0 ? std::exp(log_sum / count) : 0.0;
  report.rate_pass = count == 0 || report.fitted_rate <= report.rate_limit;
  report.residual_pass = diag.converged && diag.residual <= diag.tol;
  report.certificate_pass =
      !std::isfinite(diag.certificate) || diag.measured <= diag.certificate * (1.0 + 1e-9);

  if (alt) {
    const double gap = sweep::max_over(probes.size(), [&](std::size_t i) {
      const double d = norm_of(diag.fixed_point(probes[i]) - alt->fixed_point(probes[i]));
      return d / std::max(1.0, probes.norms[i]);
    });
    report.uniqueness_gap = gap;
    report.uniqueness_pass = gap <= 1e-9;
  }
  report.pass = report.rate_pass && report.residual_pass && report.certificate_pass &&
                report.uniqueness_pass;
  return report;
}

}  // namespace hcm
