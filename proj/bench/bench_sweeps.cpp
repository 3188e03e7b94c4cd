// Timing comparison of the parallel sweep kernels against their serial
// references on a representative certification workload. Prints a table and
// reports whether the reductions agreed bit-for-bit.

#include <chrono>
#include <cstdio>
#include <vector>

#include "hcm/maps.hpp"
#include "hcm/sweep.hpp"

using namespace hcm;

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

struct Workload {
  ApproxMap f;
  std::vector<ModuleElement> probes;
  std::vector<PairIndex> pairs;
  std::vector<UnitScalar> mus;
};

Workload make_workload(int probe_count) {
  const ModuleDescriptor desc(AlgebraDescriptor(3), 2);
  const ControlFunction phi = ControlFunction::power(0.1, 0.5, Direction::Expand);
  PerturbationSpec pert;
  pert.kind = PerturbationSpec::Kind::Bump;
  pert.amplitude = 1.0;
  pert.radius = 8.0;
  pert.seed = 9;
  Workload w;
  w.f = build_perturbed(HomomorphismSpec::random(desc, 5), pert, phi, desc);
  const double scales[] = {0.01, 0.1, 1.0, 10.0};
  ProbeSet probes = ProbeSet::build(desc, probe_count, scales, 11);
  w.probes = std::move(probes.elements);
  w.pairs = default_pairs(w.probes.size());
  w.mus = mu_palette(11);
  return w;
}

}  // namespace

int main() {
  std::printf("sweep kernels: %d thread(s)\n\n", sweep::thread_count());
  std::printf("%8s %10s %12s %12s %9s %6s\n", "probes", "jobs", "serial_s", "parallel_s",
              "speedup", "match");

  for (int probe_count : {64, 128, 256, 512}) {
    const Workload w = make_workload(probe_count);
    const std::size_t jobs = w.pairs.size() * w.mus.size();
    const auto defect_at = [&](std::size_t j) {
      const std::size_t mi = j % w.mus.size();
      const PairIndex pq = w.pairs[j / w.mus.size()];
      return additive_defect(w.f, w.probes[pq.x], w.probes[pq.y], w.mus[mi]);
    };

    const auto t_serial = std::chrono::steady_clock::now();
    const sweep::Extremum s = sweep::argmax_over_serial(jobs, defect_at);
    const double serial_s = seconds_since(t_serial);

    const auto t_parallel = std::chrono::steady_clock::now();
    const sweep::Extremum p = sweep::argmax_over(jobs, defect_at);
    const double parallel_s = seconds_since(t_parallel);

    const bool match = s.value == p.value && s.index == p.index;
    std::printf("%8d %10zu %12.4f %12.4f %8.2fx %6s\n", probe_count, jobs, serial_s,
                parallel_s, parallel_s > 0 ? serial_s / parallel_s : 0.0,
                match ? "yes" : "NO");
    if (!match) return 1;
  }
  return 0;
}
