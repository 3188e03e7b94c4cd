#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <utility>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace hcm::sweep {

// Max-reduction kernels over an index range. f must be a pure function of the
// index; each f(i) is then computed through the same arithmetic path on every
// thread layout, and max itself is order-independent, so the parallel results
// are bit-identical to the serial reference (ties broken by lowest index).
//
// The *_serial variants are the reference implementations kept for tests and
// for the benchmark target.

struct Extremum {
  double value = -std::numeric_limits<double>::infinity();
  std::size_t index = static_cast<std::size_t>(-1);
};

template <class F>
Extremum argmax_over_serial(std::size_t count, F&& f) {
  Extremum best;
  for (std::size_t i = 0; i < count; ++i) {
    const double v = f(i);
    if (v > best.value || (v == best.value && i < best.index)) best = Extremum{v, i};
  }
  return best;
}

template <class F>
Extremum argmax_over(std::size_t count, F&& f) {
#ifdef _OPENMP
  Extremum best;
#pragma omp parallel
  {
    Extremum local;
#pragma omp for schedule(static) nowait
    for (std::int64_t i = 0; i < static_cast<std::int64_t>(count); ++i) {
      const double v = f(static_cast<std::size_t>(i));
      const auto idx = static_cast<std::size_t>(i);
      if (v > local.value || (v == local.value && idx < local.index)) local = Extremum{v, idx};
    }
#pragma omp critical(hcm_sweep_argmax)
    {
      if (local.value > best.value ||
          (local.value == best.value && local.index < best.index))
        best = local;
    }
  }
  return best;
#else
  return argmax_over_serial(count, std::forward<F>(f));
#endif
}

template <class F>
double max_over_serial(std::size_t count, F&& f) {
  const Extremum e = argmax_over_serial(count, std::forward<F>(f));
  return count == 0 ? 0.0 : e.value;
}

template <class F>
double max_over(std::size_t count, F&& f) {
  const Extremum e = argmax_over(count, std::forward<F>(f));
  return count == 0 ? 0.0 : e.value;
}

// Parallel index loop for side-effect writes to disjoint slots; f(i) must
// touch only state owned by index i.
template <class F>
void for_each_index(std::size_t count, F&& f) {
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < static_cast<std::int64_t>(count); ++i)
    f(static_cast<std::size_t>(i));
#else
  for (std::size_t i = 0; i < count; ++i) f(i);
#endif
}

// Element-wise parallel fill of a preallocated buffer: out[i] = f(i).
template <class F>
void fill(std::size_t count, double* out, F&& f) {
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < static_cast<std::int64_t>(count); ++i)
    out[i] = f(static_cast<std::size_t>(i));
#else
  for (std::size_t i = 0; i < count; ++i) out[i] = f(i);
#endif
}

inline int thread_count() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

}  // namespace hcm::sweep
