#pragma once

// Replication farming. Every estimator in this project is a reduction over
// independent replications, each owning a counter-based substream, so the
// parallel schedule cannot change any result: slot r of the output is always
// computed from stream r. The serial runner is the reference implementation;
// the OpenMP runner must produce bit-identical output (tested), and the
// benchmark tool compares their throughput.

#include <cstdlib>
#include <string>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace hwq {

struct ParallelOptions {
  int workers = 0;  // 0 = resolve from HWQ_WORKERS, then hardware
};

inline int resolve_workers(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("HWQ_WORKERS")) {
    const int w = std::atoi(env);
    if (w > 0) return w;
  }
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

// Reference path: plain loop over replication indices.
template <class T, class Fn>
void run_replications_serial(std::size_t reps, Fn&& fn, std::vector<T>& out) {
  out.resize(reps);
  for (std::size_t r = 0; r < reps; ++r) out[r] = fn(r);
}

template <class T, class Fn>
void run_replications_openmp(std::size_t reps, Fn&& fn, std::vector<T>& out, int workers) {
  out.resize(reps);
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) num_threads(workers)
  for (long long r = 0; r < static_cast<long long>(reps); ++r)
    out[static_cast<std::size_t>(r)] = fn(static_cast<std::size_t>(r));
#else
  (void)workers;
  for (std::size_t r = 0; r < reps; ++r) out[r] = fn(r);
#endif
}

template <class T, class Fn>
std::vector<T> run_replications(std::size_t reps, Fn&& fn, const ParallelOptions& opt = {}) {
  std::vector<T> out;
  const int workers = resolve_workers(opt.workers);
  if (workers <= 1)
    run_replications_serial<T>(reps, fn, out);
  else
    run_replications_openmp<T>(reps, fn, out, workers);
  return out;
}

}  // namespace hwq
