#include "conflab/core/parallel.hpp"

#include <atomic>
#include <cstdlib>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace conflab::par {

namespace {
std::atomic<bool> g_enabled{
#ifdef _OPENMP
    true
#else
    false
#endif
};
}  // namespace

bool enabled() {
#ifdef _OPENMP
  if (const char* e = std::getenv("CONFLAB_SERIAL"); e && e[0] == '1') return false;
  return g_enabled.load(std::memory_order_relaxed);
#else
  return false;
#endif
}

void set_enabled(bool on) { g_enabled.store(on, std::memory_order_relaxed); }

int max_threads() {
#ifdef _OPENMP
  return enabled() ? omp_get_max_threads() : 1;
#else
  return 1;
#endif
}

namespace detail {

void run_chunks(std::int64_t nchunks, void* ctx, void (*body)(void*, std::int64_t)) {
#ifdef _OPENMP
  if (enabled() && nchunks > 1) {
#pragma omp parallel for schedule(static)
    for (std::int64_t c = 0; c < nchunks; ++c) body(ctx, c);
    return;
  }
#endif
  for (std::int64_t c = 0; c < nchunks; ++c) body(ctx, c);
}

}  // namespace detail
}  // namespace conflab::par
