#pragma once
#include <type_traits>

#include <cstdint>
#include <vector>

// Data-parallel kernels used by assembly, solvers and quadrature sweeps.
// Every kernel has a serial reference path selected at runtime; reductions
// use a fixed chunk decomposition so the floating-point result is identical
// for any thread count (including the serial path). Tests compare the two
// paths bitwise.

namespace conflab::par {

// Fixed reduction chunk. Changing it changes reduction order, so it is a
// constant, not a tuning knob.
inline constexpr std::int64_t kChunk = 1024;

bool enabled();
void set_enabled(bool on);
int  max_threads();

namespace detail {
void run_chunks(std::int64_t nchunks, void* ctx, void (*body)(void*, std::int64_t));
}

template <class F>
void for_each(std::int64_t n, F&& f) {
  using Fn = std::remove_reference_t<F>;
  struct Ctx { Fn* f; std::int64_t n; } ctx{&f, n};
  const std::int64_t nchunks = (n + kChunk - 1) / kChunk;
  detail::run_chunks(nchunks, &ctx, [](void* p, std::int64_t c) {
    auto* x = static_cast<Ctx*>(p);
    const std::int64_t lo = c * kChunk;
    const std::int64_t hi = lo + kChunk < x->n ? lo + kChunk : x->n;
    for (std::int64_t i = lo; i < hi; ++i) (*x->f)(i);
  });
}

// sum_{i<n} term(i), chunk partials combined in index order.
template <class F>
double sum(std::int64_t n, F&& term) {
  const std::int64_t nchunks = (n + kChunk - 1) / kChunk;
  if (nchunks <= 0) return 0.0;
  std::vector<double> partial(static_cast<std::size_t>(nchunks), 0.0);
  using Fn = std::remove_reference_t<F>;
  struct Ctx { Fn* f; std::int64_t n; double* partial; } ctx{&term, n, partial.data()};
  detail::run_chunks(nchunks, &ctx, [](void* p, std::int64_t c) {
    auto* x = static_cast<Ctx*>(p);
    const std::int64_t lo = c * kChunk;
    const std::int64_t hi = lo + kChunk < x->n ? lo + kChunk : x->n;
    double s = 0.0;
    for (std::int64_t i = lo; i < hi; ++i) s += (*x->f)(i);
    x->partial[c] = s;
  });
  double s = 0.0;
  for (double v : partial) s += v;
  return s;
}

}  // namespace conflab::par
