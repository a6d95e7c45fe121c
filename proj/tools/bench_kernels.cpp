// Kernel benchmark: serial reference vs OpenMP paths for the hot loops
// (assembly, SpMV, chunked reductions, chart evaluation quadrature).

#include <chrono>
#include <cstdio>

#include "conflab/core/parallel.hpp"
#include "conflab/mesh/fem.hpp"
#include "conflab/mesh/solver.hpp"
#include "conflab/willmore/catalogue.hpp"
#include "conflab/willmore/willmore.hpp"

using namespace conflab;

namespace {
double now_ms() {
  return std::chrono::duration<double, std::milli>(
             std::chrono::steady_clock::now().time_since_epoch())
      .count();
}

template <class F>
double time_best(F&& f, int reps = 3) {
  double best = 1e300;
  for (int r = 0; r < reps; ++r) {
    const double t0 = now_ms();
    f();
    best = std::min(best, now_ms() - t0);
  }
  return best;
}
}  // namespace

int main() {
  const int level = 7;
  mesh::TriMesh msh = mesh::build_disc_mesh(level);
  std::printf("mesh level %d: %d vertices, %d triangles, %d threads available\n", level, msh.nv(),
              msh.nt(), par::max_threads());

  mesh::Csr K = mesh::assemble_stiffness(msh);
  std::vector<double> x(std::size_t(msh.nv()), 1.0), y(std::size_t(msh.nv()), 0.0);
  mesh::FieldRm u = mesh::FieldRm::sample(
      msh, 3, [](mesh::Vec2 p) { return std::vector<double>{p.x, p.y, p.x * p.y}; });
  wil::Surface sph = wil::make_sphere(1.0, 5);

  struct Row {
    const char* name;
    double serial_ms, parallel_ms;
  };
  std::vector<Row> rows;

  auto bench = [&](const char* name, auto&& fn) {
    par::set_enabled(false);
    const double ts = time_best(fn);
    par::set_enabled(true);
    const double tp = time_best(fn);
    rows.push_back({name, ts, tp});
  };

  bench("assemble_stiffness", [&] { mesh::assemble_stiffness(msh); });
  bench("spmv x64", [&] {
    for (int r = 0; r < 64; ++r) K.spmv(x.data(), y.data());
  });
  bench("reduction x64", [&] {
    double s = 0;
    for (int r = 0; r < 64; ++r)
      s += par::sum(msh.nv(), [&](std::int64_t i) { return x[std::size_t(i)] * x[std::size_t(i)]; });
    if (s < 0) std::printf("?");
  });
  bench("gradient_p1 x16", [&] {
    for (int r = 0; r < 16; ++r) mesh::gradient_p1(u);
  });
  bench("willmore quadrature", [&] { wil::willmore_energy(sph); });

  std::printf("%-22s %12s %12s %9s\n", "kernel", "serial ms", "openmp ms", "speedup");
  for (const auto& r : rows)
    std::printf("%-22s %12.2f %12.2f %8.2fx\n", r.name, r.serial_ms, r.parallel_ms,
                r.serial_ms / r.parallel_ms);

  // identical results across paths (determinism contract)
  par::set_enabled(false);
  const double s_serial = par::sum(msh.nv(), [&](std::int64_t i) { return x[std::size_t(i)]; });
  par::set_enabled(true);
  const double s_par = par::sum(msh.nv(), [&](std::int64_t i) { return x[std::size_t(i)]; });
  std::printf("deterministic reduction check: %s\n", s_serial == s_par ? "identical" : "MISMATCH");
  return 0;
}
