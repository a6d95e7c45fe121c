#include "conflab/mesh/norms.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>

#include "conflab/mesh/fem.hpp"

namespace conflab::mesh {

LorentzNorms lorentz_norms(std::vector<double> values, std::vector<double> weights) {
  LorentzNorms out;
  const std::size_t n = values.size();
  for (auto& v : values) v = std::fabs(v);
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return values[a] > values[b]; });

  // staircase distribution function: for levels L_0 > L_1 > ..., the measure
  // of {|f| > l} on [L_{j+1}, L_j) is the mass at values >= L_j
  double mass = 0, l2sq = 0, l2w = 0, l21 = 0;
  double prev_level = values.empty() ? 0.0 : values[idx[0]];
  for (std::size_t k = 0; k < n; ++k) {
    const double v = values[idx[k]], w = weights[idx[k]];
    if (v < prev_level) {
      l2w = std::max(l2w, prev_level * std::sqrt(mass));
      l21 += std::sqrt(mass) * (prev_level - v);
      prev_level = v;
    }
    mass += w;
    l2sq += w * v * v;
  }
  l2w = std::max(l2w, prev_level * std::sqrt(mass));
  l21 += std::sqrt(mass) * prev_level;  // final drop from the minimum level to 0
  out.l2_weak = l2w;
  out.l21 = l21;
  out.l2 = std::sqrt(l2sq);
  return out;
}

LorentzNorms lorentz_norms(const FieldRm& f) {
  if (f.m != 1) throw std::invalid_argument("lorentz_norms: scalar field expected");
  std::vector<double> vals(std::size_t(f.nv()), 0.0);
  for (int i = 0; i < f.nv(); ++i) vals[size_t(i)] = f.at(i, 0);
  return lorentz_norms(std::move(vals), f.mesh->vertex_area);
}

MorreyProfile morrey_profile(const FieldRm& u, Vec2 center, const std::vector<double>& radii) {
  const TriMesh& mesh = *u.mesh;
  const TriGrad g = gradient_p1(u);
  std::vector<double> g2(size_t(mesh.nt()), 0.0);
  for (int t = 0; t < mesh.nt(); ++t) {
    double s = 0;
    for (int k = 0; k < u.m; ++k) s += g.gx(t, k) * g.gx(t, k) + g.gy(t, k) * g.gy(t, k);
    g2[size_t(t)] = s;
  }
  MorreyProfile prof;
  prof.rho = radii;
  for (double rho : radii) {
    if (center.norm() + rho > 1.0 + 1e-12) throw std::invalid_argument("morrey_profile: ball exits domain");
    double e = 0;
    for (int t = 0; t < mesh.nt(); ++t) {
      // cheap reject: triangle farther than rho from center
      const Vec2 c = mesh.centroid(t) - center;
      const double reach = rho + 2.0 * std::sqrt(mesh.tri_area[size_t(t)]);
      if (c.norm() > reach) continue;
      e += g2[size_t(t)] * clipped_tri_area(mesh, t, center, rho);
    }
    prof.energy.push_back(e);
  }
  prof.alpha = fit_loglog_slope(prof.rho, prof.energy);
  double viol = 0;
  for (std::size_t k = 0; k + 1 < prof.rho.size(); ++k) {
    const double a = prof.energy[k] / (prof.rho[k] * prof.rho[k]);
    const double b = prof.energy[k + 1] / (prof.rho[k + 1] * prof.rho[k + 1]);
    viol = std::max(viol, a - b);
  }
  prof.monotonicity_violation = viol;
  return prof;
}

double pohozaev_check(const FieldRm& v, Vec2 p, double rho, int n_quad) {
  const TriMesh& mesh = *v.mesh;
  const TriGrad g = gradient_p1(v);
  double radial = 0, full = 0;
  for (int k = 0; k < n_quad; ++k) {
    const double th = 2.0 * std::numbers::pi * k / n_quad;
    const Vec2 rhat{std::cos(th), std::sin(th)};
    const Vec2 q = p + rhat * rho;
    const int t = mesh.locate(q);
    if (t < 0) throw std::invalid_argument("pohozaev_check: circle exits mesh");
    for (int c = 0; c < v.m; ++c) {
      const Vec2 gr{g.gx(t, c), g.gy(t, c)};
      const double dr = gr.dot(rhat);
      radial += dr * dr;
      full += gr.dot(gr);
    }
  }
  const double w = 2.0 * std::numbers::pi * rho / n_quad;
  return std::fabs(2.0 * radial * w - full * w);
}

double weak_l2_density(const TriMesh& mesh, const std::vector<double>& r, bool interior_only) {
  double s = 0;
  for (int i = 0; i < mesh.nv(); ++i) {
    if (interior_only && mesh.is_boundary[size_t(i)]) continue;
    s += r[size_t(i)] * r[size_t(i)] / mesh.vertex_area[size_t(i)];
  }
  return std::sqrt(s);
}

double weak_l1(const TriMesh& mesh, const std::vector<double>& r, bool interior_only) {
  double s = 0;
  for (int i = 0; i < mesh.nv(); ++i) {
    if (interior_only && mesh.is_boundary[size_t(i)]) continue;
    s += std::fabs(r[size_t(i)]);
  }
  return s;
}

double weak_hminus1(const PoissonSolver& solver, const std::vector<double>& r) {
  std::vector<double> rr = r;
  for (int i = 0; i < solver.mesh().nv(); ++i)
    if (solver.mesh().is_boundary[size_t(i)]) rr[size_t(i)] = 0.0;
  SolveResult z = solver.solve_dirichlet0(rr);
  double s = 0;
  for (std::size_t i = 0; i < rr.size(); ++i) s += rr[i] * z.x[i];
  return std::sqrt(std::max(0.0, s));
}

double fit_loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int n = 0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    if (!(x[k] > 0) || !(y[k] > 0)) continue;
    const double lx = std::log(x[k]), ly = std::log(y[k]);
    sx += lx; sy += ly; sxx += lx * lx; sxy += lx * ly;
    ++n;
  }
  if (n < 2) return 0;
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace conflab::mesh
