#include "conflab/comp/compensation.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <memory>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "conflab/core/parallel.hpp"
#include "conflab/mesh/fem.hpp"

namespace conflab::comp {

namespace {
constexpr double kPi = std::numbers::pi;

double grad_l2(const FieldRm& f) { return std::sqrt(2.0 * mesh::dirichlet_energy(f)); }

// exact int_T u phi_v for P1 u: area/12 * (sum_c u_c + u_v)
void add_mass_weighted(const TriMesh& msh, int t, const double* corner_vals, double scale,
                       std::vector<double>& out) {
  const auto& tr = msh.triangles[std::size_t(t)];
  const double area = msh.tri_area[std::size_t(t)];
  const double s = corner_vals[0] + corner_vals[1] + corner_vals[2];
  for (int c = 0; c < 3; ++c)
    out[std::size_t(tr[std::size_t(c)])] += scale * area / 12.0 * (s + corner_vals[c]);
}
}  // namespace

WenteResult wente_solve(const FieldRm& a, const FieldRm& b, const mesh::PoissonSolver* solver) {
  const TriMesh& msh = *a.mesh;
  WenteResult out;
  std::vector<double> rhs = mesh::rhs_jacobian(a, b);
  const mesh::PoissonSolver* S = solver;
  std::unique_ptr<mesh::PoissonSolver> local;
  if (!S) {
    local = std::make_unique<mesh::PoissonSolver>(msh);
    S = local.get();
  }
  mesh::SolveResult r = S->solve_dirichlet0(rhs);
  out.phi = FieldRm(msh, 1);
  out.phi.v = r.x;
  for (double v : r.x) out.phi_linf = std::max(out.phi_linf, std::fabs(v));
  out.grad_phi_l2 = grad_l2(out.phi);
  out.grad_a_l2 = grad_l2(a);
  out.grad_b_l2 = grad_l2(b);
  const double denom = out.grad_a_l2 * out.grad_b_l2;
  if (denom < 1e-14) {
    out.ratio_defined = false;
    out.ratio = 0;
  } else {
    out.ratio = (out.phi_linf + out.grad_phi_l2) / denom;
  }
  return out;
}

std::vector<std::pair<FieldRm, FieldRm>> trig_corpus(const TriMesh& msh, int n_pairs,
                                                     unsigned seed) {
  std::mt19937 rng(seed);
  std::normal_distribution<double> N(0, 1);
  auto random_field = [&]() {
    const double c[8] = {N(rng), N(rng), N(rng), N(rng), N(rng), N(rng), N(rng), N(rng)};
    return FieldRm::sample(msh, 1, [&](Vec2 p) {
      return c[0] * std::sin(kPi * p.x) + c[1] * std::cos(kPi * p.x) + c[2] * std::sin(kPi * p.y) +
             c[3] * std::cos(kPi * p.y) + c[4] * std::sin(kPi * p.x) * std::sin(kPi * p.y) +
             c[5] * std::cos(kPi * p.x) * std::cos(kPi * p.y) +
             c[6] * std::sin(2 * kPi * p.x) * std::cos(kPi * p.y) +
             c[7] * std::cos(2 * kPi * p.y);
    });
  };
  std::vector<std::pair<FieldRm, FieldRm>> corpus;
  corpus.reserve(std::size_t(n_pairs));
  for (int i = 0; i < n_pairs; ++i) {
    FieldRm a = random_field();
    FieldRm b = random_field();
    corpus.emplace_back(std::move(a), std::move(b));
  }
  return corpus;
}

SweepResult wente_constant_sweep(const std::vector<std::pair<FieldRm, FieldRm>>& corpus) {
  SweepResult out;
  if (corpus.empty()) return out;
  mesh::PoissonSolver solver(*corpus.front().first.mesh);
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    WenteResult w = wente_solve(corpus[i].first, corpus[i].second, &solver);
    if (!w.ratio_defined || w.grad_phi_l2 + w.phi_linf < 1e-13) {
      ++out.skipped;  // zero jacobian (e.g. a == b) contributes nothing
      continue;
    }
    if (w.ratio > out.max_ratio) {
      out.max_ratio = w.ratio;
      out.argmax = int(i);
    }
  }
  return out;
}

double clms_hessian_l1(const FieldRm& phi, int grid_n) {
  const TriMesh& msh = *phi.mesh;
  const double hg = 2.0 / (grid_n - 1);
  // stencil wide enough to straddle at least two mesh cells, so the second
  // differences of the piecewise-linear field see curvature, not facet kinks
  double hmesh = 1.0;
  if (msh.refinement_level > 0) hmesh = 1.0 / double(1 << msh.refinement_level);
  const int step = std::max(1, int(std::ceil(2.0 * hmesh / hg)));
  const double H = step * hg;

  std::vector<double> vals(std::size_t(grid_n) * std::size_t(grid_n),
                           std::numeric_limits<double>::quiet_NaN());
  par::for_each(std::int64_t(grid_n) * grid_n, [&](std::int64_t q) {
    const int i = int(q % grid_n), j = int(q / grid_n);
    const Vec2 p{-1.0 + i * hg, -1.0 + j * hg};
    const int t = msh.locate(p);
    if (t < 0) return;
    const auto& tr = msh.triangles[std::size_t(t)];
    const Vec2 a = msh.vertices[std::size_t(tr[0])], b = msh.vertices[std::size_t(tr[1])],
               c = msh.vertices[std::size_t(tr[2])];
    const double A2 = 2.0 * msh.tri_area[std::size_t(t)];
    const double l0 = (b - p).cross(c - p) / A2;
    const double l1 = (c - p).cross(a - p) / A2;
    const double l2 = 1.0 - l0 - l1;
    vals[std::size_t(q)] = l0 * phi.at(tr[0], 0) + l1 * phi.at(tr[1], 0) + l2 * phi.at(tr[2], 0);
  });

  auto at = [&](int i, int j) { return vals[std::size_t(j) * std::size_t(grid_n) + std::size_t(i)]; };
  std::vector<double> dens(std::size_t(grid_n) * std::size_t(grid_n), -1.0);
  for (int j = step; j < grid_n - step; ++j)
    for (int i = step; i < grid_n - step; ++i) {
      const double c0 = at(i, j);
      const double xp = at(i + step, j), xm = at(i - step, j);
      const double yp = at(i, j + step), ym = at(i, j - step);
      const double pp = at(i + step, j + step), pm = at(i + step, j - step);
      const double mp = at(i - step, j + step), mm = at(i - step, j - step);
      if (std::isnan(c0) || std::isnan(xp) || std::isnan(xm) || std::isnan(yp) || std::isnan(ym) ||
          std::isnan(pp) || std::isnan(pm) || std::isnan(mp) || std::isnan(mm))
        continue;
      const double fxx = (xp - 2 * c0 + xm) / (H * H);
      const double fyy = (yp - 2 * c0 + ym) / (H * H);
      const double fxy = (pp - pm - mp + mm) / (4 * H * H);
      dens[std::size_t(j) * std::size_t(grid_n) + std::size_t(i)] =
          std::fabs(fxx) + std::fabs(fyy) + 2 * std::fabs(fxy);
    }
  // cells inside the disc without a full stencil take the nearest valid
  // density along their row (boundary-band convention)
  double total = 0;
  for (int j = 0; j < grid_n; ++j) {
    for (int i = 0; i < grid_n; ++i) {
      const Vec2 p{-1.0 + i * hg, -1.0 + j * hg};
      if (p.norm() > 1.0) continue;
      double d = dens[std::size_t(j) * std::size_t(grid_n) + std::size_t(i)];
      if (d < 0) {
        for (int off = 1; off < grid_n && d < 0; ++off) {
          if (i - off >= 0 && dens[std::size_t(j) * std::size_t(grid_n) + std::size_t(i - off)] >= 0)
            d = dens[std::size_t(j) * std::size_t(grid_n) + std::size_t(i - off)];
          else if (i + off < grid_n &&
                   dens[std::size_t(j) * std::size_t(grid_n) + std::size_t(i + off)] >= 0)
            d = dens[std::size_t(j) * std::size_t(grid_n) + std::size_t(i + off)];
        }
        if (d < 0) d = 0;
      }
      total += d * hg * hg;
    }
  }
  return total;
}

WenteResult chanillo_li_solve(const std::vector<std::array<double, 3>>& coeff_tri,
                              const FieldRm& a, const FieldRm& b) {
  const TriMesh& msh = *a.mesh;
  for (const auto& c : coeff_tri) {
    const double tr = c[0] + c[2], det = c[0] * c[2] - c[1] * c[1];
    if (!(tr > 0 && det > 0))
      throw std::invalid_argument("chanillo_li_solve: coefficient not elliptic");
  }
  mesh::PoissonSolver solver(msh, &coeff_tri);
  std::vector<double> rhs = mesh::rhs_jacobian(a, b);
  mesh::SolveResult r = solver.solve_dirichlet0(rhs);
  WenteResult out;
  out.phi = FieldRm(msh, 1);
  out.phi.v = r.x;
  for (double v : r.x) out.phi_linf = std::max(out.phi_linf, std::fabs(v));
  out.grad_phi_l2 = grad_l2(out.phi);
  out.grad_a_l2 = grad_l2(a);
  out.grad_b_l2 = grad_l2(b);
  const double denom = out.grad_a_l2 * out.grad_b_l2;
  out.ratio_defined = denom >= 1e-14;
  out.ratio = out.ratio_defined ? (out.phi_linf + out.grad_phi_l2) / denom : 0.0;
  return out;
}

BethuelRow bethuel_estimate_experiment(const FieldRm& a, const FieldRm& b) {
  const TriMesh& msh = *a.mesh;
  BethuelRow row;
  WenteResult w = wente_solve(a, b);
  row.grad_phi_l2 = w.grad_phi_l2;
  row.grad_a_l2 = w.grad_a_l2;
  row.grad_b_l2 = w.grad_b_l2;
  mesh::TriGrad g = mesh::gradient_p1(a);
  std::vector<double> ga(std::size_t(msh.nt()), 0.0);
  for (int t = 0; t < msh.nt(); ++t) ga[std::size_t(t)] = std::hypot(g.gx(t, 0), g.gy(t, 0));
  row.grad_a_l2weak = mesh::lorentz_norms(ga, msh.tri_area).l2_weak;
  row.ratio = row.grad_phi_l2 / (row.grad_a_l2weak * row.grad_b_l2 + 1e-300);
  return row;
}

CmcResult cmc_solve(double H, const FieldRm& boundary, double smallness_gate, int max_iter,
                    double tol) {
  const TriMesh& msh = *boundary.mesh;
  if (boundary.m != 3) throw std::invalid_argument("cmc_solve: m == 3 required");
  mesh::PoissonSolver solver(msh);
  std::vector<double> zero(std::size_t(msh.nv()), 0.0);

  FieldRm v(msh, 3);
  for (int k = 0; k < 3; ++k) {
    std::vector<double> gk(std::size_t(msh.nv()), 0.0);
    for (int i = 0; i < msh.nv(); ++i) gk[std::size_t(i)] = boundary.at(i, k);
    mesh::SolveResult rk = solver.solve_dirichlet(zero, gk);
    for (int i = 0; i < msh.nv(); ++i) v.at(i, k) = rk.x[std::size_t(i)];
  }
  const double e0 = mesh::dirichlet_energy(v);
  if (2.0 * e0 > smallness_gate)
    throw std::invalid_argument("cmc_solve: boundary energy above the smallness gate");

  CmcResult out;
  out.u = v;
  double prev_update = -1;
  for (int it = 0; it < max_iter; ++it) {
    out.iterations = it + 1;
    FieldRm unew = v;
    for (int k = 0; k < 3; ++k) {
      const int kp = (k + 1) % 3, km = (k + 2) % 3;
      std::vector<double> rhs = mesh::rhs_jacobian(out.u, out.u, kp, km);
      for (auto& x : rhs) x *= -2.0 * H;
      mesh::SolveResult rk = solver.solve_dirichlet0(rhs);
      for (int i = 0; i < msh.nv(); ++i) unew.at(i, k) += rk.x[std::size_t(i)];
    }
    double up2 = 0, scale2 = 0;
    for (std::size_t i = 0; i < unew.v.size(); ++i) {
      const double d = unew.v[i] - out.u.v[i];
      up2 += d * d;
      scale2 += unew.v[i] * unew.v[i];
    }
    const double update = std::sqrt(up2 / (scale2 + 1e-300));
    out.u = unew;
    if (prev_update > 1e-14 && update > 1e-14)
      out.contraction = std::max(out.contraction, update / prev_update);
    prev_update = update;
    out.final_update = update;
    if (update < tol) {
      out.converged = true;
      break;
    }
    if (mesh::dirichlet_energy(out.u) > 10.0 * (e0 + 1.0))
      throw std::runtime_error("cmc_solve: iteration diverged");
  }
  return out;
}

namespace {
double cmc_residual_impl(const FieldRm& u, const std::function<double(Vec2)>& H) {
  const TriMesh& msh = *u.mesh;
  if (u.m != 3) throw std::invalid_argument("cmc_residual: m == 3 required");
  mesh::PoissonSolver solver(msh);
  mesh::TriGrad g = mesh::gradient_p1(u);
  double total2 = 0;
  for (int k = 0; k < 3; ++k) {
    const int kp = (k + 1) % 3, km = (k + 2) % 3;
    std::vector<mesh::Vec2> X(std::size_t(msh.nt()), mesh::Vec2{});
    for (int t = 0; t < msh.nt(); ++t) X[std::size_t(t)] = {g.gx(t, k), g.gy(t, k)};
    std::vector<double> r = mesh::weak_divergence(msh, X);  // <Delta u^k, phi>
    // -2 int H (u_x x u_y)^k phi in divergence form, H frozen per triangle
    std::vector<double> rj(std::size_t(msh.nv()), 0.0);
    for (int t = 0; t < msh.nt(); ++t) {
      const auto& tr = msh.triangles[std::size_t(t)];
      const double amean = (u.at(tr[0], kp) + u.at(tr[1], kp) + u.at(tr[2], kp)) / 3.0;
      const Vec2 gperp{-g.gy(t, km), g.gx(t, km)};
      const double hv = H(msh.centroid(t));
      const double wgt = amean * msh.tri_area[std::size_t(t)] * hv;
      for (int c = 0; c < 3; ++c)
        rj[std::size_t(tr[std::size_t(c)])] +=
            wgt * gperp.dot(msh.grad_hat[std::size_t(t)][std::size_t(c)]);
    }
    for (int i = 0; i < msh.nv(); ++i) r[std::size_t(i)] -= 2.0 * rj[std::size_t(i)];
    const double w = mesh::weak_hminus1(solver, r);
    total2 += w * w;
  }
  return std::sqrt(total2);
}
}  // namespace

double cmc_residual(const FieldRm& u, std::function<double(Vec2)> H) {
  return cmc_residual_impl(u, H);
}
double cmc_residual(const FieldRm& u, double H) {
  return cmc_residual_impl(u, [H](Vec2) { return H; });
}

FieldRm cap_boundary(const TriMesh& msh, double alpha) {
  const double t = std::tan(alpha / 2);
  FieldRm g(msh, 3);
  for (int i = 0; i < msh.nv(); ++i) {
    if (!msh.is_boundary[std::size_t(i)]) continue;
    const Vec2 p = msh.vertices[std::size_t(i)];
    const double w2 = t * t * p.dot(p);
    g.at(i, 0) = 2 * t * p.x / (1 + w2);
    g.at(i, 1) = 2 * t * p.y / (1 + w2);
    g.at(i, 2) = (w2 - 1) / (1 + w2);
  }
  return g;
}

FieldRm cap_solution(const TriMesh& msh, double alpha) {
  const double t = std::tan(alpha / 2);
  return FieldRm::sample(msh, 3, [&](Vec2 p) {
    const double w2 = t * t * p.dot(p);
    return std::vector<double>{2 * t * p.x / (1 + w2), 2 * t * p.y / (1 + w2),
                               (w2 - 1) / (1 + w2)};
  });
}

double hausdorff_to_cap(const FieldRm& u, double alpha) {
  double d = 0;
  const double zcap = -std::cos(alpha);
  for (int i = 0; i < u.nv(); ++i) {
    const double x = u.at(i, 0), y = u.at(i, 1), z = u.at(i, 2);
    const double r = std::sqrt(x * x + y * y + z * z);
    double di;
    if (r < 1e-14) {
      di = 1.0;
    } else if (z / r <= zcap + 1e-15) {
      di = std::fabs(r - 1.0);
    } else {
      const double rho = std::hypot(x, y);
      di = std::hypot(rho - std::sin(alpha), z - zcap);
    }
    d = std::max(d, di);
  }
  return d;
}

SphereResiduals sphere_harmonic_residuals(FieldRm u) {
  const TriMesh& msh = *u.mesh;
  SphereResiduals out;
  for (int i = 0; i < u.nv(); ++i) {
    double n2 = 0;
    for (int k = 0; k < u.m; ++k) n2 += u.at(i, k) * u.at(i, k);
    const double n = std::sqrt(n2);
    out.renorm_warning = std::max(out.renorm_warning, std::fabs(n - 1.0));
    if (std::fabs(n - 1.0) > 1e-8) {
      if (n < 1e-12) throw std::invalid_argument("sphere_harmonic_residuals: zero vector");
      for (int k = 0; k < u.m; ++k) u.at(i, k) /= n;
    }
  }
  if (out.renorm_warning > 0.1)
    throw std::invalid_argument("sphere_harmonic_residuals: input too far from the sphere");

  mesh::TriGrad g = mesh::gradient_p1(u);
  std::vector<double> g2(std::size_t(msh.nt()), 0.0);
  for (int t = 0; t < msh.nt(); ++t) {
    double s = 0;
    for (int k = 0; k < u.m; ++k) s += g.gx(t, k) * g.gx(t, k) + g.gy(t, k) * g.gy(t, k);
    g2[std::size_t(t)] = s;
  }
  double eq2 = 0;
  for (int k = 0; k < u.m; ++k) {
    std::vector<mesh::Vec2> X(std::size_t(msh.nt()), mesh::Vec2{});
    for (int t = 0; t < msh.nt(); ++t) X[std::size_t(t)] = {g.gx(t, k), g.gy(t, k)};
    std::vector<double> r = mesh::weak_divergence(msh, X);
    std::vector<double> r2(std::size_t(msh.nv()), 0.0);
    for (int t = 0; t < msh.nt(); ++t) {
      const auto& tr = msh.triangles[std::size_t(t)];
      double cv[3] = {u.at(tr[0], k), u.at(tr[1], k), u.at(tr[2], k)};
      add_mass_weighted(msh, t, cv, g2[std::size_t(t)], r2);
    }
    for (int i = 0; i < msh.nv(); ++i) r[std::size_t(i)] += r2[std::size_t(i)];
    const double w = mesh::weak_l2_density(msh, r);
    eq2 += w * w;
  }
  out.eq = std::sqrt(eq2);

  double c2 = 0;
  for (int i = 0; i < u.m; ++i)
    for (int j = i + 1; j < u.m; ++j) {
      std::vector<mesh::Vec2> X(std::size_t(msh.nt()), mesh::Vec2{});
      for (int t = 0; t < msh.nt(); ++t) {
        const auto& tr = msh.triangles[std::size_t(t)];
        const double ui = (u.at(tr[0], i) + u.at(tr[1], i) + u.at(tr[2], i)) / 3.0;
        const double uj = (u.at(tr[0], j) + u.at(tr[1], j) + u.at(tr[2], j)) / 3.0;
        X[std::size_t(t)] = {ui * g.gx(t, j) - uj * g.gx(t, i),
                             ui * g.gy(t, j) - uj * g.gy(t, i)};
      }
      const double w = mesh::weak_l2_density(msh, mesh::weak_divergence(msh, X));
      c2 += w * w;
    }
  out.conservation = std::sqrt(c2);
  return out;
}

FlowResult harmonic_heat_flow(const FieldRm& u0, int steps, double dt) {
  if (dt <= 0) throw std::invalid_argument("harmonic_heat_flow: dt must be positive");
  const TriMesh& msh = *u0.mesh;
  mesh::PoissonSolver solver(msh);
  const mesh::Csr& K = solver.matrix();

  // interior index map
  std::vector<int> interior;
  for (int i = 0; i < msh.nv(); ++i)
    if (!msh.is_boundary[std::size_t(i)]) interior.push_back(i);
  const std::size_t ni = interior.size();

  FlowResult out;
  out.u = u0;
  out.energy_history.push_back(mesh::dirichlet_energy(out.u));
  double step = dt;
  for (int s = 0; s < steps; ++s) {
    FieldRm ustar = out.u;
    std::vector<double> full(std::size_t(msh.nv()), 0.0), Kfull(std::size_t(msh.nv()), 0.0);
    for (int k = 0; k < u0.m; ++k) {
      mesh::LinOp op = [&](const double* xin, double* y) {
        std::fill(full.begin(), full.end(), 0.0);
        for (std::size_t ii = 0; ii < ni; ++ii) full[std::size_t(interior[ii])] = xin[ii];
        K.spmv(full.data(), Kfull.data());
        for (std::size_t ii = 0; ii < ni; ++ii) {
          const int i = interior[ii];
          y[ii] = msh.vertex_area[std::size_t(i)] * full[std::size_t(i)] +
                  step * Kfull[std::size_t(i)];
        }
      };
      // rhs: M u - dt K (boundary lift)
      std::vector<double> bl(std::size_t(msh.nv()), 0.0);
      for (int i = 0; i < msh.nv(); ++i)
        bl[std::size_t(i)] = msh.is_boundary[std::size_t(i)] ? out.u.at(i, k) : 0.0;
      std::vector<double> Kbl(std::size_t(msh.nv()), 0.0);
      K.spmv(bl.data(), Kbl.data());
      std::vector<double> bi(ni), x0(ni);
      for (std::size_t ii = 0; ii < ni; ++ii) {
        const int i = interior[ii];
        bi[ii] = msh.vertex_area[std::size_t(i)] * out.u.at(i, k) - step * Kbl[std::size_t(i)];
        x0[ii] = out.u.at(i, k);
      }
      static thread_local std::vector<double> diag;
      diag.assign(ni, 0.0);
      {
        std::vector<double> e(ni, 0.0), Ae(ni, 0.0);
        // cheap diagonal estimate: lumped mass + dt * stiffness diagonal
        for (std::size_t ii = 0; ii < ni; ++ii) {
          const int i = interior[ii];
          double kd = 0;
          for (int kk = K.row_ptr[std::size_t(i)]; kk < K.row_ptr[std::size_t(i) + 1]; ++kk)
            if (K.col[std::size_t(kk)] == i) kd = K.val[std::size_t(kk)];
          diag[ii] = msh.vertex_area[std::size_t(i)] + step * kd;
        }
      }
      mesh::SolveResult rr = mesh::cg_solve(op, bi, &x0, 1e-13, 4000, &diag);
      for (std::size_t ii = 0; ii < ni; ++ii) ustar.at(interior[ii], k) = rr.x[ii];
    }
    for (int i = 0; i < msh.nv(); ++i) {
      double n2 = 0;
      for (int k = 0; k < u0.m; ++k) n2 += ustar.at(i, k) * ustar.at(i, k);
      const double n = std::sqrt(n2);
      if (n < 1e-12) throw std::runtime_error("harmonic_heat_flow: renormalization degenerate");
      for (int k = 0; k < u0.m; ++k) ustar.at(i, k) /= n;
    }
    const double e = mesh::dirichlet_energy(ustar);
    if (e <= out.energy_history.back() + 1e-13) {
      out.u = ustar;
      out.energy_history.push_back(e);
      ++out.accepted_steps;
    } else {
      step *= 0.5;  // reject and retry smaller
      if (step < 1e-8 * dt) break;
    }
  }
  return out;
}

FieldRm sphere_harmonic_gs(const FieldRm& u0, int max_sweeps, double tol) {
  const TriMesh& msh = *u0.mesh;
  mesh::PoissonSolver solver(msh);
  const mesh::Csr& K = solver.matrix();
  FieldRm u = u0;
  const int m = u.m;
  std::vector<double> acc(std::size_t(m), 0.0);
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    double change = 0;
    for (int i = 0; i < msh.nv(); ++i) {
      if (msh.is_boundary[std::size_t(i)]) continue;
      std::fill(acc.begin(), acc.end(), 0.0);
      for (int k = K.row_ptr[std::size_t(i)]; k < K.row_ptr[std::size_t(i) + 1]; ++k) {
        const int j = K.col[std::size_t(k)];
        if (j == i) continue;
        for (int c = 0; c < m; ++c) acc[std::size_t(c)] -= K.val[std::size_t(k)] * u.at(j, c);
      }
      double n2 = 0;
      for (double a : acc) n2 += a * a;
      const double n = std::sqrt(n2);
      if (n < 1e-300) continue;
      for (int c = 0; c < m; ++c) {
        const double nv = acc[std::size_t(c)] / n;
        change = std::max(change, std::fabs(nv - u.at(i, c)));
        u.at(i, c) = nv;
      }
    }
    if (change < tol) break;
  }
  return u;
}

FieldRm stereographic_map(const TriMesh& msh, double scale, int power) {
  return FieldRm::sample(msh, 3, [&](Vec2 p) {
    std::complex<double> w{p.x, p.y};
    std::complex<double> z = std::pow(w, power) * scale;
    const double r2 = std::norm(z);
    return std::vector<double>{2 * z.real() / (1 + r2), 2 * z.imag() / (1 + r2),
                               (r2 - 1) / (1 + r2)};
  });
}

double metric_harmonic_residual(const FieldRm& u, const MetricOnTarget& mt) {
  const TriMesh& msh = *u.mesh;
  const int m = u.m;
  if (mt.m != m) throw std::invalid_argument("metric_harmonic_residual: dimension mismatch");
  mesh::TriGrad g = mesh::gradient_p1(u);

  auto christoffel = [&](const std::vector<double>& z, std::vector<double>& gamma) {
    std::vector<double> gm(std::size_t(m) * std::size_t(m), 0.0);
    mt.g(z, gm);
    Eigen::MatrixXd G(m, m);
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) G(i, j) = gm[std::size_t(i) * std::size_t(m) + std::size_t(j)];
    Eigen::LLT<Eigen::MatrixXd> llt(G);
    if (llt.info() != Eigen::Success)
      throw std::invalid_argument("metric_harmonic_residual: metric not positive definite");
    Eigen::MatrixXd Gi = G.inverse();
    std::vector<double> dg(std::size_t(m) * std::size_t(m) * std::size_t(m), 0.0);
    if (!mt.dg || !mt.dg(z, dg)) {
      std::vector<double> zp = z, gp(std::size_t(m) * std::size_t(m), 0.0), gq = gp;
      for (int s = 0; s < m; ++s) {
        zp = z;
        zp[std::size_t(s)] += mt.fd_step;
        mt.g(zp, gp);
        zp[std::size_t(s)] -= 2 * mt.fd_step;
        mt.g(zp, gq);
        for (int k = 0; k < m; ++k)
          for (int l = 0; l < m; ++l)
            dg[(std::size_t(s) * std::size_t(m) + std::size_t(k)) * std::size_t(m) +
               std::size_t(l)] = (gp[std::size_t(k) * std::size_t(m) + std::size_t(l)] -
                                  gq[std::size_t(k) * std::size_t(m) + std::size_t(l)]) /
                                 (2 * mt.fd_step);
      }
    }
    gamma.assign(std::size_t(m) * std::size_t(m) * std::size_t(m), 0.0);
    auto dgat = [&](int s, int k, int l) {
      return dg[(std::size_t(s) * std::size_t(m) + std::size_t(k)) * std::size_t(m) +
                std::size_t(l)];
    };
    for (int i = 0; i < m; ++i)
      for (int k = 0; k < m; ++k)
        for (int l = 0; l < m; ++l) {
          double s = 0;
          for (int q = 0; q < m; ++q)
            s += Gi(i, q) * (dgat(l, k, q) + dgat(k, l, q) - dgat(q, k, l));
          gamma[(std::size_t(i) * std::size_t(m) + std::size_t(k)) * std::size_t(m) +
                std::size_t(l)] = 0.5 * s;
        }
  };

  double total2 = 0;
  std::vector<std::vector<double>> gam_tri(std::size_t(msh.nt()));
  par::for_each(msh.nt(), [&](std::int64_t t) {
    const auto& tr = msh.triangles[std::size_t(t)];
    std::vector<double> z(std::size_t(m), 0.0);
    for (int k = 0; k < m; ++k)
      z[std::size_t(k)] = (u.at(tr[0], k) + u.at(tr[1], k) + u.at(tr[2], k)) / 3.0;
    christoffel(z, gam_tri[std::size_t(t)]);
  });
  for (int i = 0; i < m; ++i) {
    std::vector<mesh::Vec2> X(std::size_t(msh.nt()), mesh::Vec2{});
    std::vector<double> f0(std::size_t(msh.nt()), 0.0);
    for (int t = 0; t < msh.nt(); ++t) {
      X[std::size_t(t)] = {g.gx(t, i), g.gy(t, i)};
      double s = 0;
      const auto& gam = gam_tri[std::size_t(t)];
      for (int k = 0; k < m; ++k)
        for (int l = 0; l < m; ++l)
          s += gam[(std::size_t(i) * std::size_t(m) + std::size_t(k)) * std::size_t(m) +
                   std::size_t(l)] *
               (g.gx(t, k) * g.gx(t, l) + g.gy(t, k) * g.gy(t, l));
      f0[std::size_t(t)] = s;
    }
    std::vector<double> r = mesh::weak_divergence(msh, X);
    std::vector<double> r0 = mesh::rhs_from_tri_density(msh, f0);
    for (int v = 0; v < msh.nv(); ++v) r[std::size_t(v)] += r0[std::size_t(v)];
    const double w = mesh::weak_l2_density(msh, r);
    total2 += w * w;
  }
  return std::sqrt(total2);
}

double OmegaField::l2_norm(const TriMesh& msh) const {
  double s = 0;
  for (int i = 0; i < nv; ++i) {
    double f = 0;
    for (int a = 0; a < m * m; ++a) {
      const double x1 = o1[std::size_t(i) * std::size_t(m) * std::size_t(m) + std::size_t(a)];
      const double x2 = o2[std::size_t(i) * std::size_t(m) * std::size_t(m) + std::size_t(a)];
      f += x1 * x1 + x2 * x2;
    }
    s += f * msh.vertex_area[std::size_t(i)];
  }
  return std::sqrt(s);
}

void OmegaField::check_antisymmetry() const {
  for (int i = 0; i < nv; ++i)
    for (int a = 0; a < m; ++a)
      for (int b = 0; b < m; ++b) {
        const std::size_t base = std::size_t(i) * std::size_t(m) * std::size_t(m);
        if (std::fabs(o1[base + std::size_t(a * m + b)] + o1[base + std::size_t(b * m + a)]) >
                1e-12 ||
            std::fabs(o2[base + std::size_t(a * m + b)] + o2[base + std::size_t(b * m + a)]) >
                1e-12)
          throw std::invalid_argument("OmegaField: potential is not antisymmetric");
      }
}

SchrodingerResult schrodinger_linear_solve(const OmegaField& omega, const FieldRm& bc, double gate,
                                           int max_iter, double tol) {
  const TriMesh& msh = *bc.mesh;
  const int m = bc.m;
  if (omega.m != m || omega.nv != msh.nv())
    throw std::invalid_argument("schrodinger_linear_solve: shape mismatch");
  omega.check_antisymmetry();
  if (omega.l2_norm(msh) >= gate)
    throw std::invalid_argument("schrodinger_linear_solve: potential above the smallness gate");

  mesh::PoissonSolver solver(msh);
  std::vector<double> zero(std::size_t(msh.nv()), 0.0);
  SchrodingerResult out;
  out.w = FieldRm(msh, m);
  for (int k = 0; k < m; ++k) {
    std::vector<double> gk(std::size_t(msh.nv()), 0.0);
    for (int i = 0; i < msh.nv(); ++i) gk[std::size_t(i)] = bc.at(i, k);
    mesh::SolveResult rk = solver.solve_dirichlet(zero, gk);
    for (int i = 0; i < msh.nv(); ++i) out.w.at(i, k) = rk.x[std::size_t(i)];
  }

  auto omega_rhs = [&](const FieldRm& wfield, int i) {
    std::vector<double> r(std::size_t(msh.nv()), 0.0);
    mesh::TriGrad g = mesh::gradient_p1(wfield);
    for (int t = 0; t < msh.nt(); ++t) {
      const auto& tr = msh.triangles[std::size_t(t)];
      for (int j = 0; j < m; ++j) {
        double cv[3];
        for (int c = 0; c < 3; ++c) {
          const std::size_t base =
              std::size_t(tr[std::size_t(c)]) * std::size_t(m) * std::size_t(m);
          cv[c] = omega.o1[base + std::size_t(i * m + j)] * g.gx(t, j) +
                  omega.o2[base + std::size_t(i * m + j)] * g.gy(t, j);
        }
        add_mass_weighted(msh, t, cv, 1.0, r);
      }
    }
    return r;
  };

  for (int it = 0; it < max_iter; ++it) {
    out.iterations = it + 1;
    FieldRm wnew(msh, m);
    for (int k = 0; k < m; ++k) {
      std::vector<double> rhs = omega_rhs(out.w, k);
      std::vector<double> gk(std::size_t(msh.nv()), 0.0);
      for (int i = 0; i < msh.nv(); ++i) gk[std::size_t(i)] = bc.at(i, k);
      mesh::SolveResult rk = solver.solve_dirichlet(rhs, gk);
      for (int i = 0; i < msh.nv(); ++i) wnew.at(i, k) = rk.x[std::size_t(i)];
    }
    double up2 = 0, sc2 = 0;
    for (std::size_t i = 0; i < wnew.v.size(); ++i) {
      const double d = wnew.v[i] - out.w.v[i];
      up2 += d * d;
      sc2 += wnew.v[i] * wnew.v[i];
    }
    out.w = wnew;
    if (std::sqrt(up2 / (sc2 + 1e-300)) < tol) {
      out.converged = true;
      break;
    }
  }

  {
    mesh::TriGrad g = mesh::gradient_p1(out.w);
    double t2 = 0;
    for (int k = 0; k < m; ++k) {
      std::vector<mesh::Vec2> X(std::size_t(msh.nt()), mesh::Vec2{});
      for (int t = 0; t < msh.nt(); ++t) X[std::size_t(t)] = {g.gx(t, k), g.gy(t, k)};
      std::vector<double> r = mesh::weak_divergence(msh, X);
      std::vector<double> rr = omega_rhs(out.w, k);
      for (int i = 0; i < msh.nv(); ++i) r[std::size_t(i)] += rr[std::size_t(i)];
      const double w = mesh::weak_l2_density(msh, r);
      t2 += w * w;
    }
    out.equation_residual = std::sqrt(t2);
  }
  {
    std::vector<double> radii;
    for (double r = 0.1; r <= 0.45; r += 0.05) radii.push_back(r);
    mesh::MorreyProfile prof = mesh::morrey_profile(out.w, {0, 0}, radii);
    out.morrey_alpha = prof.alpha;
  }
  return out;
}

}  // namespace conflab::comp
