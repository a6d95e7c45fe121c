#include "conflab/plateau/plateau.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "conflab/mesh/fem.hpp"
#include "conflab/mesh/norms.hpp"

namespace conflab::plateau {

namespace {
constexpr double kPi = std::numbers::pi;

double wrap2pi(double t) {
  t = std::fmod(t, 2 * kPi);
  if (t < 0) t += 2 * kPi;
  return t;
}
}  // namespace

BoundaryParam BoundaryParam::identity(const TriMesh& mesh, const std::array<double, 3>& anchors) {
  BoundaryParam bp;
  const int nb = int(mesh.boundary_loop.size());
  bp.tau.resize(std::size_t(nb));
  for (int j = 0; j < nb; ++j) {
    const mesh::Vec2 p = mesh.vertices[std::size_t(mesh.boundary_loop[std::size_t(j)])];
    bp.tau[std::size_t(j)] = wrap2pi(std::atan2(p.y, p.x));
  }
  // anchors: boundary vertices nearest to the cube roots of unity
  for (int k = 0; k < 3; ++k) {
    const double target = 2 * kPi * k / 3;
    int best = 0;
    double bestd = 1e300;
    for (int j = 0; j < nb; ++j) {
      const double d = std::fabs(wrap2pi(bp.tau[std::size_t(j)] - target + kPi) - kPi);
      if (d < bestd) {
        bestd = d;
        best = j;
      }
    }
    bp.anchor_pos[std::size_t(k)] = best;
    bp.anchor_tau[std::size_t(k)] = anchors[std::size_t(k)];
  }
  for (int k = 0; k < 3; ++k) bp.tau[std::size_t(bp.anchor_pos[std::size_t(k)])] = bp.anchor_tau[std::size_t(k)];
  bp.project();
  return bp;
}

void BoundaryParam::project(double eps_delta) {
  const int nb = int(tau.size());
  // process each cyclic anchor segment: increments clipped then rescaled so
  // the segment ends exactly at the next anchor value
  std::array<int, 3> ord = anchor_pos;
  std::sort(ord.begin(), ord.end());
  for (int s = 0; s < 3; ++s) {
    const int a = ord[std::size_t(s)];
    const int b = ord[std::size_t((s + 1) % 3)];
    const int len = (b - a + nb) % nb;
    if (len < 2) {
      if (len == 0) throw std::runtime_error("BoundaryParam: coincident anchors");
      continue;
    }
    // target span between the two anchor tau values
    double ta = tau[std::size_t(a)], tb = tau[std::size_t(b)];
    double span = wrap2pi(tb - ta);
    if (span < len * eps_delta) span = len * eps_delta;
    std::vector<double> inc(std::size_t(len), 0.0);
    double prev = ta;
    double sum = 0;
    for (int q = 1; q <= len; ++q) {
      const int j = (a + q) % nb;
      const double tj = q == len ? ta + span : ta + wrap2pi(tau[std::size_t(j)] - ta);
      double d = tj - prev;
      if (d < eps_delta) d = eps_delta;
      inc[std::size_t(q - 1)] = d;
      prev = tj;
      sum += d;
    }
    const double scale = span / sum;
    double acc = ta;
    for (int q = 1; q < len; ++q) {
      acc += inc[std::size_t(q - 1)] * scale;
      tau[std::size_t((a + q) % nb)] = wrap2pi(acc);
    }
  }
  for (int k = 0; k < 3; ++k) tau[std::size_t(anchor_pos[std::size_t(k)])] = wrap2pi(anchor_tau[std::size_t(k)]);
}

bool BoundaryParam::monotone(double tol) const {
  const int nb = int(tau.size());
  // total winding must be one full turn with nonnegative increments
  double total = 0;
  for (int j = 0; j < nb; ++j) {
    const double d = wrap2pi(tau[std::size_t((j + 1) % nb)] - tau[std::size_t(j)]);
    if (d > kPi) return false;  // a backward step shows up as a near-2pi jump
    total += d;
    if (d < -tol) return false;
  }
  return std::fabs(total - 2 * kPi) < 1e-6;
}

FieldRm harmonic_extension(const JordanCurve& curve, const BoundaryParam& bp, const TriMesh& mesh,
                           const mesh::PoissonSolver* solver) {
  return harmonic_extension_warm(curve, bp, mesh, solver, nullptr);
}

FieldRm harmonic_extension_warm(const JordanCurve& curve, const BoundaryParam& bp,
                                const TriMesh& mesh, const mesh::PoissonSolver* solver,
                                const FieldRm* warm) {
  std::unique_ptr<mesh::PoissonSolver> local;
  if (!solver) {
    local = std::make_unique<mesh::PoissonSolver>(mesh);
    solver = local.get();
  }
  const int nb = int(mesh.boundary_loop.size());
  FieldRm u(mesh, curve.m);
  std::vector<double> zero(std::size_t(mesh.nv()), 0.0);
  std::vector<std::vector<double>> g(std::size_t(curve.m),
                                     std::vector<double>(std::size_t(mesh.nv()), 0.0));
  for (int j = 0; j < nb; ++j) {
    auto pos = curve.at(bp.tau[std::size_t(j)]);
    for (int k = 0; k < curve.m; ++k)
      g[std::size_t(k)][std::size_t(mesh.boundary_loop[std::size_t(j)])] = pos[std::size_t(k)];
  }
  std::vector<double> w0(std::size_t(mesh.nv()), 0.0);
  for (int k = 0; k < curve.m; ++k) {
    if (warm)
      for (int i = 0; i < mesh.nv(); ++i) w0[std::size_t(i)] = warm->at(i, k);
    mesh::SolveResult r = solver->solve_dirichlet(zero, g[std::size_t(k)], warm ? &w0 : nullptr);
    for (int i = 0; i < mesh.nv(); ++i) u.at(i, k) = r.x[std::size_t(i)];
  }
  return u;
}

MoebiusParams three_point_normalize(const std::array<std::complex<double>, 3>& P) {
  using cplx = std::complex<double>;
  for (int k = 0; k < 3; ++k) {
    if (std::abs(std::abs(P[std::size_t(k)]) - 1.0) > 1e-9)
      throw std::invalid_argument("three_point_normalize: points must lie on the unit circle");
    for (int l = k + 1; l < 3; ++l)
      if (std::abs(P[std::size_t(k)] - P[std::size_t(l)]) < 1e-12)
        throw std::invalid_argument("three_point_normalize: points must be distinct");
  }
  // trigonometric order
  const double a0 = std::arg(P[0]);
  const double d1 = wrap2pi(std::arg(P[1]) - a0), d2 = wrap2pi(std::arg(P[2]) - a0);
  if (!(d1 < d2)) throw std::invalid_argument("three_point_normalize: points not in trigonometric order");

  MoebiusParams mp;
  mp.theta = std::arg(P[0]);
  auto residual = [&](double th, cplx a, double* out) {
    for (int k = 0; k < 3; ++k) {
      const cplx w = std::exp(cplx(0, 2 * kPi * k / 3.0));
      const cplx f = std::exp(cplx(0, th)) * (w - a) / (1.0 - std::conj(a) * w);
      double d = std::arg(f * std::conj(P[std::size_t(k)]));
      out[k] = d;
    }
  };
  double r[3];
  for (int it = 0; it < 100; ++it) {
    mp.iterations = it;
    residual(mp.theta, mp.a, r);
    mp.residual = std::sqrt(r[0] * r[0] + r[1] * r[1] + r[2] * r[2]);
    if (mp.residual < 1e-13) break;
    // numeric jacobian over (theta, Re a, Im a)
    const double h = 1e-7;
    double J[3][3], rp[3];
    residual(mp.theta + h, mp.a, rp);
    for (int k = 0; k < 3; ++k) J[k][0] = (rp[k] - r[k]) / h;
    residual(mp.theta, mp.a + cplx(h, 0), rp);
    for (int k = 0; k < 3; ++k) J[k][1] = (rp[k] - r[k]) / h;
    residual(mp.theta, mp.a + cplx(0, h), rp);
    for (int k = 0; k < 3; ++k) J[k][2] = (rp[k] - r[k]) / h;
    // solve J dx = -r (3x3 gaussian elimination with partial pivoting)
    double M[3][4];
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) M[i][j] = J[i][j];
      M[i][3] = -r[i];
    }
    for (int c = 0; c < 3; ++c) {
      int piv = c;
      for (int i = c + 1; i < 3; ++i)
        if (std::fabs(M[i][c]) > std::fabs(M[piv][c])) piv = i;
      for (int j = 0; j < 4; ++j) std::swap(M[c][j], M[piv][j]);
      if (std::fabs(M[c][c]) < 1e-14) throw std::runtime_error("three_point_normalize: singular jacobian");
      for (int i = 0; i < 3; ++i) {
        if (i == c) continue;
        const double wq = M[i][c] / M[c][c];
        for (int j = c; j < 4; ++j) M[i][j] -= wq * M[c][j];
      }
    }
    double dx[3];
    for (int i = 0; i < 3; ++i) dx[i] = M[i][3] / M[i][i];
    // damped update keeping a inside the disc
    double step = 1.0;
    for (int bt = 0; bt < 30; ++bt) {
      const double th_n = mp.theta + step * dx[0];
      const cplx a_n = mp.a + cplx(step * dx[1], step * dx[2]);
      if (std::abs(a_n) < 0.999) {
        double rn[3];
        residual(th_n, a_n, rn);
        const double nn = std::sqrt(rn[0] * rn[0] + rn[1] * rn[1] + rn[2] * rn[2]);
        if (nn < mp.residual) {
          mp.theta = th_n;
          mp.a = a_n;
          break;
        }
      }
      step *= 0.5;
    }
  }
  mp.theta = wrap2pi(mp.theta);
  return mp;
}

double hopf_l1(const FieldRm& u) {
  const TriMesh& msh = *u.mesh;
  mesh::HopfField h = mesh::hopf_differential(u);
  double s = 0;
  for (int t = 0; t < msh.nt(); ++t)
    s += std::hypot(h.re[std::size_t(t)], h.im[std::size_t(t)]) * msh.tri_area[std::size_t(t)];
  return s;
}

double stationarity_defect(const FieldRm& u) {
  const TriMesh& msh = *u.mesh;
  mesh::TriGrad g = mesh::gradient_p1(u);
  std::vector<mesh::Vec2> X1(std::size_t(msh.nt()), mesh::Vec2{});
  std::vector<mesh::Vec2> X2(std::size_t(msh.nt()), mesh::Vec2{});
  for (int t = 0; t < msh.nt(); ++t) {
    double xx = 0, yy = 0, xy = 0;
    for (int k = 0; k < u.m; ++k) {
      xx += g.gx(t, k) * g.gx(t, k);
      yy += g.gy(t, k) * g.gy(t, k);
      xy += g.gx(t, k) * g.gy(t, k);
    }
    const double a = xx - yy, b = 2 * xy;
    X1[std::size_t(t)] = {a, b};
    X2[std::size_t(t)] = {b, -a};
  }
  const auto r1 = mesh::weak_divergence(msh, X1);
  const auto r2 = mesh::weak_divergence(msh, X2);
  return mesh::weak_l1(msh, r1) + mesh::weak_l1(msh, r2);
}

double courant_slice_energy(const FieldRm& u, mesh::Vec2 p, double rho, int n_quad) {
  const TriMesh& msh = *u.mesh;
  mesh::TriGrad g = mesh::gradient_p1(u);
  double s = 0;
  for (int k = 0; k < n_quad; ++k) {
    const double th = 2 * kPi * k / n_quad;
    const mesh::Vec2 q{p.x + rho * std::cos(th), p.y + rho * std::sin(th)};
    const int t = msh.locate(q);
    if (t < 0) continue;  // arc leaves the disc
    double e = 0;
    for (int c = 0; c < u.m; ++c) e += g.gx(t, c) * g.gx(t, c) + g.gy(t, c) * g.gy(t, c);
    s += e * rho * 2 * kPi / n_quad;
  }
  return s;
}

std::vector<int> branch_point_candidates(const FieldRm& u) {
  const TriMesh& msh = *u.mesh;
  mesh::TriGrad g = mesh::gradient_p1(u);
  std::vector<double> dens(std::size_t(msh.nt()), 0.0);
  double mean = 0;
  for (int t = 0; t < msh.nt(); ++t) {
    double e = 0;
    for (int k = 0; k < u.m; ++k) e += g.gx(t, k) * g.gx(t, k) + g.gy(t, k) * g.gy(t, k);
    dens[std::size_t(t)] = e;
    mean += e * msh.tri_area[std::size_t(t)];
  }
  mean /= msh.total_area;
  std::vector<int> out;
  if (mean < 1e-300) {  // identically degenerate map
    out.resize(std::size_t(msh.nt()));
    for (int t = 0; t < msh.nt(); ++t) out[std::size_t(t)] = t;
    return out;
  }
  for (int t = 0; t < msh.nt(); ++t)
    if (dens[std::size_t(t)] < 1e-8 * mean) out.push_back(t);
  return out;
}

PlateauResult douglas_rado_solve(const JordanCurve& curve, const TriMesh& mesh,
                                 const PlateauOptions& opts, const BoundaryParam* init) {
  if (mesh.boundary_loop.empty()) throw std::invalid_argument("douglas_rado_solve: disc mesh required");
  mesh::PoissonSolver solver(mesh);
  const int nb = int(mesh.boundary_loop.size());

  BoundaryParam bp = init ? *init : BoundaryParam::identity(mesh, {0.0, 2 * kPi / 3, 4 * kPi / 3});
  bp.project(opts.eps_delta);

  PlateauResult res;
  res.u = harmonic_extension(curve, bp, mesh, &solver);
  double E = mesh::dirichlet_energy(res.u);

  const mesh::Csr& K = solver.matrix();
  auto boundary_gradient = [&](const FieldRm& u, std::vector<double>& grad) {
    // dE/dtau_j = (K u)_j . gamma'(tau_j)
    grad.assign(std::size_t(nb), 0.0);
    std::vector<double> Ku(std::size_t(mesh.nv()), 0.0), col(std::size_t(mesh.nv()), 0.0);
    for (int k = 0; k < u.m; ++k) {
      for (int i = 0; i < mesh.nv(); ++i) col[std::size_t(i)] = u.at(i, k);
      K.spmv(col.data(), Ku.data());
      for (int j = 0; j < nb; ++j) {
        const int v = mesh.boundary_loop[std::size_t(j)];
        const auto tang = curve.tangent(bp.tau[std::size_t(j)]);
        grad[std::size_t(j)] += Ku[std::size_t(v)] * tang[std::size_t(k)];
      }
    }
    for (int k = 0; k < 3; ++k) grad[std::size_t(bp.anchor_pos[std::size_t(k)])] = 0.0;
  };

  res.history.push_back({0, E, mesh::area_functional(res.u), hopf_l1(res.u)});
  double step = 0.5;
  for (int sweep = 1; sweep <= opts.max_sweeps; ++sweep) {
    const double E_before = E;
    for (int inner = 0; inner < opts.inner_steps; ++inner) {
      std::vector<double> grad;
      boundary_gradient(res.u, grad);
      double g2 = 0;
      for (double v : grad) g2 += v * v;
      if (g2 < 1e-24) break;
      bool accepted = false;
      for (int bt = 0; bt < 25; ++bt) {
        BoundaryParam trial = bp;
        for (int j = 0; j < nb; ++j) trial.tau[std::size_t(j)] -= step * grad[std::size_t(j)];
        trial.project(opts.eps_delta);
        FieldRm ut = harmonic_extension_warm(curve, trial, mesh, &solver, &res.u);
        const double Et = mesh::dirichlet_energy(ut);
        if (Et <= E - opts.armijo * step * g2) {
          bp = trial;
          res.u = std::move(ut);
          E = Et;
          accepted = true;
          step = std::min(step * 1.6, 8.0);
          break;
        }
        step *= 0.5;
      }
      if (!accepted) break;
    }
    res.history.push_back({sweep, E, mesh::area_functional(res.u), hopf_l1(res.u)});
    if (E_before - E < opts.tol_e * (1.0 + std::fabs(E_before))) break;
  }

  res.bp = bp;
  res.E = E;
  res.A = mesh::area_functional(res.u);
  res.hopf_l1 = hopf_l1(res.u);
  for (std::size_t i = 1; i < res.history.size(); ++i)
    if (res.history[i].E > res.history[i - 1].E + 1e-12) res.monotone_history = false;
  return res;
}

}  // namespace conflab::plateau
