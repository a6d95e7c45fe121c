#include "conflab/isothermal/isothermal.hpp"

#include <cmath>
#include <stdexcept>

#include "conflab/core/parallel.hpp"
#include "conflab/mesh/fem.hpp"
#include "conflab/mesh/norms.hpp"

namespace conflab::iso {

using wil::Chart;
using wil::Geom;
using wil::geom_at;
using wil::jdx;
using wil::jdy;

namespace {

// per-triangle metric-weighted coefficient A = sqrt(det g) g^{-1} (det A = 1)
std::vector<std::array<double, 3>> metric_coeff(const Chart& chart, const TriMesh& mesh) {
  std::vector<std::array<double, 3>> A(std::size_t(mesh.nt()));
  par::for_each(mesh.nt(), [&](std::int64_t t) {
    const Vec2 c = mesh.centroid(int(t));
    Geom g = geom_at(chart, c.x, c.y);
    const double det = g.detg.value();
    const double s = std::sqrt(det);
    A[std::size_t(t)] = {g.g22.value() / s, -g.g12.value() / s, g.g11.value() / s};
  });
  return A;
}

struct FramePoint {
  std::vector<double> e1, e2;  // Gram-Schmidt frame values
};
FramePoint gs_frame(const Chart& chart, double x, double y) {
  Geom g = geom_at(chart, x, y);
  FramePoint f;
  f.e1.resize(std::size_t(g.m));
  f.e2.resize(std::size_t(g.m));
  for (int k = 0; k < g.m; ++k) {
    f.e1[std::size_t(k)] = g.e1[std::size_t(k)].value();
    f.e2[std::size_t(k)] = g.e2[std::size_t(k)].value();
  }
  return f;
}

}  // namespace

FrameField coulomb_frame(const Chart& chart, const TriMesh& mesh,
                         std::function<double(Vec2)> initial_gauge) {
  const int m = chart.m, nt = mesh.nt(), nv = mesh.nv();
  // optional starting rotation as a P1 field (the discrete gauge group)
  FieldRm th0(mesh, 1);
  if (initial_gauge)
    for (int i = 0; i < nv; ++i) th0.at(i, 0) = initial_gauge(mesh.vertices[std::size_t(i)]);
  mesh::TriGrad gth0 = mesh::gradient_p1(th0);
  // connection of the (pre-rotated) Gram-Schmidt frame
  std::vector<Vec2> alpha(std::size_t(nt), Vec2{});
  par::for_each(nt, [&](std::int64_t t) {
    const Vec2 c = mesh.centroid(int(t));
    Geom g = geom_at(chart, c.x, c.y);
    double a1 = 0, a2 = 0;
    for (int k = 0; k < m; ++k) {
      a1 += g.e1[std::size_t(k)].value() * jdx(g.e2[std::size_t(k)]).value();
      a2 += g.e1[std::size_t(k)].value() * jdy(g.e2[std::size_t(k)]).value();
    }
    if (initial_gauge) {
      a1 += gth0.gx(int(t), 0);
      a2 += gth0.gy(int(t), 0);
    }
    alpha[std::size_t(t)] = {a1, a2};
  });

  // theta minimizes int |d theta + alpha|^2_g dvol_g (convex, natural BC)
  auto A = metric_coeff(chart, mesh);
  mesh::PoissonSolver solver(mesh, &A);
  std::vector<double> b(std::size_t(nv), 0.0);
  for (int t = 0; t < nt; ++t) {
    const auto& co = A[std::size_t(t)];
    const Vec2 Aa{co[0] * alpha[std::size_t(t)].x + co[1] * alpha[std::size_t(t)].y,
                  co[1] * alpha[std::size_t(t)].x + co[2] * alpha[std::size_t(t)].y};
    for (int c = 0; c < 3; ++c)
      b[std::size_t(mesh.triangles[std::size_t(t)][std::size_t(c)])] -=
          Aa.dot(mesh.grad_hat[std::size_t(t)][std::size_t(c)]) * mesh.tri_area[std::size_t(t)];
  }
  mesh::SolveResult th = solver.solve_neumann(b);

  FrameField fr;
  fr.theta = FieldRm(mesh, 1);
  fr.theta.v = th.x;
  fr.f1 = FieldRm(mesh, m);
  fr.f2 = FieldRm(mesh, m);
  for (int i = 0; i < nv; ++i) {
    FramePoint base = gs_frame(chart, mesh.vertices[std::size_t(i)].x, mesh.vertices[std::size_t(i)].y);
    double tot = th.x[std::size_t(i)];
    if (initial_gauge) tot += th0.at(i, 0);
    const double ct = std::cos(tot), st = std::sin(tot);
    for (int k = 0; k < m; ++k) {
      fr.f1.at(i, k) = ct * base.e1[std::size_t(k)] - st * base.e2[std::size_t(k)];
      fr.f2.at(i, k) = st * base.e1[std::size_t(k)] + ct * base.e2[std::size_t(k)];
    }
  }
  // rotated connection and residual defect
  mesh::FieldRm thf = fr.theta;
  mesh::TriGrad gth = mesh::gradient_p1(thf);
  fr.conn_tri.assign(std::size_t(nt), Vec2{});
  std::vector<double> r(std::size_t(nv), 0.0);
  for (int t = 0; t < nt; ++t) {
    const Vec2 conn{alpha[std::size_t(t)].x + gth.gx(t, 0), alpha[std::size_t(t)].y + gth.gy(t, 0)};
    fr.conn_tri[std::size_t(t)] = conn;
    const auto& co = A[std::size_t(t)];
    const Vec2 Ac{co[0] * conn.x + co[1] * conn.y, co[1] * conn.x + co[2] * conn.y};
    for (int c = 0; c < 3; ++c)
      r[std::size_t(mesh.triangles[std::size_t(t)][std::size_t(c)])] +=
          Ac.dot(mesh.grad_hat[std::size_t(t)][std::size_t(c)]) * mesh.tri_area[std::size_t(t)];
  }
  fr.coulomb_defect = mesh::weak_l2_density(mesh, r, /*interior_only=*/false);
  return fr;
}

ConformalFactor conformal_factor(const Chart& chart, const TriMesh& mesh, const FrameField& frame) {
  const int nt = mesh.nt(), nv = mesh.nv();
  auto A = metric_coeff(chart, mesh);
  mesh::PoissonSolver solver(mesh, &A);

  // RHS 2-form density <d f1 ^ d f2> from the P1 frame fields
  mesh::TriGrad g1 = mesh::gradient_p1(frame.f1);
  mesh::TriGrad g2 = mesh::gradient_p1(frame.f2);
  std::vector<double> J(std::size_t(nt), 0.0);
  for (int t = 0; t < nt; ++t) {
    double s = 0;
    for (int k = 0; k < frame.f1.m; ++k)
      s += g1.gx(t, k) * g2.gy(t, k) - g1.gy(t, k) * g2.gx(t, k);
    J[std::size_t(t)] = s;
  }
  ConformalFactor cf;
  cf.lambda = FieldRm(mesh, 1);
  mesh::SolveResult res = solver.solve_dirichlet0(mesh::rhs_from_tri_density(mesh, J));
  cf.lambda.v = res.x;

  // liouville defect: div(A grad lambda) + K sqrt(det g) against test functions
  std::vector<double> kg(std::size_t(nt), 0.0);
  par::for_each(nt, [&](std::int64_t t) {
    const Vec2 c = mesh.centroid(int(t));
    Geom g = geom_at(chart, c.x, c.y);
    kg[std::size_t(t)] = g.K.value() * std::sqrt(g.detg.value());
  });
  mesh::TriGrad gl = mesh::gradient_p1(cf.lambda);
  std::vector<double> r(std::size_t(nv), 0.0);
  for (int t = 0; t < nt; ++t) {
    const auto& co = A[std::size_t(t)];
    const Vec2 Al{co[0] * gl.gx(t, 0) + co[1] * gl.gy(t, 0),
                  co[1] * gl.gx(t, 0) + co[2] * gl.gy(t, 0)};
    for (int c = 0; c < 3; ++c)
      r[std::size_t(mesh.triangles[std::size_t(t)][std::size_t(c)])] -=
          Al.dot(mesh.grad_hat[std::size_t(t)][std::size_t(c)]) * mesh.tri_area[std::size_t(t)];
  }
  std::vector<double> r0 = mesh::rhs_from_tri_density(mesh, kg);
  for (int i = 0; i < nv; ++i) r[std::size_t(i)] += r0[std::size_t(i)];
  cf.liouville_defect = mesh::weak_l2_density(mesh, r);
  return cf;
}

IsothermalCoords build_isothermal_coords(const Chart& chart, const TriMesh& mesh,
                                         const FrameField& frame, const ConformalFactor& cf) {
  const int m = chart.m, nt = mesh.nt();
  IsothermalCoords out;
  out.phi = FieldRm(mesh, 2);

  // coframe coefficients per triangle: f_i^* = rows of E^{-1}, E[k][i] = e_i^k
  std::vector<Vec2> w1(std::size_t(nt), Vec2{}), w2(std::size_t(nt), Vec2{});
  for (int t = 0; t < nt; ++t) {
    const Vec2 c = mesh.centroid(t);
    Geom g = geom_at(chart, c.x, c.y);
    const double det = g.detg.value();
    const double gi11 = g.g22.value() / det, gi12 = -g.g12.value() / det, gi22 = g.g11.value() / det;
    const auto& tr = mesh.triangles[std::size_t(t)];
    // frame at the centroid: analytic Gram-Schmidt base rotated by the P1 theta
    const double thm = (frame.theta.at(tr[0], 0) + frame.theta.at(tr[1], 0) +
                        frame.theta.at(tr[2], 0)) / 3.0;
    const double ct = std::cos(thm), st = std::sin(thm);
    double E[2][2] = {{0, 0}, {0, 0}};  // E[k][i] = e_i^k
    for (int i = 0; i < 2; ++i) {
      double fdp1 = 0, fdp2 = 0;  // <f_i, d_j Phi>
      for (int k = 0; k < m; ++k) {
        const double b1 = g.e1[std::size_t(k)].value(), b2 = g.e2[std::size_t(k)].value();
        const double fk = i == 0 ? ct * b1 - st * b2 : st * b1 + ct * b2;
        fdp1 += fk * g.phix[std::size_t(k)].value();
        fdp2 += fk * g.phiy[std::size_t(k)].value();
      }
      E[0][i] = gi11 * fdp1 + gi12 * fdp2;
      E[1][i] = gi12 * fdp1 + gi22 * fdp2;
    }
    const double dE = E[0][0] * E[1][1] - E[0][1] * E[1][0];
    // coframe rows: f_i^*(d_k) = (E^{-1})_{ik}
    const double I00 = E[1][1] / dE, I01 = -E[0][1] / dE, I10 = -E[1][0] / dE, I11 = E[0][0] / dE;
    const double el = std::exp(-(cf.lambda.at(tr[0], 0) + cf.lambda.at(tr[1], 0) +
                                 cf.lambda.at(tr[2], 0)) / 3.0);
    w1[std::size_t(t)] = {el * I00, el * I01};
    w2[std::size_t(t)] = {el * I10, el * I11};
  }

  mesh::PoissonSolver solver(mesh);
  double m1 = 0, m2 = 0;
  {
    std::vector<double> b(std::size_t(mesh.nv()), 0.0);
    auto recover = [&](const std::vector<Vec2>& w, double* misfit) {
      std::fill(b.begin(), b.end(), 0.0);
      for (int t = 0; t < nt; ++t)
        for (int c = 0; c < 3; ++c)
          b[std::size_t(mesh.triangles[std::size_t(t)][std::size_t(c)])] +=
              w[std::size_t(t)].dot(mesh.grad_hat[std::size_t(t)][std::size_t(c)]) *
              mesh.tri_area[std::size_t(t)];
      mesh::SolveResult res = solver.solve_neumann(b);
      FieldRm p(mesh, 1);
      p.v = res.x;
      mesh::TriGrad gp = mesh::gradient_p1(p);
      double s = 0;
      for (int t = 0; t < nt; ++t) {
        const double dx = gp.gx(t, 0) - w[std::size_t(t)].x;
        const double dy = gp.gy(t, 0) - w[std::size_t(t)].y;
        s += (dx * dx + dy * dy) * mesh.tri_area[std::size_t(t)];
      }
      *misfit = std::sqrt(s);
      return res.x;
    };
    auto p1 = recover(w1, &m1);
    auto p2 = recover(w2, &m2);
    for (int i = 0; i < mesh.nv(); ++i) {
      out.phi.at(i, 0) = p1[std::size_t(i)];
      out.phi.at(i, 1) = p2[std::size_t(i)];
    }
  }
  out.closedness_defect = std::hypot(m1, m2);

  // conformality of Phi o phi^{-1}: pull the metric back through J = grad phi
  mesh::TriGrad gp = mesh::gradient_p1(out.phi);
  double defect = 0;
  bool jac_pos = true;
  for (int t = 0; t < nt; ++t) {
    const Vec2 c = mesh.centroid(t);
    Geom g = geom_at(chart, c.x, c.y);
    const double j11 = gp.gx(t, 0), j12 = gp.gy(t, 0), j21 = gp.gx(t, 1), j22 = gp.gy(t, 1);
    const double dJ = j11 * j22 - j12 * j21;
    if (dJ <= 0) { jac_pos = false; continue; }
    // Jinv
    const double i11 = j22 / dJ, i12 = -j12 / dJ, i21 = -j21 / dJ, i22 = j11 / dJ;
    // G = Jinv^T g Jinv
    const double a = g.g11.value(), bq = g.g12.value(), d = g.g22.value();
    const double G11 = i11 * (a * i11 + bq * i21) + i21 * (bq * i11 + d * i21);
    const double G12 = i11 * (a * i12 + bq * i22) + i21 * (bq * i12 + d * i22);
    const double G22 = i12 * (a * i12 + bq * i22) + i22 * (bq * i12 + d * i22);
    const double tr2 = 0.5 * (G11 + G22);
    defect = std::max(defect, std::max(std::fabs(G12), std::fabs(G11 - G22)) / tr2);
  }
  out.conformality_defect = defect;
  out.jacobian_positive = jac_pos;
  if (!jac_pos) throw std::runtime_error("build_isothermal_coords: fold detected (negative jacobian)");
  return out;
}

IsothermalCoords isothermal_pipeline(const Chart& chart, const TriMesh& mesh, FrameField* frame_out,
                                     ConformalFactor* cf_out) {
  FrameField fr = coulomb_frame(chart, mesh);
  ConformalFactor cf = conformal_factor(chart, mesh, fr);
  IsothermalCoords out = build_isothermal_coords(chart, mesh, fr, cf);
  if (frame_out) *frame_out = fr;
  if (cf_out) *cf_out = cf;
  return out;
}

FactorEstimateReport factor_estimates_check(
    const std::vector<std::pair<std::string, wil::Chart>>& family, double rho, int level) {
  FactorEstimateReport rep;
  TriMesh mesh = mesh::build_disc_mesh(level);
  for (const auto& [name, chart] : family) {
    FactorEstimateRow row;
    row.name = name;
    double area = 0, gn = 0, sup_el = 0, lam_min = 1e300, lam_max = -1e300;
    for (int t = 0; t < mesh.nt(); ++t) {
      const Vec2 c = mesh.centroid(t);
      Geom g = geom_at(chart, c.x, c.y);
      if (!g.conformal) throw std::invalid_argument("factor_estimates_check: conformal charts only");
      const double dv = std::sqrt(g.detg.value());
      area += dv * mesh.tri_area[std::size_t(t)];
      wil::JetMV n1 = g.n, n2 = g.n;
      for (auto& cj : n1.c) cj = jdx(cj);
      for (auto& cj : n2.c) cj = jdy(cj);
      double s = 0;
      for (std::size_t A = 0; A < n1.c.size(); ++A)
        s += n1.c[A].value() * n1.c[A].value() + n2.c[A].value() * n2.c[A].value();
      gn += s * mesh.tri_area[std::size_t(t)];
      if (c.norm() < rho) {
        const double lam = 0.5 * std::log(g.g11.value());
        sup_el = std::max(sup_el, std::exp(lam));
        lam_min = std::min(lam_min, lam);
        lam_max = std::max(lam_max, lam);
      }
    }
    row.grad_n_energy = gn;
    row.hypothesis_ok = gn < 8.0 * std::numbers::pi / 3.0;
    row.area = area;
    row.sup_elam = sup_el;
    // boundary gauge for lambda: the estimate controls lambda up to the
    // chart scale; gauge by the boundary mean as in the construction
    double lam_b = 0;
    for (int bidx : mesh.boundary_loop) {
      const Vec2 p = mesh.vertices[std::size_t(bidx)];
      Geom g = geom_at(chart, p.x, p.y);
      lam_b += 0.5 * std::log(g.g11.value());
    }
    lam_b /= double(mesh.boundary_loop.size());
    row.lam_linf = std::max(std::fabs(lam_max - lam_b), std::fabs(lam_min - lam_b));
    // two-point distortion term with p1 = 0, p2 = (1/2, 0)
    Geom ga = geom_at(chart, 0.0, 0.0);
    Geom gb = geom_at(chart, 0.5, 0.0);
    double d2 = 0;
    for (int k = 0; k < chart.m; ++k) {
      const double dd = ga.phi[std::size_t(k)].value() - gb.phi[std::size_t(k)].value();
      d2 += dd * dd;
    }
    row.log_dist_term = std::fabs(std::log(std::sqrt(d2) / 0.5));
    if (row.hypothesis_ok) {
      row.c135 = row.sup_elam / (std::sqrt(row.area) * std::exp(row.grad_n_energy));
      row.c136 = row.lam_linf /
                 (row.grad_n_energy + row.log_dist_term + std::max(0.0, std::log(row.area)) + 1e-12);
      rep.c135 = std::max(rep.c135, row.c135);
      rep.c136 = std::max(rep.c136, row.c136);
    }
    rep.rows.push_back(row);
  }
  return rep;
}

LiftingNorms coulomb_lifting_norms(const wil::Chart& chart, const TriMesh& mesh,
                                   const FrameField& frame) {
  LiftingNorms out;
  const int nt = mesh.nt();
  std::vector<double> conn_abs(std::size_t(nt), 0.0), ge_abs(std::size_t(nt), 0.0);
  double gn2 = 0;
  mesh::TriGrad g1 = mesh::gradient_p1(frame.f1);
  mesh::TriGrad g2 = mesh::gradient_p1(frame.f2);
  for (int t = 0; t < nt; ++t) {
    conn_abs[std::size_t(t)] = frame.conn_tri[std::size_t(t)].norm();
    double s = 0;
    for (int k = 0; k < frame.f1.m; ++k)
      s += g1.gx(t, k) * g1.gx(t, k) + g1.gy(t, k) * g1.gy(t, k) + g2.gx(t, k) * g2.gx(t, k) +
           g2.gy(t, k) * g2.gy(t, k);
    ge_abs[std::size_t(t)] = std::sqrt(s);
    const Vec2 c = mesh.centroid(t);
    Geom g = geom_at(chart, c.x, c.y);
    wil::JetMV n1 = g.n, n2 = g.n;
    for (auto& cj : n1.c) cj = jdx(cj);
    for (auto& cj : n2.c) cj = jdy(cj);
    double sn = 0;
    for (std::size_t A = 0; A < n1.c.size(); ++A)
      sn += n1.c[A].value() * n1.c[A].value() + n2.c[A].value() * n2.c[A].value();
    gn2 += sn * mesh.tri_area[std::size_t(t)];
  }
  out.conn_l2weak = mesh::lorentz_norms(conn_abs, mesh.tri_area).l2_weak;
  out.grad_e_l2weak = mesh::lorentz_norms(ge_abs, mesh.tri_area).l2_weak;
  out.grad_n_l2 = std::sqrt(gn2);
  out.bound_rhs = out.grad_n_l2 * (1.0 + out.grad_n_l2);
  out.ratio = out.grad_e_l2weak / (out.bound_rhs + 1e-300);
  return out;
}

}  // namespace conflab::iso
