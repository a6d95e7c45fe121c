#include "conflab/willmore/conservation.hpp"

#include <cmath>
#include <complex>
#include <stdexcept>

#include "conflab/core/parallel.hpp"
#include "conflab/mesh/fem.hpp"
#include "conflab/mesh/norms.hpp"
#include "conflab/mesh/solver.hpp"
#include "conflab/willmore/willmore.hpp"

namespace conflab::wil {

using mesh::FieldRm;
using mesh::TriMesh;
using mesh::Vec2;
using MV = exta::MultiVec<double>;
using cplx = std::complex<double>;

namespace {

MV mv_values(const JetMV& a) {
  MV r(a.m);
  for (std::size_t i = 0; i < a.c.size(); ++i) r.c[i] = a.c[i].value();
  return r;
}

std::vector<double> jet_values(const std::vector<Jet>& v) {
  std::vector<double> r(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) r[i] = v[i].value();
  return r;
}

// least-squares potential recovery: minimize ||grad p - w||_{L2}, mean zero
std::vector<double> recover_potential(const mesh::PoissonSolver& solver, const TriMesh& msh,
                                      const std::vector<Vec2>& w, double* misfit) {
  std::vector<double> b(std::size_t(msh.nv()), 0.0);
  for (int t = 0; t < msh.nt(); ++t) {
    const double area = msh.tri_area[std::size_t(t)];
    for (int c = 0; c < 3; ++c)
      b[std::size_t(msh.triangles[std::size_t(t)][std::size_t(c)])] +=
          w[std::size_t(t)].dot(msh.grad_hat[std::size_t(t)][std::size_t(c)]) * area;
  }
  mesh::SolveResult res = solver.solve_neumann(b);
  if (misfit) {
    FieldRm p(msh, 1);
    p.v = res.x;
    mesh::TriGrad g = mesh::gradient_p1(p);
    double s = 0;
    for (int t = 0; t < msh.nt(); ++t) {
      const double dx = g.gx(t, 0) - w[std::size_t(t)].x;
      const double dy = g.gy(t, 0) - w[std::size_t(t)].y;
      s += (dx * dx + dy * dy) * msh.tri_area[std::size_t(t)];
    }
    *misfit = std::sqrt(s);
  }
  return res.x;
}

struct TriData {
  std::vector<double> e2l;
  std::vector<std::vector<double>> dphi1, dphi2;
  std::vector<std::vector<double>> lapPhi;
  std::vector<MV> n, dn1, dn2;
  std::vector<std::vector<double>> H;
  std::vector<std::vector<cplx>> dzH;
  std::vector<cplx> HH0;
  std::vector<std::vector<cplx>> ez;
  std::vector<std::vector<double>> T1, T2;
};

}  // namespace

ConservationReport conservation_laws(const Chart& chart, int level, double residual_gate) {
  ConservationReport rep;
  const int m = chart.m;
  TriMesh msh = mesh::build_disc_mesh(level);
  const int nt = msh.nt(), nv = msh.nv();

  Patch patch{chart, false, 64, level, 1.0};
  rep.gate_residual = willmore_residual_conservative(patch).weak;
  if (rep.gate_residual >= residual_gate)
    throw std::invalid_argument("conservation_laws: input is not near-Willmore");

  TriData td;
  td.e2l.assign(std::size_t(nt), 0.0);
  td.dphi1.assign(std::size_t(nt), {});
  td.dphi2.assign(std::size_t(nt), {});
  td.lapPhi.assign(std::size_t(nt), {});
  td.n.assign(std::size_t(nt), MV(m));
  td.dn1.assign(std::size_t(nt), MV(m));
  td.dn2.assign(std::size_t(nt), MV(m));
  td.H.assign(std::size_t(nt), {});
  td.dzH.assign(std::size_t(nt), {});
  td.HH0.assign(std::size_t(nt), cplx(0, 0));
  td.ez.assign(std::size_t(nt), {});
  td.T1.assign(std::size_t(nt), {});
  td.T2.assign(std::size_t(nt), {});
  par::for_each(nt, [&](std::int64_t t) {
    const Vec2 c = msh.centroid(int(t));
    Geom g = geom_at(chart, c.x, c.y);
    if (!g.conformal) throw std::invalid_argument("conservation_laws: conformal chart required");
    td.e2l[std::size_t(t)] = g.g11.value();
    td.dphi1[std::size_t(t)] = jet_values(g.phix);
    td.dphi2[std::size_t(t)] = jet_values(g.phiy);
    std::vector<double> lap(std::size_t(m), 0.0);
    for (int k = 0; k < m; ++k)
      lap[std::size_t(k)] = g.phi[std::size_t(k)].d(2, 0) + g.phi[std::size_t(k)].d(0, 2);
    td.lapPhi[std::size_t(t)] = lap;
    td.n[std::size_t(t)] = mv_values(g.n);
    JetMV n1 = g.n, n2 = g.n;
    for (auto& cj : n1.c) cj = jdx(cj);
    for (auto& cj : n2.c) cj = jdy(cj);
    td.dn1[std::size_t(t)] = mv_values(n1);
    td.dn2[std::size_t(t)] = mv_values(n2);
    td.H[std::size_t(t)] = jet_values(g.Hvec);
    std::vector<cplx> dzh(std::size_t(m), cplx(0,0));
    for (int k = 0; k < m; ++k)
      dzh[std::size_t(k)] =
          0.5 * cplx(g.Hvec[std::size_t(k)].d(1, 0), -g.Hvec[std::size_t(k)].d(0, 1));
    td.dzH[std::size_t(t)] = dzh;
    auto h0 = g.H0();
    cplx hh0(0, 0);
    for (int k = 0; k < m; ++k)
      hh0 += cplx(h0[std::size_t(k)].re.value(), h0[std::size_t(k)].im.value()) *
             g.Hvec[std::size_t(k)].value();
    td.HH0[std::size_t(t)] = hh0;
    std::vector<cplx> ez(std::size_t(m), cplx(0,0));
    for (int k = 0; k < m; ++k)
      ez[std::size_t(k)] = 0.5 * cplx(g.e1[std::size_t(k)].value(), -g.e2[std::size_t(k)].value());
    td.ez[std::size_t(t)] = ez;
    std::vector<Jet> T1, T2;
    bracket_at(g, T1, T2);
    td.T1[std::size_t(t)] = jet_values(T1);
    td.T2[std::size_t(t)] = jet_values(T2);
  });

  mesh::PoissonSolver solver(msh);

  // L: grad L = (T2, -T1) componentwise (curl inversion)
  FieldRm L(msh, m);
  {
    double misfit2 = 0;
    for (int k = 0; k < m; ++k) {
      std::vector<Vec2> w(std::size_t(nt), Vec2{});
      for (int t = 0; t < nt; ++t)
        w[std::size_t(t)] = {td.T2[std::size_t(t)][std::size_t(k)],
                             -td.T1[std::size_t(t)][std::size_t(k)]};
      double mk = 0;
      auto x = recover_potential(solver, msh, w, &mk);
      misfit2 += mk * mk;
      for (int i = 0; i < nv; ++i) L.at(i, k) = x[std::size_t(i)];
    }
    rep.l_recovery = std::sqrt(misfit2);
  }
  mesh::TriGrad gL = mesh::gradient_p1(L);
  auto L_tri = [&](int t, int k) {
    const auto& tr = msh.triangles[std::size_t(t)];
    return (L.at(tr[0], k) + L.at(tr[1], k) + L.at(tr[2], k)) / 3.0;
  };

  // flux law: div<L, grad^perp Phi>
  {
    std::vector<Vec2> X(std::size_t(nt), Vec2{});
    for (int t = 0; t < nt; ++t) {
      double x1 = 0, x2 = 0;
      for (int k = 0; k < m; ++k) {
        const double lv = L_tri(t, k);
        x1 += lv * (-td.dphi2[std::size_t(t)][std::size_t(k)]);
        x2 += lv * (td.dphi1[std::size_t(t)][std::size_t(k)]);
      }
      X[std::size_t(t)] = {x1, x2};
    }
    rep.law_flux = mesh::weak_l2_density(msh, mesh::weak_divergence(msh, X));
  }

  auto star_nH = [&](int t) {
    MV Hmv = MV::vector(m, td.H[std::size_t(t)]);
    return exta::hodge_star(exta::contract(td.n[std::size_t(t)], Hmv, false), false);
  };

  // moment law: div[L ^ grad^perp Phi + 2(star(n |_ H)) |_ grad^perp Phi]
  {
    double total2 = 0;
    std::vector<std::vector<Vec2>> comp(std::size_t(1) << m);
    for (auto& v : comp) v.assign(std::size_t(nt), Vec2{0, 0});
    for (int t = 0; t < nt; ++t) {
      MV Lmv(m);
      for (int k = 0; k < m; ++k) Lmv.c[exta::mask_t(1) << k] = L_tri(t, k);
      MV snh = star_nH(t);
      for (int dir = 0; dir < 2; ++dir) {
        std::vector<double> gp(std::size_t(m), 0.0);
        for (int k = 0; k < m; ++k)
          gp[std::size_t(k)] = dir == 0 ? -td.dphi2[std::size_t(t)][std::size_t(k)]
                                        : td.dphi1[std::size_t(t)][std::size_t(k)];
        MV gpv = MV::vector(m, gp);
        MV Y = exta::wedge(Lmv, gpv) + exta::contract(snh, gpv, false) * 2.0;
        for (exta::mask_t A = 0; A < Y.c.size(); ++A) {
          if (exta::grade_of(A) != 2) continue;
          if (dir == 0) comp[A][std::size_t(t)].x = Y.c[A];
          else comp[A][std::size_t(t)].y = Y.c[A];
        }
      }
    }
    for (exta::mask_t A = 0; A < exta::mask_t(comp.size()); ++A) {
      if (exta::grade_of(A) != 2) continue;
      const double w = mesh::weak_l2_density(msh, mesh::weak_divergence(msh, comp[A]));
      total2 += w * w;
    }
    rep.law_moment = std::sqrt(total2);
  }

  // potentials S and R from their defining gradients
  FieldRm S(msh, 1);
  {
    std::vector<Vec2> w(std::size_t(nt), Vec2{});
    for (int t = 0; t < nt; ++t) {
      double a = 0, b = 0;
      for (int k = 0; k < m; ++k) {
        const double lv = L_tri(t, k);
        a += lv * td.dphi1[std::size_t(t)][std::size_t(k)];
        b += lv * td.dphi2[std::size_t(t)][std::size_t(k)];
      }
      w[std::size_t(t)] = {a, b};
    }
    S.v = recover_potential(solver, msh, w, &rep.s_recovery);
  }
  std::vector<exta::mask_t> r_masks;
  for (exta::mask_t A = 0; A < (exta::mask_t(1) << m); ++A)
    if (exta::grade_of(A) == 2) r_masks.push_back(A);
  FieldRm R(msh, int(r_masks.size()));
  {
    double misfit2 = 0;
    for (std::size_t ci = 0; ci < r_masks.size(); ++ci) {
      std::vector<Vec2> w(std::size_t(nt), Vec2{});
      for (int t = 0; t < nt; ++t) {
        MV Lmv(m);
        for (int k = 0; k < m; ++k) Lmv.c[exta::mask_t(1) << k] = L_tri(t, k);
        MV snh = star_nH(t);
        Vec2 val{0, 0};
        for (int dir = 0; dir < 2; ++dir) {
          std::vector<double> gp(std::size_t(m), 0.0);
          for (int k = 0; k < m; ++k)
            gp[std::size_t(k)] = dir == 0 ? td.dphi1[std::size_t(t)][std::size_t(k)]
                                          : td.dphi2[std::size_t(t)][std::size_t(k)];
          MV gpv = MV::vector(m, gp);
          MV Y = exta::wedge(Lmv, gpv) + exta::contract(snh, gpv, false) * 2.0;
          (dir == 0 ? val.x : val.y) = Y.c[r_masks[ci]];
        }
        w[std::size_t(t)] = val;
      }
      double mk = 0;
      auto x = recover_potential(solver, msh, w, &mk);
      misfit2 += mk * mk;
      for (int i = 0; i < nv; ++i) R.at(i, int(ci)) = x[std::size_t(i)];
    }
    rep.r_recovery = std::sqrt(misfit2);
  }
  mesh::TriGrad gS = mesh::gradient_p1(S);
  mesh::TriGrad gR = mesh::gradient_p1(R);

  auto R_grad_mv = [&](int t, int dir) {
    MV r(m);
    for (std::size_t ci = 0; ci < r_masks.size(); ++ci)
      r.c[r_masks[ci]] = dir == 0 ? gR.gx(t, int(ci)) : gR.gy(t, int(ci));
    return r;
  };

  // first-order S/R system, pointwise residuals in L2 over triangles
  {
    const double sgn_m = (m % 2) ? -1.0 : 1.0;
    const double sgn_m1 = ((m - 1) % 2) ? -1.0 : 1.0;
    double s2 = 0, r2 = 0;
    for (int t = 0; t < nt; ++t) {
      MV starn = exta::hodge_star(td.n[std::size_t(t)], false);
      MV gpR1 = R_grad_mv(t, 1) * (-1.0);
      MV gpR2 = R_grad_mv(t, 0);
      const double res_s1 = gS.gx(t, 0) + exta::inner(starn, gpR1);
      const double res_s2 = gS.gy(t, 0) + exta::inner(starn, gpR2);
      s2 += (res_s1 * res_s1 + res_s2 * res_s2) * msh.tri_area[std::size_t(t)];
      const Vec2 gpS{-gS.gy(t, 0), gS.gx(t, 0)};
      for (int dir = 0; dir < 2; ++dir) {
        const MV& gpR = dir == 0 ? gpR1 : gpR2;
        MV rhs = exta::hodge_star(exta::bullet(td.n[std::size_t(t)], gpR), false) * sgn_m +
                 starn * (sgn_m1 * (dir == 0 ? gpS.x : gpS.y));
        MV diff = R_grad_mv(t, dir) - rhs;
        r2 += exta::norm2(diff) * msh.tri_area[std::size_t(t)];
      }
    }
    rep.sys_s_grad = std::sqrt(s2);
    rep.sys_r_grad = std::sqrt(r2);
  }

  // jacobian-structured second-order system, weak residuals
  {
    std::vector<Vec2> XS(std::size_t(nt), Vec2{});
    std::vector<double> f0(std::size_t(nt), 0.0);
    for (int t = 0; t < nt; ++t) {
      XS[std::size_t(t)] = {gS.gx(t, 0), gS.gy(t, 0)};
      MV sdn1 = exta::hodge_star(td.dn1[std::size_t(t)], false);
      MV sdn2 = exta::hodge_star(td.dn2[std::size_t(t)], false);
      MV gpR1 = R_grad_mv(t, 1) * (-1.0);
      MV gpR2 = R_grad_mv(t, 0);
      f0[std::size_t(t)] = exta::inner(sdn1, gpR1) + exta::inner(sdn2, gpR2);
    }
    std::vector<double> r = mesh::weak_divergence(msh, XS);
    std::vector<double> r0 = mesh::rhs_from_tri_density(msh, f0);
    for (int i = 0; i < nv; ++i) r[std::size_t(i)] += r0[std::size_t(i)];
    rep.sys_s_poisson = mesh::weak_l2_density(msh, r);

    const double sgn_m = (m % 2) ? -1.0 : 1.0;
    double total2 = 0;
    for (std::size_t ci = 0; ci < r_masks.size(); ++ci) {
      std::vector<Vec2> X(std::size_t(nt), Vec2{});
      std::vector<double> f0c(std::size_t(nt), 0.0);
      for (int t = 0; t < nt; ++t) {
        X[std::size_t(t)] = {gR.gx(t, int(ci)), gR.gy(t, int(ci))};
        MV gpR1 = R_grad_mv(t, 1) * (-1.0);
        MV gpR2 = R_grad_mv(t, 0);
        MV rhs = exta::hodge_star(exta::bullet(td.dn1[std::size_t(t)], gpR1) +
                                      exta::bullet(td.dn2[std::size_t(t)], gpR2),
                                  false) *
                 sgn_m;
        const Vec2 gpS{-gS.gy(t, 0), gS.gx(t, 0)};
        MV sdn1 = exta::hodge_star(td.dn1[std::size_t(t)], false);
        MV sdn2 = exta::hodge_star(td.dn2[std::size_t(t)], false);
        rhs += sdn1 * gpS.x + sdn2 * gpS.y;
        f0c[std::size_t(t)] = -rhs.c[r_masks[ci]];
      }
      std::vector<double> rr = mesh::weak_divergence(msh, X);
      std::vector<double> rr0 = mesh::rhs_from_tri_density(msh, f0c);
      for (int i = 0; i < nv; ++i) rr[std::size_t(i)] += rr0[std::size_t(i)];
      const double w = mesh::weak_l2_density(msh, rr);
      total2 += w * w;
    }
    rep.sys_r_poisson = std::sqrt(total2);

    // immersion equation of the system: pointwise density (analytic Delta Phi is exact)
    double phi2 = 0;
    for (int k = 0; k < m; ++k) {
      std::vector<double> f0k(std::size_t(nt), 0.0);
      for (int t = 0; t < nt; ++t) {
        const Vec2 gpS{-gS.gy(t, 0), gS.gx(t, 0)};
        const double term1 = 0.5 * (gpS.x * td.dphi1[std::size_t(t)][std::size_t(k)] +
                                    gpS.y * td.dphi2[std::size_t(t)][std::size_t(k)]);
        std::vector<double> gp1(std::size_t(m), 0.0), gp2(std::size_t(m), 0.0);
        for (int kk = 0; kk < m; ++kk) {
          gp1[std::size_t(kk)] = -td.dphi2[std::size_t(t)][std::size_t(kk)];
          gp2[std::size_t(kk)] = td.dphi1[std::size_t(t)][std::size_t(kk)];
        }
        MV c1 = exta::contract(R_grad_mv(t, 0), MV::vector(m, gp1), false);
        MV c2 = exta::contract(R_grad_mv(t, 1), MV::vector(m, gp2), false);
        const double term2 = 0.5 * (c1.c[exta::mask_t(1) << k] + c2.c[exta::mask_t(1) << k]);
        f0k[std::size_t(t)] = td.lapPhi[std::size_t(t)][std::size_t(k)] - term1 + term2;
      }
      double w2 = 0;
      for (int t = 0; t < nt; ++t)
        w2 += f0k[std::size_t(t)] * f0k[std::size_t(t)] * msh.tri_area[std::size_t(t)];
      phi2 += w2;
    }
    rep.sys_phi_poisson = std::sqrt(phi2);
  }

  // holomorphic differential f = e^lam B + 2 i e^{2lam} <H, H0>
  {
    std::vector<cplx> f_tri(std::size_t(nt), cplx(0,0));
    double pairing_zbar_acc = 0, pairing_z_acc = 0;
    for (int t = 0; t < nt; ++t) {
      std::vector<cplx> dzL(std::size_t(m), cplx(0,0));
      for (int k = 0; k < m; ++k) dzL[std::size_t(k)] = 0.5 * cplx(gL.gx(t, k), -gL.gy(t, k));
      cplx B(0, 0);
      for (int k = 0; k < m; ++k)
        B += 2.0 * dzL[std::size_t(k)] * td.ez[std::size_t(t)][std::size_t(k)];
      const double el = std::sqrt(td.e2l[std::size_t(t)]);
      const cplx f = el * B + 2.0 * cplx(0, 1) * td.e2l[std::size_t(t)] * td.HH0[std::size_t(t)];
      f_tri[std::size_t(t)] = f;
      rep.f_linf = std::max(rep.f_linf, std::abs(f));

      cplx l1(0, 0), l2(0, 0);
      for (int k = 0; k < m; ++k) {
        const cplx dzfull =
            dzL[std::size_t(k)] - 2.0 * cplx(0, 1) * td.dzH[std::size_t(t)][std::size_t(k)];
        const cplx dzbarPhi = 0.5 * cplx(td.dphi1[std::size_t(t)][std::size_t(k)],
                                         td.dphi2[std::size_t(t)][std::size_t(k)]);
        const cplx dzPhi = 0.5 * cplx(td.dphi1[std::size_t(t)][std::size_t(k)],
                                      -td.dphi2[std::size_t(t)][std::size_t(k)]);
        l1 += dzbarPhi * dzfull;
        l2 += dzPhi * dzfull;
      }
      double h2 = 0;
      for (int k = 0; k < m; ++k)
        h2 += td.H[std::size_t(t)][std::size_t(k)] * td.H[std::size_t(t)][std::size_t(k)];
      const cplx rhs1 = cplx(0, 1) * h2 * td.e2l[std::size_t(t)];
      // second pairing: <dz Phi, dz(L - 2iH)> = f/2. The e_zbar coefficient of
      // dz(L - 2iH) is e^{-lam} B + 2i <H, H0> = e^{-2lam} f, so pairing with
      // <dz Phi, dzbar Phi> = e^{2lam}/2 leaves f/2 and nothing else.
      const cplx rhs2 = 0.5 * f_tri[std::size_t(t)];
      pairing_zbar_acc += std::norm(l1 - rhs1) * msh.tri_area[std::size_t(t)];
      pairing_z_acc += std::norm(l2 - rhs2) * msh.tri_area[std::size_t(t)];
    }
    rep.pairing_zbar = std::sqrt(pairing_zbar_acc);
    rep.pairing_z = std::sqrt(pairing_z_acc);

    // distributional holomorphy: <dzbar f, phi_v> = -int f dzbar(phi_v),
    // assembled from the per-triangle f (differentiating the O(h)-noisy
    // discrete f directly would swamp the defect)
    std::vector<double> rre(std::size_t(nv), 0.0), rim(std::size_t(nv), 0.0);
    for (int t = 0; t < nt; ++t) {
      const auto& tr = msh.triangles[std::size_t(t)];
      const double area = msh.tri_area[std::size_t(t)];
      for (int c = 0; c < 3; ++c) {
        const mesh::Vec2 gh = msh.grad_hat[std::size_t(t)][std::size_t(c)];
        const cplx dzbar_phi(0.5 * gh.x, 0.5 * gh.y);
        const cplx contrib = -f_tri[std::size_t(t)] * dzbar_phi * area;
        rre[std::size_t(tr[std::size_t(c)])] += contrib.real();
        rim[std::size_t(tr[std::size_t(c)])] += contrib.imag();
      }
    }
    double h2 = 0;
    for (int i = 0; i < nv; ++i) {
      if (msh.is_boundary[std::size_t(i)]) continue;
      h2 += (rre[std::size_t(i)] * rre[std::size_t(i)] + rim[std::size_t(i)] * rim[std::size_t(i)]) /
            msh.vertex_area[std::size_t(i)];
    }
    rep.f_holomorphy = std::sqrt(h2);
  }

  return rep;
}

}  // namespace conflab::wil
