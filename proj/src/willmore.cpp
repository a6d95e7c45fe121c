#include "conflab/willmore/willmore.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "conflab/core/parallel.hpp"
#include "conflab/mesh/fem.hpp"
#include "conflab/mesh/norms.hpp"

namespace conflab::wil {

namespace {
constexpr double kPi = std::numbers::pi;

double vnorm2(const std::vector<double>& v) {
  double s = 0;
  for (double x : v) s += x * x;
  return s;
}
std::vector<double> values_of(const std::vector<Jet>& v) {
  std::vector<double> r(v.size());
  for (std::size_t k = 0; k < v.size(); ++k) r[k] = v[k].value();
  return r;
}
// project values onto the normal space using frame values
std::vector<double> project_normal(const Geom& g, const std::vector<double>& w) {
  double c1 = 0, c2 = 0;
  for (std::size_t k = 0; k < w.size(); ++k) {
    c1 += w[k] * g.e1[k].value();
    c2 += w[k] * g.e2[k].value();
  }
  std::vector<double> r = w;
  for (std::size_t k = 0; k < w.size(); ++k)
    r[k] -= c1 * g.e1[k].value() + c2 * g.e2[k].value();
  return r;
}
}  // namespace

double willmore_energy(const Surface& s) {
  return integrate(s, [](const Geom& g) { return g.normH2(); });
}

double surface_area(const Surface& s) {
  return integrate(s, [](const Geom&) { return 1.0; });
}

CurvatureReport curvature_identities_check(const Surface& s) {
  CurvatureReport rep;
  rep.int_k = integrate(s, [](const Geom& g) { return g.K.value(); });
  if (s.closed) {
    const double chi = 2.0 - 2.0 * s.genus;
    rep.gb_defect = std::fabs(rep.int_k - 2.0 * kPi * chi * s.multiplicity);
    rep.gb_applicable = true;
  }
  for (const auto& p : s.patches) {
    for_each_sample(p, [&](double, double, const Geom& g) {
      double i2 = 0, h2 = 0;
      for (int k = 0; k < g.m; ++k) {
        const double a = g.Ih11[std::size_t(k)].value(), b = g.Ih12[std::size_t(k)].value(),
                     c = g.Ih22[std::size_t(k)].value();
        i2 += a * a + 2 * b * b + c * c;
        h2 += g.Hvec[std::size_t(k)].value() * g.Hvec[std::size_t(k)].value();
      }
      rep.i2_defect = std::max(rep.i2_defect, std::fabs(i2 - (4 * h2 - 2 * g.K.value())));

      // |dn|^2_g with the multivector Gauss map
      JetMV nx = g.n, ny = g.n;
      for (auto& cJ : nx.c) cJ = jdx(cJ);
      for (auto& cJ : ny.c) cJ = jdy(cJ);
      const double det = g.detg.value();
      const double gi11 = g.g22.value() / det, gi12 = -g.g12.value() / det, gi22 = g.g11.value() / det;
      double dn2 = 0;
      for (std::size_t A = 0; A < nx.c.size(); ++A) {
        const double ax = nx.c[A].value(), ay = ny.c[A].value();
        dn2 += gi11 * ax * ax + 2 * gi12 * ax * ay + gi22 * ay * ay;
      }
      rep.dn_defect = std::max(rep.dn_defect, std::fabs(dn2 - i2));

      if (g.m == 3) {
        // principal curvatures from the shape operator g^{-1} W, W_ij = <h_ij, n>
        auto nv = values_of(g.n_vec());
        auto dotn = [&](const std::vector<Jet>& h) {
          double sdot = 0;
          for (int k = 0; k < 3; ++k) sdot += h[std::size_t(k)].value() * nv[std::size_t(k)];
          return sdot;
        };
        const double w11 = dotn(g.h11v), w12 = dotn(g.h12v), w22 = dotn(g.h22v);
        const double tr = gi11 * w11 + 2 * gi12 * w12 + gi22 * w22;
        const double dtm = (w11 * w22 - w12 * w12) / det;
        const double hs = dotn(g.Hvec);
        rep.umbilic_defect = std::max(
            rep.umbilic_defect, std::fabs((hs * hs - g.K.value()) - (tr * tr - 4 * dtm) / 4.0));
      }
    });
  }
  return rep;
}

void bracket_at(const Geom& g, std::vector<Jet>& T1, std::vector<Jet>& T2) {
  const std::size_t m = std::size_t(g.m);
  std::vector<Jet> dH1(m), dH2(m);
  for (std::size_t k = 0; k < m; ++k) {
    dH1[k] = jdx(g.Hvec[k]);
    dH2[k] = jdy(g.Hvec[k]);
  }
  std::vector<Jet> p1 = g.pi_n(dH1), p2 = g.pi_n(dH2);
  // star(grad^perp n ^ H): component 1 uses -d2 n, component 2 uses d1 n
  JetMV nd1 = g.n, nd2 = g.n;
  for (auto& c : nd1.c) c = jdx(c);
  for (auto& c : nd2.c) c = jdy(c);
  JetMV Hmv = JetMV::vector(g.m, g.Hvec);
  JetMV s1 = exta::hodge_star(exta::wedge(scaled(nd2, Jet(-1.0)), Hmv), false);
  JetMV s2 = exta::hodge_star(exta::wedge(nd1, Hmv), false);
  auto s1v = exta::as_vector(s1), s2v = exta::as_vector(s2);
  T1.assign(m, Jet(0.0));
  T2.assign(m, Jet(0.0));
  for (std::size_t k = 0; k < m; ++k) {
    T1[k] = dH1[k] - p1[k] * 3.0 + s1v[k];
    T2[k] = dH2[k] - p2[k] * 3.0 + s2v[k];
  }
}

std::vector<double> willmore_operator_at(const Geom& g) {
  const std::size_t m = std::size_t(g.m);
  std::vector<Jet> dH1(m), dH2(m);
  for (std::size_t k = 0; k < m; ++k) {
    dH1[k] = jdx(g.Hvec[k]);
    dH2[k] = jdy(g.Hvec[k]);
  }
  std::vector<Jet> P1 = g.pi_n(dH1), P2 = g.pi_n(dH2);
  const Jet sq = jsqrt(g.detg);
  const Jet invdet = jrecip(g.detg);
  const Jet gi11 = g.g22 * invdet, gi12 = g.g12 * (-1.0) * invdet, gi22 = g.g11 * invdet;
  std::vector<double> div(m);
  for (std::size_t k = 0; k < m; ++k) {
    const Jet q1 = sq * (gi11 * P1[k] + gi12 * P2[k]);
    const Jet q2 = sq * (gi12 * P1[k] + gi22 * P2[k]);
    div[k] = (jdx(q1) + jdy(q2)).value() / sq.value();
  }
  std::vector<double> lap = project_normal(g, div);  // Delta_perp H

  // A(H) = sum_ij <I(ei,ej), H> I(ei,ej)
  double c11 = 0, c12 = 0, c22 = 0;
  for (std::size_t k = 0; k < m; ++k) {
    c11 += g.Ih11[k].value() * g.Hvec[k].value();
    c12 += g.Ih12[k].value() * g.Hvec[k].value();
    c22 += g.Ih22[k].value() * g.Hvec[k].value();
  }
  const double h2 = g.normH2();
  std::vector<double> out(m);
  for (std::size_t k = 0; k < m; ++k) {
    const double AH = c11 * g.Ih11[k].value() + 2 * c12 * g.Ih12[k].value() + c22 * g.Ih22[k].value();
    out[k] = lap[k] + AH - 2.0 * h2 * g.Hvec[k].value();
  }
  return out;
}

namespace {

// pointwise residual densities
double codim1_density(const Geom& g) {
  const Jet hs = g.Hs();
  const double lapH = hs.d(2, 0) + hs.d(0, 2);
  const double e2l = g.g11.value();
  const double hv = hs.value();
  return lapH / e2l + 2.0 * hv * (hv * hv - g.K.value());
}

std::vector<double> conservative_density(const Geom& g) {
  std::vector<Jet> T1, T2;
  bracket_at(g, T1, T2);
  const double e2l = g.g11.value();
  std::vector<double> r(std::size_t(g.m));
  for (std::size_t k = 0; k < std::size_t(g.m); ++k)
    r[k] = -0.5 / e2l * (jdx(T1[k]) + jdy(T2[k])).value();
  return r;
}

void require_conformal(const Geom& g, const char* who) {
  if (!g.conformal) throw std::invalid_argument(std::string(who) + ": conformal chart required");
}

// generic pointwise/weak residual driver for a density given per sample
struct GridField {
  int n = 0;
  int m = 1;
  std::vector<double> v;  // n*n*m
  double& at(int i, int j, int k) {
    return v[(std::size_t(j) * std::size_t(n) + std::size_t(i)) * std::size_t(m) + std::size_t(k)];
  }
  double at(int i, int j, int k) const {
    return v[(std::size_t(j) * std::size_t(n) + std::size_t(i)) * std::size_t(m) + std::size_t(k)];
  }
};

}  // namespace

ResidualReport willmore_residual_codim1(const Patch& p) {
  if (p.chart.m != 3) throw std::invalid_argument("willmore_residual_codim1: m == 3 only");
  ResidualReport rep;
  double p2 = 0;
  if (!p.periodic) {
    mesh::TriMesh msh = mesh::build_disc_mesh(p.disc_level);
    std::vector<double> hs_grad_x(std::size_t(msh.nt())), hs_grad_y(std::size_t(msh.nt()));
    std::vector<double> zero_order(std::size_t(msh.nt())), e2l(std::size_t(msh.nt()));
    std::vector<double> dens(std::size_t(msh.nt()));
    par::for_each(msh.nt(), [&](std::int64_t t) {
      const mesh::Vec2 c = msh.centroid(int(t));
      Geom g = geom_at(p.chart, c.x, c.y);
      require_conformal(g, "willmore_residual_codim1");
      const Jet hs = g.Hs();
      hs_grad_x[std::size_t(t)] = hs.d(1, 0);
      hs_grad_y[std::size_t(t)] = hs.d(0, 1);
      const double hv = hs.value();
      e2l[std::size_t(t)] = g.g11.value();
      zero_order[std::size_t(t)] = 2.0 * hv * (hv * hv - g.K.value()) * e2l[std::size_t(t)];
      dens[std::size_t(t)] = codim1_density(g);
    });
    for (int t = 0; t < msh.nt(); ++t)
      p2 += dens[std::size_t(t)] * dens[std::size_t(t)] * e2l[std::size_t(t)] * msh.tri_area[std::size_t(t)];
    // weak: -int grad Hs . grad phi dx + int zero_order phi dx
    std::vector<mesh::Vec2> X(std::size_t(msh.nt()));
    for (int t = 0; t < msh.nt(); ++t)
      X[std::size_t(t)] = {hs_grad_x[std::size_t(t)], hs_grad_y[std::size_t(t)]};
    std::vector<double> r = mesh::weak_divergence(msh, X);  // = -int grad Hs . grad phi (as div form)
    std::vector<double> r0 = mesh::rhs_from_tri_density(msh, zero_order);
    for (std::size_t i = 0; i < r.size(); ++i) r[i] += r0[i];
    rep.weak = mesh::weak_l2_density(msh, r);
  } else {
    const int n = p.grid_n;
    const double h = 2.0 * kPi / n;
    GridField hs{n, 1, std::vector<double>(std::size_t(n) * n, 0.0)};
    GridField zf{n, 1, std::vector<double>(std::size_t(n) * n, 0.0)};
    GridField el{n, 1, std::vector<double>(std::size_t(n) * n, 0.0)};
    par::for_each(std::int64_t(n) * n, [&](std::int64_t q) {
      const int i = int(q % n), j = int(q / n);
      Geom g = geom_at(p.chart, i * h, j * h);
      require_conformal(g, "willmore_residual_codim1");
      hs.at(i, j, 0) = g.Hs().value();
      const double hv = hs.at(i, j, 0);
      el.at(i, j, 0) = g.g11.value();
      zf.at(i, j, 0) = 2.0 * hv * (hv * hv - g.K.value());
    });
    double w2 = 0;
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i) {
        const int ip = (i + 1) % n, im = (i + n - 1) % n, jp = (j + 1) % n, jm = (j + n - 1) % n;
        const double lap = (hs.at(ip, j, 0) + hs.at(im, j, 0) + hs.at(i, jp, 0) + hs.at(i, jm, 0) -
                            4 * hs.at(i, j, 0)) / (h * h);
        const double res = lap / el.at(i, j, 0) + zf.at(i, j, 0);
        w2 += res * res * el.at(i, j, 0) * h * h;
      }
    rep.weak = std::sqrt(w2);
    p2 = par::sum(std::int64_t(n) * n, [&](std::int64_t q) {
      const int i = int(q % n), j = int(q / n);
      Geom g = geom_at(p.chart, i * h, j * h);
      const double d = codim1_density(g);
      return d * d * g.g11.value() * h * h;
    });
  }
  rep.pointwise = std::sqrt(p2);
  return rep;
}

ResidualReport willmore_residual_conservative(const Patch& p) {
  ResidualReport rep;
  const int m = p.chart.m;
  double p2 = 0;
  if (!p.periodic) {
    mesh::TriMesh msh = mesh::build_disc_mesh(p.disc_level);
    std::vector<std::vector<double>> T1v(std::size_t(msh.nt())), T2v(std::size_t(msh.nt()));
    std::vector<double> e2l(std::size_t(msh.nt())), d2(std::size_t(msh.nt()));
    par::for_each(msh.nt(), [&](std::int64_t t) {
      const mesh::Vec2 c = msh.centroid(int(t));
      Geom g = geom_at(p.chart, c.x, c.y);
      require_conformal(g, "willmore_residual_conservative");
      std::vector<Jet> T1, T2;
      bracket_at(g, T1, T2);
      T1v[std::size_t(t)] = values_of(T1);
      T2v[std::size_t(t)] = values_of(T2);
      e2l[std::size_t(t)] = g.g11.value();
      d2[std::size_t(t)] = vnorm2(conservative_density(g));
    });
    for (int t = 0; t < msh.nt(); ++t)
      p2 += d2[std::size_t(t)] * e2l[std::size_t(t)] * msh.tri_area[std::size_t(t)];
    double w2 = 0;
    for (int k = 0; k < m; ++k) {
      std::vector<mesh::Vec2> X(std::size_t(msh.nt()));
      for (int t = 0; t < msh.nt(); ++t)
        X[std::size_t(t)] = {T1v[std::size_t(t)][std::size_t(k)], T2v[std::size_t(t)][std::size_t(k)]};
      std::vector<double> r = mesh::weak_divergence(msh, X);
      const double wn = mesh::weak_l2_density(msh, r);
      w2 += wn * wn;
    }
    rep.weak = std::sqrt(w2);
  } else {
    const int n = p.grid_n;
    const double h = 2.0 * kPi / n;
    GridField T1{n, m, std::vector<double>(std::size_t(n) * n * m, 0.0)};
    GridField T2{n, m, std::vector<double>(std::size_t(n) * n * m, 0.0)};
    p2 = par::sum(std::int64_t(n) * n, [&](std::int64_t q) {
      const int i = int(q % n), j = int(q / n);
      Geom g = geom_at(p.chart, i * h, j * h);
      require_conformal(g, "willmore_residual_conservative");
      std::vector<Jet> a, b;
      bracket_at(g, a, b);
      for (int k = 0; k < m; ++k) {
        T1.at(i, j, k) = a[std::size_t(k)].value();
        T2.at(i, j, k) = b[std::size_t(k)].value();
      }
      return vnorm2(conservative_density(g)) * g.g11.value() * h * h;
    });
    double w2 = 0;
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i) {
        const int ip = (i + 1) % n, im = (i + n - 1) % n, jp = (j + 1) % n, jm = (j + n - 1) % n;
        for (int k = 0; k < m; ++k) {
          const double div = (T1.at(ip, j, k) - T1.at(im, j, k)) / (2 * h) +
                             (T2.at(i, jp, k) - T2.at(i, jm, k)) / (2 * h);
          w2 += div * div * h * h;
        }
      }
    rep.weak = std::sqrt(w2);
  }
  rep.pointwise = std::sqrt(p2);
  return rep;
}

StructureDefects structure_identities_check(const Patch& p, int max_samples) {
  StructureDefects d;
  int count = 0;
  auto handle = [&](double, double, const Geom& g) {
    if (count >= max_samples) return;
    ++count;
    require_conformal(g, "structure_identities_check");
    const std::size_t m = std::size_t(g.m);
    const double e2l = g.g11.value();
    // Delta phi = 2 e^{2 lam} H  (any codimension)
    for (std::size_t k = 0; k < m; ++k) {
      const double lap = g.phi[k].d(2, 0) + g.phi[k].d(0, 2);
      d.laplace = std::max(d.laplace, std::fabs(lap - 2.0 * e2l * g.Hvec[k].value()));
    }
    // complex identities
    const Jet elam = jsqrt(g.g11);
    const Jet invl = jrecip(elam);
    auto h0 = g.H0();
    for (std::size_t k = 0; k < m; ++k) {
      const CJet ez{g.e1[k] * 0.5, g.e2[k] * (-0.5)};
      const CJet a = jdzbar(CJet{ez.re * elam, ez.im * elam});
      d.dzbar_ez = std::max({d.dzbar_ez, std::fabs(a.re.value() - 0.5 * e2l * g.Hvec[k].value()),
                             std::fabs(a.im.value())});
      const CJet b = jdz(CJet{ez.re * invl, ez.im * invl});
      d.dz_ez = std::max({d.dz_ez, std::fabs(b.re.value() - 0.5 * h0[k].re.value()),
                          std::fabs(b.im.value() - 0.5 * h0[k].im.value())});
    }
    // codazzi-mainardi
    {
      CJet hh0{Jet(0.0), Jet(0.0)};
      for (std::size_t k = 0; k < m; ++k) {
        hh0.re += g.Hvec[k] * h0[k].re;
        hh0.im += g.Hvec[k] * h0[k].im;
      }
      const Jet e2lj = g.g11;
      const CJet lhs = jdzbar(CJet{hh0.re * e2lj, hh0.im * e2lj});
      CJet rhs{Jet(0.0), Jet(0.0)};
      for (std::size_t k = 0; k < m; ++k) {
        const CJet dzH = jdz(g.Hvec[k]);
        const CJet dzbH = jdzbar(g.Hvec[k]);
        rhs.re += g.Hvec[k] * dzH.re + h0[k].re * dzbH.re - h0[k].im * dzbH.im;
        rhs.im += g.Hvec[k] * dzH.im + h0[k].re * dzbH.im + h0[k].im * dzbH.re;
      }
      d.codazzi = std::max({d.codazzi, std::fabs(lhs.re.value() / e2l - rhs.re.value()),
                            std::fabs(lhs.im.value() / e2l - rhs.im.value())});
    }
    if (g.m == 3) {
      auto nv = g.n_vec();
      const Jet hs = g.Hs();
      std::vector<Jet> n1(3), n2(3);
      for (int k = 0; k < 3; ++k) {
        n1[std::size_t(k)] = jdx(nv[std::size_t(k)]);
        n2[std::size_t(k)] = jdy(nv[std::size_t(k)]);
      }
      auto cross3 = [](const std::vector<Jet>& a, const std::vector<Jet>& b) {
        std::vector<Jet> c(3);
        c[0] = a[1] * b[2] - a[2] * b[1];
        c[1] = a[2] * b[0] - a[0] * b[2];
        c[2] = a[0] * b[1] - a[1] * b[0];
        return c;
      };
      // -2H grad phi = grad n + n x grad^perp n, both components
      auto nxd2 = cross3(nv, n2), nxd1 = cross3(nv, n1);
      for (int k = 0; k < 3; ++k) {
        const double l1 = -2.0 * hs.value() * g.phix[std::size_t(k)].value();
        const double r1 = n1[std::size_t(k)].value() - nxd2[std::size_t(k)].value();
        const double l2 = -2.0 * hs.value() * g.phiy[std::size_t(k)].value();
        const double r2 = n2[std::size_t(k)].value() + nxd1[std::size_t(k)].value();
        d.hn = std::max({d.hn, std::fabs(l1 - r1), std::fabs(l2 - r2)});
      }
      // K n = e^{-2 lam} d1 n x d2 n
      auto d1xd2 = cross3(n1, n2);
      for (int k = 0; k < 3; ++k)
        d.kn = std::max(d.kn, std::fabs(g.K.value() * nv[std::size_t(k)].value() -
                                        d1xd2[std::size_t(k)].value() / e2l));
    }
  };
  for_each_sample(p, handle);
  return d;
}

FirstVariationReport first_variation_check(const Surface& s,
                                           std::function<Jet(const Jet&, const Jet&)> profile,
                                           double t) {
  FirstVariationReport rep;
  Surface plus = s, minus = s;
  for (std::size_t i = 0; i < s.patches.size(); ++i) {
    plus.patches[i].chart = perturb_normal_chart(s.patches[i].chart, t, profile);
    minus.patches[i].chart = perturb_normal_chart(s.patches[i].chart, -t, profile);
  }
  rep.dW_fd = (willmore_energy(plus) - willmore_energy(minus)) / (2.0 * t);

  // operator side: V = psi * n, so <W_op, V> = psi <W_op, n>
  double vnorm = 0;
  rep.dW_operator = 0;
  for (const auto& p : s.patches) {
    if (p.periodic) {
      const int n = p.grid_n;
      const double h = 2.0 * kPi / n;
      rep.dW_operator += par::sum(std::int64_t(n) * n, [&](std::int64_t q) {
        const int i = int(q % n), j = int(q / n);
        Geom g = geom_at(p.chart, i * h, j * h);
        auto op = willmore_operator_at(g);
        auto nv = values_of(g.n_vec());
        const double psi = profile(Jet::var_x(i * h), Jet::var_y(j * h)).value();
        double dotn = 0;
        for (int k = 0; k < 3; ++k) dotn += op[std::size_t(k)] * nv[std::size_t(k)];
        return psi * dotn * std::sqrt(g.detg.value()) * h * h;
      });
      vnorm += par::sum(std::int64_t(n) * n, [&](std::int64_t q) {
        const int i = int(q % n), j = int(q / n);
        Geom g = geom_at(p.chart, i * h, j * h);
        const double psi = profile(Jet::var_x(i * h), Jet::var_y(j * h)).value();
        return psi * psi * std::sqrt(g.detg.value()) * h * h;
      });
    } else {
      mesh::TriMesh msh = mesh::build_disc_mesh(p.disc_level);
      rep.dW_operator += par::sum(msh.nt(), [&](std::int64_t tt) {
        const mesh::Vec2 c = msh.centroid(int(tt));
        Geom g = geom_at(p.chart, c.x, c.y);
        auto op = willmore_operator_at(g);
        auto nv = values_of(g.n_vec());
        const double psi = profile(Jet::var_x(c.x), Jet::var_y(c.y)).value();
        double dotn = 0;
        for (int k = 0; k < 3; ++k) dotn += op[std::size_t(k)] * nv[std::size_t(k)];
        return psi * dotn * std::sqrt(g.detg.value()) * msh.tri_area[std::size_t(tt)];
      });
      vnorm += par::sum(msh.nt(), [&](std::int64_t tt) {
        const mesh::Vec2 c = msh.centroid(int(tt));
        Geom g = geom_at(p.chart, c.x, c.y);
        const double psi = profile(Jet::var_x(c.x), Jet::var_y(c.y)).value();
        return psi * psi * std::sqrt(g.detg.value()) * msh.tri_area[std::size_t(tt)];
      });
    }
  }
  rep.vnorm = std::sqrt(vnorm);
  rep.defect = std::fabs(rep.dW_fd - rep.dW_operator);
  return rep;
}

PhysicalEnergies physical_energies(const Surface& s, double helfrich_c0, double helfrich_c1) {
  if (!s.closed) throw std::invalid_argument("physical_energies: closed surface required");
  PhysicalEnergies pe;
  pe.willmore = willmore_energy(s);
  pe.area = surface_area(s);
  pe.hawking = std::sqrt(pe.area) * (16.0 * kPi - pe.willmore) / (64.0 * std::pow(kPi, 1.5));
  pe.helfrich = integrate(s, [&](const Geom& g) {
    const double hs = g.Hs().value();
    const double w = 2.0 * hs + helfrich_c0;
    return w * w;
  }) + helfrich_c1 * pe.area;
  return pe;
}

InvarianceReport conformal_invariance_check(const Surface& s, const std::vector<double>& center) {
  InvarianceReport rep;
  rep.w_base = willmore_energy(s);
  // admissibility: the inversion center must stay off the surface
  double mind = 1e300;
  for (const auto& p : s.patches) {
    for_each_sample(p, [&](double, double, const Geom& g) {
      double d2 = 0;
      for (int k = 0; k < g.m; ++k) {
        const double dd = g.phi[std::size_t(k)].value() - center[std::size_t(k)];
        d2 += dd * dd;
      }
      mind = std::min(mind, std::sqrt(d2));
    });
  }
  rep.min_center_dist = mind;
  if (mind <= 0.05) throw std::invalid_argument("inversion center too close to the surface");
  Surface t = s;
  for (auto& p : t.patches) p.chart = invert_chart(p.chart, center);
  rep.w_transformed = willmore_energy(t);
  return rep;
}

InvarianceReport dilation_invariance_check(const Surface& s, double factor) {
  InvarianceReport rep;
  rep.w_base = willmore_energy(s);
  Surface t = s;
  for (auto& p : t.patches) p.chart = dilate_chart(p.chart, factor);
  rep.w_transformed = willmore_energy(t);
  rep.min_center_dist = 1e300;
  return rep;
}

std::vector<MultiplicityRow> multiplicity_energy_scan(const std::vector<Surface>& family) {
  std::vector<MultiplicityRow> rows;
  for (const auto& s : family) {
    MultiplicityRow r;
    r.name = s.name;
    r.w = willmore_energy(s);
    r.k = s.multiplicity;
    r.bound = 4.0 * kPi * r.k;
    r.satisfied = r.w >= r.bound * (1.0 - 0.01);
    rows.push_back(r);
  }
  return rows;
}

}  // namespace conflab::wil
