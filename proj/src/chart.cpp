#include "conflab/willmore/chart.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "conflab/core/parallel.hpp"

namespace conflab::wil {

Jet jdx(const Jet& f) {
  Jet r;
  for (int d = 1; d <= 4; ++d)
    for (int j = 0; j <= d; ++j) {
      const int i = d - j;
      if (i == 0) continue;
      r.c[Jet::idx(i - 1, j)] = f.c[Jet::idx(i, j)] * double(i);
    }
  return r;
}

Jet jdy(const Jet& f) {
  Jet r;
  for (int d = 1; d <= 4; ++d)
    for (int j = 1; j <= d; ++j) {
      const int i = d - j;
      r.c[Jet::idx(i, j - 1)] = f.c[Jet::idx(i, j)] * double(j);
    }
  return r;
}

namespace {
Jet dotv(const std::vector<Jet>& a, const std::vector<Jet>& b) {
  Jet s(0.0);
  for (std::size_t k = 0; k < a.size(); ++k) s += a[k] * b[k];
  return s;
}
}  // namespace

std::vector<Jet> Geom::pi_n(const std::vector<Jet>& w) const {
  std::vector<Jet> r = w;
  const Jet c1 = dotv(w, e1), c2 = dotv(w, e2);
  for (std::size_t k = 0; k < r.size(); ++k) r[k] -= c1 * e1[k] + c2 * e2[k];
  return r;
}

double Geom::normH2() const {
  double s = 0;
  for (const auto& h : Hvec) s += h.value() * h.value();
  return s;
}

std::vector<Jet> Geom::n_vec() const {
  if (m != 3) throw std::invalid_argument("n_vec: m == 3 only");
  return exta::as_vector(n);
}

Jet Geom::Hs() const {
  if (m != 3) throw std::invalid_argument("Hs: m == 3 only");
  return dotv(Hvec, n_vec());
}

std::vector<CJet> Geom::H0() const {
  std::vector<CJet> r(std::size_t(m), CJet{});
  for (int k = 0; k < m; ++k)
    r[std::size_t(k)] = CJet((Ih11[std::size_t(k)] - Ih22[std::size_t(k)]) * 0.5, -Ih12[std::size_t(k)]);
  return r;
}

Jet Geom::H0_norm2() const {
  Jet s(0.0);
  auto h0 = H0();
  for (const auto& c : h0) s += c.re * c.re + c.im * c.im;
  return s;
}

Geom geom_at(const Chart& chart, double x, double y) {
  Geom g;
  g.m = chart.m;
  g.phi = chart.fn(Jet::var_x(x), Jet::var_y(y));
  if (int(g.phi.size()) != chart.m) throw std::runtime_error("chart dimension mismatch");
  const std::size_t m = std::size_t(chart.m);
  g.phix.resize(m);
  g.phiy.resize(m);
  for (std::size_t k = 0; k < m; ++k) {
    g.phix[k] = jdx(g.phi[k]);
    g.phiy[k] = jdy(g.phi[k]);
  }
  g.g11 = dotv(g.phix, g.phix);
  g.g12 = dotv(g.phix, g.phiy);
  g.g22 = dotv(g.phiy, g.phiy);
  g.detg = g.g11 * g.g22 - g.g12 * g.g12;
  if (g.detg.value() <= 1e-14) throw std::runtime_error("chart degenerate (immersion floor)");
  g.conformal = std::fabs(g.g12.value()) < 1e-8 && std::fabs(g.g11.value() - g.g22.value()) < 1e-8;
  g.lam = jlog(g.g11) * 0.5;

  // orthonormal frame (Gram-Schmidt; equals e^-lam d phi on conformal charts)
  const Jet inv1 = jrecip(jsqrt(g.g11));
  g.e1.resize(m);
  for (std::size_t k = 0; k < m; ++k) g.e1[k] = g.phix[k] * inv1;
  std::vector<Jet> t2 = g.phiy;
  const Jet proj = dotv(t2, g.e1);
  for (std::size_t k = 0; k < m; ++k) t2[k] -= proj * g.e1[k];
  const Jet inv2 = jrecip(jsqrt(dotv(t2, t2)));
  g.e2.resize(m);
  for (std::size_t k = 0; k < m; ++k) g.e2[k] = t2[k] * inv2;

  JetMV e1m = JetMV::vector(chart.m, g.e1), e2m = JetMV::vector(chart.m, g.e2);
  g.n = exta::hodge_star(exta::wedge(e1m, e2m), /*require_pure=*/false);

  std::vector<Jet> p11(m), p12(m), p22(m);
  for (std::size_t k = 0; k < m; ++k) {
    p11[k] = jdx(g.phix[k]);
    p12[k] = jdy(g.phix[k]);
    p22[k] = jdy(g.phiy[k]);
  }
  g.h11v = g.pi_n(p11);
  g.h12v = g.pi_n(p12);
  g.h22v = g.pi_n(p22);

  const Jet invdet = jrecip(g.detg);
  const Jet gi11 = g.g22 * invdet, gi12 = g.g12 * (-1.0) * invdet, gi22 = g.g11 * invdet;
  g.Hvec.resize(m);
  for (std::size_t k = 0; k < m; ++k)
    g.Hvec[k] = (gi11 * g.h11v[k] + gi12 * g.h12v[k] * 2.0 + gi22 * g.h22v[k]) * 0.5;
  g.K = (dotv(g.h11v, g.h22v) - dotv(g.h12v, g.h12v)) * invdet;

  // frame second fundamental form: e1 = a1 phix, e2 = a2 phix + b2 phiy
  const Jet a1 = inv1;
  const Jet b2 = inv2, a2 = proj * (-1.0) * inv1 * inv2;
  g.Ih11.resize(m);
  g.Ih12.resize(m);
  g.Ih22.resize(m);
  for (std::size_t k = 0; k < m; ++k) {
    g.Ih11[k] = a1 * a1 * g.h11v[k];
    g.Ih12[k] = a1 * (a2 * g.h11v[k] + b2 * g.h12v[k]);
    g.Ih22[k] = a2 * a2 * g.h11v[k] + a2 * b2 * g.h12v[k] * 2.0 + b2 * b2 * g.h22v[k];
  }
  return g;
}

ChartCheck check_chart(const Chart& chart, const std::vector<mesh::Vec2>& samples) {
  ChartCheck c;
  c.min_wedge = 1e300;
  for (const auto& p : samples) {
    Geom g = geom_at(chart, p.x, p.y);
    c.min_wedge = std::min(c.min_wedge, std::sqrt(std::max(0.0, g.detg.value())));
    c.max_offdiag = std::max(c.max_offdiag, std::fabs(g.g12.value()));
    c.max_aniso = std::max(c.max_aniso, std::fabs(g.g11.value() - g.g22.value()));
  }
  c.conformal = c.max_offdiag < 1e-8 && c.max_aniso < 1e-8;
  return c;
}

double integrate(const Surface& s, const std::function<double(const Geom&)>& f) {
  double total = 0;
  for (const auto& p : s.patches) {
    if (p.periodic) {
      const int n = p.grid_n;
      const double h = 2.0 * std::numbers::pi / n;
      total += p.weight * par::sum(std::int64_t(n) * n, [&](std::int64_t q) {
        const int i = int(q % n), j = int(q / n);
        Geom g = geom_at(p.chart, i * h, j * h);
        return f(g) * std::sqrt(g.detg.value()) * h * h;
      });
    } else {
      // edge-midpoint rule (degree 2): per-triangle error O(h^4)
      const mesh::TriMesh msh = mesh::build_disc_mesh(p.disc_level);
      total += p.weight * par::sum(msh.nt(), [&](std::int64_t t) {
        const auto& tr = msh.triangles[std::size_t(t)];
        const mesh::Vec2 a = msh.vertices[std::size_t(tr[0])];
        const mesh::Vec2 b = msh.vertices[std::size_t(tr[1])];
        const mesh::Vec2 c = msh.vertices[std::size_t(tr[2])];
        const mesh::Vec2 q[3] = {(a + b) * 0.5, (b + c) * 0.5, (c + a) * 0.5};
        double s = 0;
        for (const auto& pt : q) {
          Geom g = geom_at(p.chart, pt.x, pt.y);
          s += f(g) * std::sqrt(g.detg.value());
        }
        return s * msh.tri_area[std::size_t(t)] / 3.0;
      });
    }
  }
  return total;
}

void for_each_sample(const Patch& p, const std::function<void(double, double, const Geom&)>& f) {
  if (p.periodic) {
    const int n = p.grid_n;
    const double h = 2.0 * std::numbers::pi / n;
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i) f(i * h, j * h, geom_at(p.chart, i * h, j * h));
  } else {
    mesh::TriMesh msh = mesh::build_disc_mesh(p.disc_level);
    for (int t = 0; t < msh.nt(); ++t) {
      const mesh::Vec2 c = msh.centroid(t);
      f(c.x, c.y, geom_at(p.chart, c.x, c.y));
    }
  }
}

Chart translate_chart(const Chart& c, const std::vector<double>& v) {
  Chart r = c;
  r.fn = [base = c.fn, v](const Jet& x, const Jet& y) {
    auto phi = base(x, y);
    for (std::size_t k = 0; k < phi.size(); ++k) phi[k] += v[k];
    return phi;
  };
  return r;
}

Chart dilate_chart(const Chart& c, double s) {
  Chart r = c;
  r.fn = [base = c.fn, s](const Jet& x, const Jet& y) {
    auto phi = base(x, y);
    for (auto& p : phi) p = p * s;
    return phi;
  };
  return r;
}

Chart invert_chart(const Chart& c, const std::vector<double>& center) {
  Chart r = c;
  r.fn = [base = c.fn, center](const Jet& x, const Jet& y) {
    auto phi = base(x, y);
    Jet n2(0.0);
    for (std::size_t k = 0; k < phi.size(); ++k) {
      phi[k] -= center[k];
      n2 += phi[k] * phi[k];
    }
    const Jet inv = jrecip(n2);
    for (auto& p : phi) p = p * inv;
    return phi;
  };
  return r;
}

Chart perturb_normal_chart(const Chart& c, double t, std::function<Jet(const Jet&, const Jet&)> profile) {
  if (c.m != 3) throw std::invalid_argument("perturb_normal_chart: m == 3 only");
  Chart r = c;
  r.fn = [base = c.fn, t, profile](const Jet& x, const Jet& y) {
    auto phi = base(x, y);
    std::vector<Jet> px(3), py(3);
    for (int k = 0; k < 3; ++k) {
      px[std::size_t(k)] = jdx(phi[std::size_t(k)]);
      py[std::size_t(k)] = jdy(phi[std::size_t(k)]);
    }
    std::vector<Jet> cr(3);
    cr[0] = px[1] * py[2] - px[2] * py[1];
    cr[1] = px[2] * py[0] - px[0] * py[2];
    cr[2] = px[0] * py[1] - px[1] * py[0];
    const Jet inv = jrecip(jsqrt(cr[0] * cr[0] + cr[1] * cr[1] + cr[2] * cr[2]));
    const Jet w = profile(x, y) * t;
    for (int k = 0; k < 3; ++k) phi[std::size_t(k)] += w * cr[std::size_t(k)] * inv;
    return phi;
  };
  return r;
}

}  // namespace conflab::wil
