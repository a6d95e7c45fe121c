#include "conflab/comp/frehse.hpp"

#include <cmath>
#include <numbers>

#include "conflab/mesh/fem.hpp"
#include "conflab/mesh/norms.hpp"

namespace conflab::comp {

using mesh::FieldRm;
using mesh::TriMesh;
using mesh::Vec2;

namespace {
constexpr double kPi = std::numbers::pi;

// smooth bump test function, = exp(1 - 1/(1 - (r/R)^2)) inside B_R
struct Psi {
  double R = 0.6;
  double operator()(Vec2 p) const {
    const double q = p.dot(p) / (R * R);
    if (q >= 1.0) return 0.0;
    return std::exp(1.0 - 1.0 / (1.0 - q));
  }
  Vec2 grad(Vec2 p) const {
    const double q = p.dot(p) / (R * R);
    if (q >= 1.0) return {0, 0};
    const double w = 1.0 - q;
    const double val = std::exp(1.0 - 1.0 / w);
    const double dpsi_dq = -val / (w * w);
    return p * (2.0 * dpsi_dq / (R * R));
  }
};

// smooth radial cutoff: 1 on [0, 1/2], 0 on [1, inf) (argument rho/Delta)
double cutoff(double s) {
  if (s <= 0.5) return 1.0;
  if (s >= 1.0) return 0.0;
  const double t = (s - 0.5) / 0.5;
  return 1.0 - t * t * (3 - 2 * t);
}

struct AtomFamily {
  std::vector<Vec2> a;
  std::vector<double> lam;
  double v(Vec2 p) const {
    double s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
      const double d = (p - a[i]).norm();
      s += lam[i] * std::log(2.0 / std::max(d, 1e-300));
    }
    return s;
  }
  Vec2 grad_v(Vec2 p) const {
    Vec2 g{0, 0};
    for (std::size_t i = 0; i < a.size(); ++i) {
      const Vec2 d = p - a[i];
      const double r2 = std::max(d.dot(d), 1e-300);
      g = g + d * (-lam[i] / r2);
    }
    return g;
  }
};

// deterministic sunflower points filling B_{radius} (density of the bump is
// approximated by the radial quantile map)
AtomFamily make_atoms(int n, double radius) {
  AtomFamily f;
  const double golden = kPi * (3.0 - std::sqrt(5.0));
  for (int i = 0; i < n; ++i) {
    // quantile of the (1 - t^2)^2 bump: invert M(t) = 3t^2 - 3t^4 + t^6
    const double target = (i + 0.5) / n;
    double lo = 0, hi = 1;
    for (int it = 0; it < 60; ++it) {
      const double mid = 0.5 * (lo + hi);
      const double M = 3 * mid * mid - 3 * std::pow(mid, 4) + std::pow(mid, 6);
      (M < target ? lo : hi) = mid;
    }
    const double r = radius * 0.5 * (lo + hi);
    const double th = golden * i;
    f.a.push_back({r * std::cos(th), r * std::sin(th)});
    f.lam.push_back(1.0 / n);
  }
  return f;
}

// pairing <Delta u + |grad u|^2, psi> for u = log v via the absolutely
// convergent form int(-grad u . grad psi + |grad u|^2 psi)
double atom_pairing(const AtomFamily& fam, const TriMesh& msh, const Psi& psi) {
  const int n = int(fam.a.size());
  // patch radii: clear of other atoms
  std::vector<double> Delta(std::size_t(n), 0.04);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      Delta[std::size_t(i)] =
          std::min(Delta[std::size_t(i)], 0.4 * (fam.a[std::size_t(i)] - fam.a[std::size_t(j)]).norm());
    }
  auto density = [&](Vec2 p) {
    const double v = fam.v(p);
    const Vec2 gv = fam.grad_v(p);
    const Vec2 gu = gv * (1.0 / v);
    return -gu.dot(psi.grad(p)) + gu.dot(gu) * psi(p);
  };
  auto cut = [&](Vec2 p) {
    double c = 1.0;
    for (int i = 0; i < n; ++i)
      c *= 1.0 - cutoff((p - fam.a[std::size_t(i)]).norm() / Delta[std::size_t(i)]);
    return c;  // 1 away from atoms, 0 near them
  };
  // far field: edge-midpoint rule on the mesh with the smooth complement cutoff
  double total = 0;
  for (int t = 0; t < msh.nt(); ++t) {
    const auto& tr = msh.triangles[std::size_t(t)];
    const Vec2 A = msh.vertices[std::size_t(tr[0])], B = msh.vertices[std::size_t(tr[1])],
               C = msh.vertices[std::size_t(tr[2])];
    const Vec2 q[3] = {(A + B) * 0.5, (B + C) * 0.5, (C + A) * 0.5};
    double s = 0;
    for (const auto& pt : q) s += density(pt) * cut(pt);
    total += s * msh.tri_area[std::size_t(t)] / 3.0;
  }
  // atom patches: log-polar quadrature of density * (1 - complement) on
  // (eps, Delta_i), plus the analytic tail inside eps
  const double eps = 1e-7;
  const int nr = 160, nth = 48;
  for (int i = 0; i < n; ++i) {
    const double D = Delta[std::size_t(i)];
    const double lr0 = std::log(eps), lr1 = std::log(D);
    double patch = 0;
    for (int ir = 0; ir < nr; ++ir) {
      const double lr = lr0 + (ir + 0.5) * (lr1 - lr0) / nr;
      const double rho = std::exp(lr);
      const double dr = rho * (lr1 - lr0) / nr;  // d rho = rho d(log rho)
      for (int it = 0; it < nth; ++it) {
        const double th = 2 * kPi * (it + 0.5) / nth;
        const Vec2 p = fam.a[std::size_t(i)] + Vec2{rho * std::cos(th), rho * std::sin(th)};
        patch += density(p) * (1.0 - cut(p)) * rho * (2 * kPi / nth) * dr;  // rho dtheta drho
      }
    }
    total += patch;
    // tail: int_{B_eps} |grad u|^2 psi with the radial freeze
    double V = 0;
    for (int j = 0; j < n; ++j) {
      if (j == i) continue;
      V += fam.lam[std::size_t(j)] *
           std::log(2.0 / (fam.a[std::size_t(i)] - fam.a[std::size_t(j)]).norm());
    }
    const double lam = fam.lam[std::size_t(i)];
    const double psi_a = psi(fam.a[std::size_t(i)]);
    total += psi_a * 2 * kPi * lam / (lam * std::log(2.0 / eps) + V);
  }
  return total;
}
}  // namespace

FrehseReport frehse_counterexample_report(int level) {
  FrehseReport rep;

  // (i) log log(2/r) on the annulus 0.01 < r < 1: weak P1 residual
  {
    TriMesh ann = mesh::build_annulus_mesh(0.01, 24 * (1 << std::max(0, level - 4)),
                                           12 * (1 << level) / 4);
    FieldRm u = FieldRm::sample(ann, 1, [](Vec2 p) { return std::log(std::log(2.0 / p.norm())); });
    mesh::TriGrad g = mesh::gradient_p1(u);
    std::vector<Vec2> X(std::size_t(ann.nt()), Vec2{});
    std::vector<double> g2(std::size_t(ann.nt()), 0.0);
    for (int t = 0; t < ann.nt(); ++t) {
      X[std::size_t(t)] = {g.gx(t, 0), g.gy(t, 0)};
      g2[std::size_t(t)] = g.gx(t, 0) * g.gx(t, 0) + g.gy(t, 0) * g.gy(t, 0);
    }
    std::vector<double> r = mesh::weak_divergence(ann, X);
    std::vector<double> r0 = mesh::rhs_from_tri_density(ann, g2);
    for (int i = 0; i < ann.nv(); ++i) r[std::size_t(i)] += r0[std::size_t(i)];
    rep.annulus_residual = mesh::weak_l2_density(ann, r);
  }

  // (ii) sup growth as the inner radius shrinks (closed form, verified on mesh)
  for (double rho : {0.01, 0.005, 0.001})
    rep.sup_values.push_back(std::log(std::log(2.0 / rho)));

  // (iii) weak-limit family and the limit candidate
  TriMesh msh = mesh::build_disc_mesh(level);
  Psi psi;
  for (int n : {4, 16, 64}) {
    AtomFamily fam = make_atoms(n, 0.25);
    rep.atom_counts.push_back(n);
    rep.atom_residuals.push_back(std::fabs(atom_pairing(fam, msh, psi)));
  }
  {
    // limit candidate u = log(v_f) with v_f = log(2/.) * f, f the unit-mass
    // bump c (1 - (r/s)^2)^2; v_f is closed-form radial
    const double s = 0.25;
    auto vf = [&](double r) {
      if (r >= s) return std::log(2.0 / r);
      const double tau = r / s;
      const double head = 1.5 * tau * tau - 0.75 * std::pow(tau, 4) + std::pow(tau, 6) / 6.0;
      return std::log(2.0 / s) + (1.5 - 0.75 + 1.0 / 6.0) - head;
    };
    auto Mf = [&](double r) {
      if (r >= s) return 1.0;
      const double tau = r / s;
      return 3 * tau * tau - 3 * std::pow(tau, 4) + std::pow(tau, 6);
    };
    double total = 0;
    for (int t = 0; t < msh.nt(); ++t) {
      const auto& tr = msh.triangles[std::size_t(t)];
      const Vec2 A = msh.vertices[std::size_t(tr[0])], B = msh.vertices[std::size_t(tr[1])],
                 C = msh.vertices[std::size_t(tr[2])];
      const Vec2 q[3] = {(A + B) * 0.5, (B + C) * 0.5, (C + A) * 0.5};
      double sacc = 0;
      for (const auto& pt : q) {
        const double r = std::max(pt.norm(), 1e-12);
        const double v = vf(r);
        const Vec2 gu = pt * (-Mf(r) / (r * r) / v);
        sacc += -gu.dot(psi.grad(pt)) + gu.dot(gu) * psi(pt);
      }
      total += sacc * msh.tri_area[std::size_t(t)] / 3.0;
    }
    rep.limit_residual = std::fabs(total);
  }
  return rep;
}

}  // namespace conflab::comp
