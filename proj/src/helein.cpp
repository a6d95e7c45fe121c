#include "conflab/isothermal/helein.hpp"

#include <cmath>
#include <numbers>

#include "conflab/core/parallel.hpp"
#include "conflab/mesh/fem.hpp"
#include "conflab/mesh/norms.hpp"
#include "conflab/mesh/solver.hpp"
#include "conflab/willmore/chart.hpp"

namespace conflab::iso {

using mesh::FieldRm;
using mesh::TriMesh;
using mesh::Vec2;
using wil::jdx;
using wil::jdy;

namespace {
constexpr double kPi = std::numbers::pi;

// inverse stereographic projection with 0 -> north pole, infinity -> south
// (the convention that makes the collar interpolation short)
template <class T>
std::array<T, 3> inv_stereo(const T& u, const T& v) {
  T r2 = u * u + v * v;
  T inv = jrecip(1.0 + r2);
  return {u * 2.0 * inv, v * 2.0 * inv, (1.0 - r2) * inv};
}
}  // namespace

std::vector<Jet> bubble_map(const Jet& x, const Jet& y, double lam, bool collar) {
  const double r = collar ? std::hypot(x.value(), y.value()) : 0.0;
  std::vector<Jet> out(3, Jet(0.0));
  if (r <= 0.5) {
    auto p = inv_stereo(x * lam, y * lam);
    out[0] = p[0];
    out[1] = p[1];
    out[2] = p[2];
    return out;
  }
  if (r >= 1.0) {
    out[2] = Jet(-1.0);
    return out;
  }
  // blend (1-r) pi^{-1}(lam x) + (r - 1/2) S, reprojected to the sphere
  auto p = inv_stereo(x * lam, y * lam);
  const Jet rr = jsqrt(x * x + y * y);
  const Jet a = 1.0 - rr, b = rr - 0.5;
  Jet q0 = p[0] * a, q1 = p[1] * a, q2 = p[2] * a - b;
  const Jet inv = jrecip(jsqrt(q0 * q0 + q1 * q1 + q2 * q2));
  out[0] = q0 * inv;
  out[1] = q1 * inv;
  out[2] = q2 * inv;
  return out;
}

double bubble_covered_area(double lam, int level, bool collar) {
  TriMesh msh = mesh::build_disc_mesh(level);
  return par::sum(msh.nt(), [&](std::int64_t t) {
    const Vec2 c = msh.centroid(int(t));
    auto n = bubble_map(Jet::var_x(c.x), Jet::var_y(c.y), lam, collar);
    // n . (d1 n x d2 n)
    double d1[3], d2[3], nv[3];
    for (int k = 0; k < 3; ++k) {
      nv[k] = n[std::size_t(k)].value();
      d1[k] = jdx(n[std::size_t(k)]).value();
      d2[k] = jdy(n[std::size_t(k)]).value();
    }
    const double cx = d1[1] * d2[2] - d1[2] * d2[1];
    const double cy = d1[2] * d2[0] - d1[0] * d2[2];
    const double cz = d1[0] * d2[1] - d1[1] * d2[0];
    return (nv[0] * cx + nv[1] * cy + nv[2] * cz) * msh.tri_area[std::size_t(t)];
  });
}

ThresholdReport helein_threshold_experiment(double lam, const std::vector<double>& rhos,
                                            int disc_level, int annulus_nr, int annulus_ntheta,
                                            bool collar) {
  ThresholdReport rep;
  rep.lam = lam;
  TriMesh msh = mesh::build_disc_mesh(disc_level);
  rep.map_energy = par::sum(msh.nt(), [&](std::int64_t t) {
    const Vec2 c = msh.centroid(int(t));
    auto n = bubble_map(Jet::var_x(c.x), Jet::var_y(c.y), lam, collar);
    double s = 0;
    for (int k = 0; k < 3; ++k) {
      const double a = jdx(n[std::size_t(k)]).value(), b = jdy(n[std::size_t(k)]).value();
      s += a * a + b * b;
    }
    return s * msh.tri_area[std::size_t(t)];
  });
  rep.degree = int(std::labs(std::lround(bubble_covered_area(lam, disc_level, collar) / (4.0 * kPi))));

  if (rep.degree != 0) {
    // minimal frame energy per component under the circle degree constraint:
    // on the annulus where n == south pole the frame is planar, e = e^{i theta},
    // and the minimizer is theta = polar angle + harmonic correction
    for (double rho : rhos) {
      TriMesh ann = mesh::build_annulus_mesh(rho, annulus_nr, annulus_ntheta);
      // energy of the winding part: per-triangle gradient of the polar angle
      // from wrapped edge differences
      auto wrapped = [](double d) {
        while (d > kPi) d -= 2 * kPi;
        while (d < -kPi) d += 2 * kPi;
        return d;
      };
      double energy = 0;
      std::vector<Vec2> gth(std::size_t(ann.nt()), Vec2{});
      for (int t = 0; t < ann.nt(); ++t) {
        const auto& tr = ann.triangles[std::size_t(t)];
        double th[3];
        for (int c = 0; c < 3; ++c)
          th[c] = std::atan2(ann.vertices[std::size_t(tr[std::size_t(c)])].y,
                             ann.vertices[std::size_t(tr[std::size_t(c)])].x);
        // unwrap against corner 0
        const double t0 = th[0];
        const double t1 = t0 + wrapped(th[1] - t0);
        const double t2 = t0 + wrapped(th[2] - t0);
        Vec2 g{0, 0};
        g = g + ann.grad_hat[std::size_t(t)][0] * t0 + ann.grad_hat[std::size_t(t)][1] * t1 +
            ann.grad_hat[std::size_t(t)][2] * t2;
        gth[std::size_t(t)] = g;
        energy += g.dot(g) * ann.tri_area[std::size_t(t)];
      }
      // harmonic correction psi: minimize ||grad(theta_p + psi)||^2
      mesh::PoissonSolver solver(ann);
      std::vector<double> b(std::size_t(ann.nv()), 0.0);
      for (int t = 0; t < ann.nt(); ++t)
        for (int c = 0; c < 3; ++c)
          b[std::size_t(ann.triangles[std::size_t(t)][std::size_t(c)])] -=
              gth[std::size_t(t)].dot(ann.grad_hat[std::size_t(t)][std::size_t(c)]) *
              ann.tri_area[std::size_t(t)];
      mesh::SolveResult psi = solver.solve_neumann(b);
      FieldRm pf(ann, 1);
      pf.v = psi.x;
      mesh::TriGrad gp = mesh::gradient_p1(pf);
      double corrected = 0;
      for (int t = 0; t < ann.nt(); ++t) {
        const Vec2 g{gth[std::size_t(t)].x + gp.gx(t, 0), gth[std::size_t(t)].y + gp.gy(t, 0)};
        corrected += g.dot(g) * ann.tri_area[std::size_t(t)];
      }
      rep.rows.push_back({rho, std::min(energy, corrected) * rep.degree * rep.degree});
    }
    std::vector<double> xs, ys;
    for (const auto& r : rep.rows) {
      xs.push_back(std::log(1.0 / r.rho));
      ys.push_back(r.frame_energy);
    }
    // linear fit frame_energy = slope * log(1/rho) + c
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const int n = int(xs.size());
    for (int i = 0; i < n; ++i) {
      sx += xs[std::size_t(i)];
      sy += ys[std::size_t(i)];
      sxx += xs[std::size_t(i)] * xs[std::size_t(i)];
      sxy += xs[std::size_t(i)] * ys[std::size_t(i)];
    }
    rep.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  } else {
    // contractible image: the small-lambda blow-up without the boundary collar
    // stays inside a cap around the north pole, so the chart frame of the
    // projection from the south pole is a global lift with bounded energy
    rep.lift_energy = par::sum(msh.nt(), [&](std::int64_t t) {
      const Vec2 c = msh.centroid(int(t));
      auto p = inv_stereo(Jet::var_x(c.x) * lam, Jet::var_y(c.y) * lam);
      const Jet den = jrecip(1.0 + p[2]);
      const Jet u = p[0] * den, v = p[1] * den;
      const Jet w = jrecip(1.0 + u * u + v * v);
      const Jet e1[3] = {(1.0 - u * u + v * v) * w, u * v * (-2.0) * w, u * (-2.0) * w};
      const Jet e2[3] = {u * v * (-2.0) * w, (1.0 + u * u - v * v) * w, v * (-2.0) * w};
      double s = 0;
      for (int k = 0; k < 3; ++k) {
        s += jdx(e1[k]).value() * jdx(e1[k]).value() + jdy(e1[k]).value() * jdy(e1[k]).value();
        s += jdx(e2[k]).value() * jdx(e2[k]).value() + jdy(e2[k]).value() * jdy(e2[k]).value();
      }
      return s * msh.tri_area[std::size_t(t)];
    });
  }
  return rep;
}

}  // namespace conflab::iso
