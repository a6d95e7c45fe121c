#include "conflab/gauge/gauge.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include "conflab/mesh/fem.hpp"
#include "conflab/mesh/norms.hpp"
#include "conflab/mesh/solver.hpp"

namespace conflab::gauge {

using mesh::Vec2;
namespace {
constexpr double kPi = std::numbers::pi;

Eigen::MatrixXd mat_of(const double* p, int m) {
  Eigen::MatrixXd M(m, m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) M(i, j) = p[i * m + j];
  return M;
}
void store(const Eigen::MatrixXd& M, double* p, int m) {
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) p[i * m + j] = M(i, j);
}

// nearest rotation (polar projection with determinant fix)
Eigen::MatrixXd project_so(const Eigen::MatrixXd& M) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(M, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Eigen::MatrixXd R = svd.matrixU() * svd.matrixV().transpose();
  if (R.determinant() < 0) {
    Eigen::MatrixXd U = svd.matrixU();
    U.col(M.cols() - 1) *= -1.0;
    R = U * svd.matrixV().transpose();
  }
  return R;
}
}  // namespace

RotationField RotationField::identity(int m_, int nv_) {
  RotationField r;
  r.m = m_;
  r.nv = nv_;
  r.p.assign(std::size_t(nv_) * std::size_t(m_) * std::size_t(m_), 0.0);
  for (int i = 0; i < nv_; ++i)
    for (int k = 0; k < m_; ++k)
      r.p[std::size_t(i) * std::size_t(m_ * m_) + std::size_t(k * m_ + k)] = 1.0;
  return r;
}

double RotationField::max_orthogonality_defect() const {
  double d = 0;
  for (int i = 0; i < nv; ++i) {
    Eigen::MatrixXd P = mat_of(at(i), m);
    d = std::max(d, (P.transpose() * P - Eigen::MatrixXd::Identity(m, m)).cwiseAbs().maxCoeff());
  }
  return d;
}

double RotationField::min_det() const {
  double d = 1e300;
  for (int i = 0; i < nv; ++i) d = std::min(d, mat_of(at(i), m).determinant());
  return d;
}

namespace {

struct RotatedPotential {
  std::vector<Eigen::MatrixXd> c1, c2;  // per triangle
};

RotatedPotential rotate_potential(const OmegaField& omega, const TriMesh& msh,
                                  const RotationField& P) {
  const int m = omega.m, nt = msh.nt();
  RotatedPotential rp;
  rp.c1.assign(std::size_t(nt), Eigen::MatrixXd::Zero(m, m));
  rp.c2.assign(std::size_t(nt), Eigen::MatrixXd::Zero(m, m));
  for (int t = 0; t < nt; ++t) {
    const auto& tr = msh.triangles[std::size_t(t)];
    Eigen::MatrixXd Pm = Eigen::MatrixXd::Zero(m, m);
    Eigen::MatrixXd dP1 = Eigen::MatrixXd::Zero(m, m), dP2 = Eigen::MatrixXd::Zero(m, m);
    Eigen::MatrixXd O1 = Eigen::MatrixXd::Zero(m, m), O2 = Eigen::MatrixXd::Zero(m, m);
    for (int c = 0; c < 3; ++c) {
      const int v = tr[std::size_t(c)];
      const Vec2 gh = msh.grad_hat[std::size_t(t)][std::size_t(c)];
      Eigen::MatrixXd Pv = mat_of(P.at(v), m);
      Pm += Pv / 3.0;
      dP1 += Pv * gh.x;
      dP2 += Pv * gh.y;
      O1 += mat_of(omega.o1.data() + std::size_t(v) * std::size_t(m * m), m) / 3.0;
      O2 += mat_of(omega.o2.data() + std::size_t(v) * std::size_t(m * m), m) / 3.0;
    }
    Eigen::MatrixXd Pinv = Pm.inverse();
    // the discrete connection is projected onto so(m); the symmetric residue
    // is an O(h^2) quadrature artifact of the triangle-mean rotation
    Eigen::MatrixXd C1 = Pinv * (dP1 + O1 * Pm);
    Eigen::MatrixXd C2 = Pinv * (dP2 + O2 * Pm);
    rp.c1[std::size_t(t)] = 0.5 * (C1 - C1.transpose());
    rp.c2[std::size_t(t)] = 0.5 * (C2 - C2.transpose());
  }
  return rp;
}

double potential_energy(const RotatedPotential& rp, const TriMesh& msh) {
  double e = 0;
  for (int t = 0; t < msh.nt(); ++t)
    e += (rp.c1[std::size_t(t)].squaredNorm() + rp.c2[std::size_t(t)].squaredNorm()) *
         msh.tri_area[std::size_t(t)];
  return e;
}

// r_v = int Omega^P . grad phi_v  (equals -<div Omega^P, phi_v>)
std::vector<Eigen::MatrixXd> weak_div_potential(const RotatedPotential& rp, const TriMesh& msh) {
  const int m = int(rp.c1.front().rows());
  std::vector<Eigen::MatrixXd> r(std::size_t(msh.nv()), Eigen::MatrixXd::Zero(m, m));
  for (int t = 0; t < msh.nt(); ++t) {
    const auto& tr = msh.triangles[std::size_t(t)];
    const double area = msh.tri_area[std::size_t(t)];
    for (int c = 0; c < 3; ++c) {
      const Vec2 gh = msh.grad_hat[std::size_t(t)][std::size_t(c)];
      r[std::size_t(tr[std::size_t(c)])] +=
          (rp.c1[std::size_t(t)] * gh.x + rp.c2[std::size_t(t)] * gh.y) * area;
    }
  }
  return r;
}

double defect_norm(const std::vector<Eigen::MatrixXd>& r, const TriMesh& msh) {
  double s = 0;
  for (int i = 0; i < msh.nv(); ++i)
    s += r[std::size_t(i)].squaredNorm() / msh.vertex_area[std::size_t(i)];
  return std::sqrt(s);
}

}  // namespace

CoulombResult coulomb_gauge(const OmegaField& omega, const TriMesh& msh, double gate,
                            int max_iter) {
  const int m = omega.m, nv = msh.nv();
  omega.check_antisymmetry();
  CoulombResult out;
  out.omega_l2 = omega.l2_norm(msh);
  if (out.omega_l2 * out.omega_l2 >= gate)
    throw std::invalid_argument("coulomb_gauge: energy above the smallness gate");

  out.P = RotationField::identity(m, nv);
  mesh::PoissonSolver solver(msh);

  RotatedPotential rp = rotate_potential(omega, msh, out.P);
  const int n_entries = m * (m - 1) / 2;
  double merit = defect_norm(weak_div_potential(rp, msh), msh);

  // already-Coulomb acceptance: a potential that is divergence-free to
  // discretization accuracy keeps P = I (first-iteration acceptance)
  const double hmesh = msh.refinement_level > 0 ? 1.0 / double(1 << msh.refinement_level) : 0.1;
  const bool already = merit < hmesh * (out.omega_l2 + 1e-12);

  for (int it = 0; it < (already ? 0 : max_iter); ++it) {
    out.iterations = it;
    auto r = weak_div_potential(rp, msh);
    out.defect = defect_norm(r, msh);
    if (out.defect < 1e-7) break;

    // poisson-preconditioned step: eta solves the linearized discrete Coulomb
    // condition entrywise (natural boundary condition); backtracking on the
    // defect norm itself
    std::vector<std::vector<double>> eta{std::size_t(n_entries)};
    int e = 0;
    for (int a = 0; a < m; ++a)
      for (int b = a + 1; b < m; ++b) {
        std::vector<double> rhs(std::size_t(nv), 0.0);
        for (int i = 0; i < nv; ++i)
          rhs[std::size_t(i)] = -0.5 * (r[std::size_t(i)](a, b) - r[std::size_t(i)](b, a));
        mesh::SolveResult s = solver.solve_neumann(rhs);
        eta[std::size_t(e++)] = s.x;
      }

    double tau = 1.0;
    bool accepted = false;
    for (int bt = 0; bt < 40; ++bt) {
      RotationField Pnew = out.P;
      for (int i = 0; i < nv; ++i) {
        Eigen::MatrixXd H = Eigen::MatrixXd::Zero(m, m);
        int ee = 0;
        for (int a = 0; a < m; ++a)
          for (int b = a + 1; b < m; ++b) {
            const double v = tau * eta[std::size_t(ee++)][std::size_t(i)];
            H(a, b) = v;
            H(b, a) = -v;
          }
        Eigen::MatrixXd P0 = mat_of(out.P.at(i), m);
        store(project_so(P0 * (Eigen::MatrixXd::Identity(m, m) + H)), Pnew.at(i), m);
      }
      RotatedPotential rp_new = rotate_potential(omega, msh, Pnew);
      const double m_new = defect_norm(weak_div_potential(rp_new, msh), msh);
      if (m_new < merit * (1.0 - 1e-4 * tau)) {
        out.P = Pnew;
        rp = std::move(rp_new);
        merit = m_new;
        accepted = true;
        break;
      }
      tau *= 0.5;
    }
    if (!accepted) break;  // stagnation at the discrete optimum
  }
  {
    auto r = weak_div_potential(rp, msh);
    out.defect = defect_norm(r, msh);
  }

  // xi: grad xi = (Omega^P_2, -Omega^P_1) entrywise, xi = 0 on the boundary
  out.xi = FieldRm(msh, n_entries);
  {
    int e = 0;
    for (int a = 0; a < m; ++a)
      for (int b = a + 1; b < m; ++b) {
        std::vector<double> rhs(std::size_t(nv), 0.0);
        for (int t = 0; t < msh.nt(); ++t) {
          const auto& tr = msh.triangles[std::size_t(t)];
          const Vec2 w{rp.c2[std::size_t(t)](a, b), -rp.c1[std::size_t(t)](a, b)};
          for (int c = 0; c < 3; ++c)
            rhs[std::size_t(tr[std::size_t(c)])] +=
                w.dot(msh.grad_hat[std::size_t(t)][std::size_t(c)]) * msh.tri_area[std::size_t(t)];
        }
        mesh::SolveResult s = solver.solve_dirichlet0(rhs);
        for (int i = 0; i < nv; ++i) out.xi.at(i, e) = s.x[std::size_t(i)];
        ++e;
      }
  }

  // reconstruction residual and the gauge energy
  {
    mesh::TriGrad gxi = mesh::gradient_p1(out.xi);
    double res2 = 0, exi = 0, ep = 0;
    for (int t = 0; t < msh.nt(); ++t) {
      const auto& tr = msh.triangles[std::size_t(t)];
      Eigen::MatrixXd Pm = Eigen::MatrixXd::Zero(m, m), dP1 = Eigen::MatrixXd::Zero(m, m),
                      dP2 = Eigen::MatrixXd::Zero(m, m), O1 = Eigen::MatrixXd::Zero(m, m),
                      O2 = Eigen::MatrixXd::Zero(m, m);
      for (int c = 0; c < 3; ++c) {
        const int v = tr[std::size_t(c)];
        const Vec2 gh = msh.grad_hat[std::size_t(t)][std::size_t(c)];
        Eigen::MatrixXd Pv = mat_of(out.P.at(v), m);
        Pm += Pv / 3.0;
        dP1 += Pv * gh.x;
        dP2 += Pv * gh.y;
        O1 += mat_of(omega.o1.data() + std::size_t(v) * std::size_t(m * m), m) / 3.0;
        O2 += mat_of(omega.o2.data() + std::size_t(v) * std::size_t(m * m), m) / 3.0;
      }
      Eigen::MatrixXd X1 = Eigen::MatrixXd::Zero(m, m), X2 = Eigen::MatrixXd::Zero(m, m);
      int e = 0;
      for (int a = 0; a < m; ++a)
        for (int b = a + 1; b < m; ++b) {
          X1(a, b) = -gxi.gy(t, e);
          X1(b, a) = gxi.gy(t, e);
          X2(a, b) = gxi.gx(t, e);
          X2(b, a) = -gxi.gx(t, e);
          ++e;
        }
      Eigen::MatrixXd Pinv = Pm.inverse();
      Eigen::MatrixXd R1 = Pm * X1 * Pinv - dP1 * Pinv;
      Eigen::MatrixXd R2 = Pm * X2 * Pinv - dP2 * Pinv;
      const double area = msh.tri_area[std::size_t(t)];
      res2 += ((O1 - R1).squaredNorm() + (O2 - R2).squaredNorm()) * area;
      int ee = 0;
      for (int a = 0; a < m; ++a)
        for (int b = a + 1; b < m; ++b) {
          exi += 2.0 * (gxi.gx(t, ee) * gxi.gx(t, ee) + gxi.gy(t, ee) * gxi.gy(t, ee)) * area;
          ++ee;
        }
      ep += (dP1.squaredNorm() + dP2.squaredNorm()) * area;
    }
    out.recon_l2 = std::sqrt(res2);
    out.gauge_energy = exi + ep;
  }
  // dual-norm reconstruction residual: the misfit field tested against P1
  // functions and measured in the discrete H^{-1} norm (the L2 misfit is
  // dominated by irreducible O(h) interpolation error and is reported above)
  {
    mesh::TriGrad gxi = mesh::gradient_p1(out.xi);
    double total2 = 0;
    for (int comp = 0; comp < 2; ++comp)
      for (int a = 0; a < m; ++a)
        for (int b = a + 1; b < m; ++b) {
          std::vector<double> f(std::size_t(msh.nt()), 0.0);
          for (int t = 0; t < msh.nt(); ++t) {
            const auto& tr = msh.triangles[std::size_t(t)];
            Eigen::MatrixXd Pm = Eigen::MatrixXd::Zero(m, m), dP = Eigen::MatrixXd::Zero(m, m),
                            O = Eigen::MatrixXd::Zero(m, m);
            for (int c = 0; c < 3; ++c) {
              const int v = tr[std::size_t(c)];
              const Vec2 gh = msh.grad_hat[std::size_t(t)][std::size_t(c)];
              Eigen::MatrixXd Pv = mat_of(out.P.at(v), m);
              Pm += Pv / 3.0;
              dP += Pv * (comp == 0 ? gh.x : gh.y);
              O += mat_of((comp == 0 ? omega.o1 : omega.o2).data() +
                              std::size_t(v) * std::size_t(m * m),
                          m) / 3.0;
            }
            Eigen::MatrixXd X = Eigen::MatrixXd::Zero(m, m);
            int e = 0;
            for (int aa = 0; aa < m; ++aa)
              for (int bb = aa + 1; bb < m; ++bb) {
                const double v = comp == 0 ? -gxi.gy(t, e) : gxi.gx(t, e);
                X(aa, bb) = v;
                X(bb, aa) = -v;
                ++e;
              }
            Eigen::MatrixXd Pinv = Pm.inverse();
            Eigen::MatrixXd R = Pm * X * Pinv - dP * Pinv;
            f[std::size_t(t)] = O(a, b) - R(a, b);
          }
          std::vector<double> r = mesh::rhs_from_tri_density(msh, f);
          const double w = mesh::weak_hminus1(solver, r);
          total2 += w * w;
        }
    out.recon_residual = std::sqrt(2.0 * total2);  // both triangles of so(m)
  }
  return out;
}

ABResult construct_AB(const OmegaField& omega, const TriMesh& msh, const CoulombResult& cg,
                      int max_iter, double tol) {
  const int m = omega.m, nv = msh.nv(), nt = msh.nt();
  mesh::PoissonSolver solver(msh);

  mesh::TriGrad gxi = mesh::gradient_p1(cg.xi);
  std::vector<Eigen::MatrixXd> Pinv{std::size_t(nt)}, Pmat{std::size_t(nt)};
  for (int t = 0; t < nt; ++t) {
    const auto& tr = msh.triangles[std::size_t(t)];
    Eigen::MatrixXd P = Eigen::MatrixXd::Zero(m, m);
    for (int c = 0; c < 3; ++c) P += mat_of(cg.P.at(tr[std::size_t(c)]), m) / 3.0;
    Pmat[std::size_t(t)] = P;
    Pinv[std::size_t(t)] = P.inverse();
  }
  auto Pm_of = [&](int t) -> const Eigen::MatrixXd& { return Pmat[std::size_t(t)]; };
  auto xi_grad = [&](int t, int dir) {
    Eigen::MatrixXd X = Eigen::MatrixXd::Zero(m, m);
    int e = 0;
    for (int a = 0; a < m; ++a)
      for (int b = a + 1; b < m; ++b) {
        const double v = dir == 0 ? gxi.gx(t, e) : gxi.gy(t, e);
        X(a, b) = v;
        X(b, a) = -v;
        ++e;
      }
    return X;
  };

  FieldRm At(msh, m * m), B(msh, m * m);
  for (int i = 0; i < nv; ++i)
    for (int k = 0; k < m; ++k) At.at(i, k * m + k) = 1.0;

  ABResult out;
  double prev_update = -1;
  for (int it = 0; it < max_iter; ++it) {
    out.iterations = it + 1;
    mesh::TriGrad gA = mesh::gradient_p1(At);
    FieldRm At_new(msh, m * m), B_new(msh, m * m);

    // B from the end identity grad^perp B = -(grad At - At grad^perp xi) P^{-1}
    // (Dirichlet 0): weak curl form, int grad B . grad phi = int X . grad^perp phi
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) {
        std::vector<double> rhs(std::size_t(nv), 0.0);
        for (int t = 0; t < nt; ++t) {
          const auto& tr = msh.triangles[std::size_t(t)];
          Eigen::MatrixXd Am = Eigen::MatrixXd::Zero(m, m);
          for (int c = 0; c < 3; ++c)
            Am += mat_of(&At.v[std::size_t(tr[std::size_t(c)]) * std::size_t(m * m)], m) / 3.0;
          Eigen::MatrixXd Y1 = Eigen::MatrixXd::Zero(m, m), Y2 = Eigen::MatrixXd::Zero(m, m);
          for (int k = 0; k < m; ++k) {
            for (int l = 0; l < m; ++l) {
              Y1(k, l) = gA.gx(t, k * m + l);
              Y2(k, l) = gA.gy(t, k * m + l);
            }
          }
          // grad^perp xi components: (-d2 xi, d1 xi)
          const Eigen::MatrixXd X1m = -(Y1 - Am * (-xi_grad(t, 1))) * Pinv[std::size_t(t)];
          const Eigen::MatrixXd X2m = -(Y2 - Am * xi_grad(t, 0)) * Pinv[std::size_t(t)];
          // X = grad^perp B: components (X1, X2); int grad B . grad phi =
          // int (X2, -X1) . grad phi
          const Vec2 Xt{X2m(i, j), -X1m(i, j)};
          for (int c = 0; c < 3; ++c)
            rhs[std::size_t(tr[std::size_t(c)])] +=
                Xt.dot(msh.grad_hat[std::size_t(t)][std::size_t(c)]) * msh.tri_area[std::size_t(t)];
        }
        mesh::SolveResult s = solver.solve_dirichlet0(rhs);
        for (int v = 0; v < nv; ++v) B_new.at(v, i * m + j) = s.x[std::size_t(v)];
      }

    // At from grad At = At grad^perp xi - grad^perp B P (Neumann least squares,
    // normalized to mean(At) = Id)
    mesh::TriGrad gBn = mesh::gradient_p1(B_new);
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) {
        std::vector<double> rhs(std::size_t(nv), 0.0);
        for (int t = 0; t < nt; ++t) {
          const auto& tr = msh.triangles[std::size_t(t)];
          Eigen::MatrixXd Am = Eigen::MatrixXd::Zero(m, m);
          for (int c = 0; c < 3; ++c)
            Am += mat_of(&At.v[std::size_t(tr[std::size_t(c)]) * std::size_t(m * m)], m) / 3.0;
          Eigen::MatrixXd GB1 = Eigen::MatrixXd::Zero(m, m), GB2 = Eigen::MatrixXd::Zero(m, m);
          for (int k = 0; k < m; ++k)
            for (int l = 0; l < m; ++l) {
              GB1(k, l) = -gBn.gy(t, k * m + l);  // grad^perp B, first component
              GB2(k, l) = gBn.gx(t, k * m + l);
            }
          const Eigen::MatrixXd W1 = Am * (-xi_grad(t, 1)) - GB1 * Pm_of(t);
          const Eigen::MatrixXd W2 = Am * xi_grad(t, 0) - GB2 * Pm_of(t);
          const Vec2 Wt{W1(i, j), W2(i, j)};
          for (int c = 0; c < 3; ++c)
            rhs[std::size_t(tr[std::size_t(c)])] +=
                Wt.dot(msh.grad_hat[std::size_t(t)][std::size_t(c)]) * msh.tri_area[std::size_t(t)];
        }
        mesh::SolveResult s = solver.solve_neumann(rhs);
        for (int v = 0; v < nv; ++v)
          At_new.at(v, i * m + j) = s.x[std::size_t(v)] + (i == j ? 1.0 : 0.0);
      }

    double up2 = 0, sc2 = 0;
    for (std::size_t q = 0; q < At.v.size(); ++q) {
      double d = At_new.v[q] - At.v[q];
      up2 += d * d;
      d = B_new.v[q] - B.v[q];
      up2 += d * d;
      sc2 += At_new.v[q] * At_new.v[q] + B_new.v[q] * B_new.v[q];
    }
    const double update = std::sqrt(up2 / (sc2 + 1e-300));
    At = At_new;
    B = B_new;
    if (prev_update > 1e-14 && update > 1e-14)
      out.contraction = std::max(out.contraction, update / prev_update);
    prev_update = update;
    if (update < tol) {
      out.converged = true;
      break;
    }
  }

  out.A = FieldRm(msh, m * m);
  out.B = B;
  for (int i = 0; i < nv; ++i) {
    Eigen::MatrixXd Av =
        mat_of(&At.v[std::size_t(i) * std::size_t(m * m)], m) * mat_of(cg.P.at(i), m).transpose();
    store(Av, &out.A.v[std::size_t(i) * std::size_t(m * m)], m);
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(Av);
    double d2 = 0;
    for (int k = 0; k < m; ++k) {
      const double s = svd.singularValues()(k) - 1.0;
      d2 += s * s;
    }
    out.a_dist_so = std::max(out.a_dist_so, std::sqrt(d2));
  }

  // div(grad A - A Omega) in the dual norm
  {
    mesh::TriGrad gAf = mesh::gradient_p1(out.A);
    double total2 = 0;
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) {
        std::vector<Vec2> X(std::size_t(nt), Vec2{});
        for (int t = 0; t < nt; ++t) {
          const auto& tr = msh.triangles[std::size_t(t)];
          Eigen::MatrixXd Am = Eigen::MatrixXd::Zero(m, m), O1 = Eigen::MatrixXd::Zero(m, m),
                          O2 = Eigen::MatrixXd::Zero(m, m);
          for (int c = 0; c < 3; ++c) {
            const int v = tr[std::size_t(c)];
            Am += mat_of(&out.A.v[std::size_t(v) * std::size_t(m * m)], m) / 3.0;
            O1 += mat_of(omega.o1.data() + std::size_t(v) * std::size_t(m * m), m) / 3.0;
            O2 += mat_of(omega.o2.data() + std::size_t(v) * std::size_t(m * m), m) / 3.0;
          }
          const Eigen::MatrixXd AO1 = Am * O1, AO2 = Am * O2;
          X[std::size_t(t)] = {gAf.gx(t, i * m + j) - AO1(i, j), gAf.gy(t, i * m + j) - AO2(i, j)};
        }
        std::vector<double> r = mesh::weak_divergence(msh, X);
        const double w = mesh::weak_hminus1(solver, r);
        total2 += w * w;
      }
    out.conservation_defect = std::sqrt(total2);
  }
  return out;
}

EquivalenceReport conservation_equivalence_check(const FieldRm& u, const OmegaField& omega,
                                                 const FieldRm& A, const FieldRm& B) {
  const TriMesh& msh = *u.mesh;
  const int m = u.m, nt = msh.nt();
  mesh::PoissonSolver solver(msh);
  mesh::TriGrad gu = mesh::gradient_p1(u);
  EquivalenceReport rep;

  double lhs2 = 0, rhs2 = 0;
  for (int i = 0; i < m; ++i) {
    std::vector<Vec2> X(std::size_t(nt), Vec2{});
    for (int t = 0; t < nt; ++t) {
      const auto& tr = msh.triangles[std::size_t(t)];
      double x1 = 0, x2 = 0;
      for (int j = 0; j < m; ++j) {
        double Aij = 0, Bij = 0;
        for (int c = 0; c < 3; ++c) {
          Aij += A.at(tr[std::size_t(c)], i * m + j) / 3.0;
          Bij += B.at(tr[std::size_t(c)], i * m + j) / 3.0;
        }
        x1 += Aij * gu.gx(t, j) - Bij * (-gu.gy(t, j));
        x2 += Aij * gu.gy(t, j) - Bij * gu.gx(t, j);
      }
      X[std::size_t(t)] = {x1, x2};
    }
    std::vector<double> r = mesh::weak_divergence(msh, X);
    const double w = mesh::weak_hminus1(solver, r);
    lhs2 += w * w;

    std::vector<Vec2> G(std::size_t(nt), Vec2{});
    for (int t = 0; t < nt; ++t) G[std::size_t(t)] = {gu.gx(t, i), gu.gy(t, i)};
    std::vector<double> r2 = mesh::weak_divergence(msh, G);
    for (int t = 0; t < nt; ++t) {
      const auto& tr = msh.triangles[std::size_t(t)];
      for (int j = 0; j < m; ++j) {
        double cv[3];
        for (int c = 0; c < 3; ++c) {
          const std::size_t base = std::size_t(tr[std::size_t(c)]) * std::size_t(m * m);
          cv[c] = omega.o1[base + std::size_t(i * m + j)] * gu.gx(t, j) +
                  omega.o2[base + std::size_t(i * m + j)] * gu.gy(t, j);
        }
        const double area = msh.tri_area[std::size_t(t)];
        const double s = cv[0] + cv[1] + cv[2];
        for (int c = 0; c < 3; ++c)
          r2[std::size_t(tr[std::size_t(c)])] += area / 12.0 * (s + cv[c]);
      }
    }
    const double w2 = mesh::weak_hminus1(solver, r2);
    rhs2 += w2 * w2;
  }
  rep.lhs_residual = std::sqrt(lhs2);
  rep.rhs_residual = std::sqrt(rhs2);
  return rep;
}

OmegaField omega_from_sphere_map(const FieldRm& u) {
  const TriMesh& msh = *u.mesh;
  const int m = u.m;
  mesh::TriGrad g = mesh::gradient_p1(u);
  std::vector<double> gv(std::size_t(msh.nv()) * std::size_t(m) * 2, 0.0);
  std::vector<double> wsum(std::size_t(msh.nv()), 0.0);
  for (int t = 0; t < msh.nt(); ++t) {
    const auto& tr = msh.triangles[std::size_t(t)];
    const double area = msh.tri_area[std::size_t(t)];
    for (int c = 0; c < 3; ++c) {
      for (int k = 0; k < m; ++k) {
        gv[(std::size_t(tr[std::size_t(c)]) * std::size_t(m) + std::size_t(k)) * 2] +=
            area * g.gx(t, k);
        gv[(std::size_t(tr[std::size_t(c)]) * std::size_t(m) + std::size_t(k)) * 2 + 1] +=
            area * g.gy(t, k);
      }
      wsum[std::size_t(tr[std::size_t(c)])] += area;
    }
  }
  for (int i = 0; i < msh.nv(); ++i)
    for (int k = 0; k < 2 * m; ++k)
      gv[std::size_t(i) * std::size_t(m) * 2 + std::size_t(k)] /= wsum[std::size_t(i)];

  OmegaField om;
  om.m = m;
  om.nv = msh.nv();
  om.o1.assign(std::size_t(msh.nv()) * std::size_t(m * m), 0.0);
  om.o2.assign(om.o1.size(), 0.0);
  for (int i = 0; i < msh.nv(); ++i)
    for (int a = 0; a < m; ++a)
      for (int b = 0; b < m; ++b) {
        const double ga_x = gv[(std::size_t(i) * std::size_t(m) + std::size_t(a)) * 2];
        const double ga_y = gv[(std::size_t(i) * std::size_t(m) + std::size_t(a)) * 2 + 1];
        const double gb_x = gv[(std::size_t(i) * std::size_t(m) + std::size_t(b)) * 2];
        const double gb_y = gv[(std::size_t(i) * std::size_t(m) + std::size_t(b)) * 2 + 1];
        om.o1[std::size_t(i) * std::size_t(m * m) + std::size_t(a * m + b)] =
            u.at(i, a) * gb_x - u.at(i, b) * ga_x;
        om.o2[std::size_t(i) * std::size_t(m * m) + std::size_t(a * m + b)] =
            u.at(i, a) * gb_y - u.at(i, b) * ga_y;
      }
  return om;
}

OmegaField omega_from_cmc(const FieldRm& u, double H) {
  const TriMesh& msh = *u.mesh;
  if (u.m != 3) throw std::invalid_argument("omega_from_cmc: m == 3 required");
  mesh::TriGrad g = mesh::gradient_p1(u);
  std::vector<double> gv(std::size_t(msh.nv()) * 6, 0.0);
  std::vector<double> wsum(std::size_t(msh.nv()), 0.0);
  for (int t = 0; t < msh.nt(); ++t) {
    const auto& tr = msh.triangles[std::size_t(t)];
    const double area = msh.tri_area[std::size_t(t)];
    for (int c = 0; c < 3; ++c) {
      for (int k = 0; k < 3; ++k) {
        gv[std::size_t(tr[std::size_t(c)]) * 6 + std::size_t(2 * k)] += area * g.gx(t, k);
        gv[std::size_t(tr[std::size_t(c)]) * 6 + std::size_t(2 * k + 1)] += area * g.gy(t, k);
      }
      wsum[std::size_t(tr[std::size_t(c)])] += area;
    }
  }
  for (int i = 0; i < msh.nv(); ++i)
    for (int k = 0; k < 6; ++k) gv[std::size_t(i) * 6 + std::size_t(k)] /= wsum[std::size_t(i)];

  OmegaField om;
  om.m = 3;
  om.nv = msh.nv();
  om.o1.assign(std::size_t(msh.nv()) * 9, 0.0);
  om.o2.assign(om.o1.size(), 0.0);
  for (int i = 0; i < msh.nv(); ++i) {
    double p1[3], p2[3];  // grad^perp u_k = (-d2 u_k, d1 u_k)
    for (int k = 0; k < 3; ++k) {
      p1[k] = -gv[std::size_t(i) * 6 + std::size_t(2 * k + 1)];
      p2[k] = gv[std::size_t(i) * 6 + std::size_t(2 * k)];
    }
    // sign: the entries are chosen so that -Delta u = Omega . grad u holds
    // for solutions of Delta u = 2H u_x x u_y with our cross orientation
    auto set = [&](int a, int b, double c1, double c2) {
      om.o1[std::size_t(i) * 9 + std::size_t(a * 3 + b)] = -H * c1;
      om.o2[std::size_t(i) * 9 + std::size_t(a * 3 + b)] = -H * c2;
      om.o1[std::size_t(i) * 9 + std::size_t(b * 3 + a)] = H * c1;
      om.o2[std::size_t(i) * 9 + std::size_t(b * 3 + a)] = H * c2;
    };
    set(0, 1, -p1[2], -p2[2]);
    set(0, 2, p1[1], p2[1]);
    set(1, 2, -p1[0], -p2[0]);
  }
  return om;
}

OmegaField random_so3_omega(const TriMesh& msh, double amplitude, unsigned seed) {
  std::mt19937 rng(seed);
  std::normal_distribution<double> N(0, 1);
  double c[3][6];
  for (auto& row : c)
    for (auto& v : row) v = N(rng);
  OmegaField om;
  om.m = 3;
  om.nv = msh.nv();
  om.o1.assign(std::size_t(msh.nv()) * 9, 0.0);
  om.o2.assign(om.o1.size(), 0.0);
  for (int i = 0; i < msh.nv(); ++i) {
    const Vec2 p = msh.vertices[std::size_t(i)];
    int e = 0;
    for (int a = 0; a < 3; ++a)
      for (int b = a + 1; b < 3; ++b) {
        const double v1 =
            amplitude * (c[e][0] * std::sin(kPi * p.x) + c[e][1] * std::cos(kPi * p.y) +
                         c[e][2] * std::sin(kPi * p.x * p.y));
        const double v2 =
            amplitude * (c[e][3] * std::cos(kPi * p.x) + c[e][4] * std::sin(kPi * p.y) +
                         c[e][5] * std::cos(kPi * (p.x - p.y)));
        om.o1[std::size_t(i) * 9 + std::size_t(a * 3 + b)] = v1;
        om.o1[std::size_t(i) * 9 + std::size_t(b * 3 + a)] = -v1;
        om.o2[std::size_t(i) * 9 + std::size_t(a * 3 + b)] = v2;
        om.o2[std::size_t(i) * 9 + std::size_t(b * 3 + a)] = -v2;
        ++e;
      }
  }
  return om;
}

OmegaField divfree_omega(const TriMesh& msh, double amplitude, unsigned seed) {
  std::mt19937 rng(seed);
  std::normal_distribution<double> N(0, 1);
  double c[3][3];
  for (auto& row : c)
    for (auto& v : row) v = N(rng);
  OmegaField om;
  om.m = 3;
  om.nv = msh.nv();
  om.o1.assign(std::size_t(msh.nv()) * 9, 0.0);
  om.o2.assign(om.o1.size(), 0.0);
  // xi entry (1 - r^2)(c0 + c1 x + c2 y) vanishes on the boundary; the
  // potential is its exact perp gradient
  for (int i = 0; i < msh.nv(); ++i) {
    const Vec2 p = msh.vertices[std::size_t(i)];
    int e = 0;
    for (int a = 0; a < 3; ++a)
      for (int b = a + 1; b < 3; ++b) {
        const double w = 1.0 - p.dot(p);
        const double f = c[e][0] + c[e][1] * p.x + c[e][2] * p.y;
        const double dx = -2 * p.x * f + w * c[e][1];
        const double dy = -2 * p.y * f + w * c[e][2];
        om.o1[std::size_t(i) * 9 + std::size_t(a * 3 + b)] = -amplitude * dy;
        om.o1[std::size_t(i) * 9 + std::size_t(b * 3 + a)] = amplitude * dy;
        om.o2[std::size_t(i) * 9 + std::size_t(a * 3 + b)] = amplitude * dx;
        om.o2[std::size_t(i) * 9 + std::size_t(b * 3 + a)] = -amplitude * dx;
        ++e;
      }
  }
  return om;
}

}  // namespace conflab::gauge
