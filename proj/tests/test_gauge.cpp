#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "conflab/gauge/gauge.hpp"

using namespace conflab;
using namespace conflab::gauge;
using comp::OmegaField;

TEST_CASE("coulomb gauge: zero potential gives P = I, xi = 0") {
  TriMesh msh = mesh::build_disc_mesh(4);
  OmegaField zero;
  zero.m = 3;
  zero.nv = msh.nv();
  zero.o1.assign(size_t(msh.nv()) * 9, 0.0);
  zero.o2.assign(zero.o1.size(), 0.0);
  CoulombResult r = coulomb_gauge(zero, msh);
  CHECK(r.defect < 1e-10);
  CHECK(r.P.max_orthogonality_defect() < 1e-12);
  for (double v : r.xi.v) CHECK(std::fabs(v) < 1e-10);
  CHECK(r.recon_residual < 1e-10);
}

TEST_CASE("coulomb gauge: divergence-free potential accepted immediately, xi recovered") {
  TriMesh msh = mesh::build_disc_mesh(5);
  OmegaField om = divfree_omega(msh, 0.15, 3);
  CoulombResult r = coulomb_gauge(om, msh);
  // accepted at P = I: the reported defect is the discretization-level weak
  // divergence of the sampled potential
  CHECK(r.iterations == 0);
  CHECK(r.defect < (1.0 / 32.0) * r.omega_l2);
  CHECK(r.P.max_orthogonality_defect() < 1e-10);
  CHECK(r.P.min_det() > 0.5);
  // recovered xi equals the generating xi0 up to discretization
  std::mt19937 rng(3);
  std::normal_distribution<double> N(0, 1);
  double c[3][3];
  for (auto& row : c)
    for (auto& v : row) v = N(rng);
  double dmax = 0;
  for (int i = 0; i < msh.nv(); ++i) {
    const mesh::Vec2 p = msh.vertices[size_t(i)];
    const double w = 1.0 - p.dot(p);
    int e = 0;
    for (int a = 0; a < 3; ++a)
      for (int b = a + 1; b < 3; ++b) {
        const double xi0 = 0.15 * w * (c[e][0] + c[e][1] * p.x + c[e][2] * p.y);
        dmax = std::max(dmax, std::fabs(r.xi.at(i, e) - xi0));
        ++e;
      }
  }
  CHECK(dmax < 1e-3);  // exact up to the P1 discretization of the solve
  CHECK(r.recon_residual < 1e-2);
}

TEST_CASE("coulomb gauge: random small so(3) potential") {
  TriMesh msh = mesh::build_disc_mesh(5);
  OmegaField om = random_so3_omega(msh, 0.05, 11);
  CoulombResult r = coulomb_gauge(om, msh);
  CHECK(r.defect < 1e-6);
  CHECK(r.P.max_orthogonality_defect() < 1e-10);
  CHECK(r.P.min_det() > 0.5);
  CHECK(r.recon_residual < 1e-2 * (1.0 + r.omega_l2));
  // gauge-energy bound with a measured constant
  CHECK(r.gauge_energy < 100.0 * r.omega_l2 * r.omega_l2 + 1e-6);
  CHECK(coulomb_gauge(om, msh).defect == r.defect);  // deterministic
}

TEST_CASE("coulomb gauge: energy gate enforced") {
  TriMesh msh = mesh::build_disc_mesh(3);
  OmegaField om = random_so3_omega(msh, 30.0, 1);
  CHECK_THROWS(coulomb_gauge(om, msh));
}

TEST_CASE("gauge covariance: constant conjugation leaves defect and |xi| invariant") {
  TriMesh msh = mesh::build_disc_mesh(4);
  OmegaField om = random_so3_omega(msh, 0.05, 17);
  CoulombResult r1 = coulomb_gauge(om, msh);
  // conjugate by a fixed rotation Q (rotation about z by 0.7)
  const double ct = std::cos(0.7), st = std::sin(0.7);
  const double Q[9] = {ct, -st, 0, st, ct, 0, 0, 0, 1};
  OmegaField om2 = om;
  auto conj = [&](std::vector<double>& o) {
    for (int i = 0; i < msh.nv(); ++i) {
      double M[9], T[9];
      for (int k = 0; k < 9; ++k) M[k] = o[size_t(i) * 9 + size_t(k)];
      // T = Q M Q^T
      for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b) {
          double s = 0;
          for (int p = 0; p < 3; ++p)
            for (int q = 0; q < 3; ++q) s += Q[a * 3 + p] * M[p * 3 + q] * Q[b * 3 + q];
          T[a * 3 + b] = s;
        }
      for (int k = 0; k < 9; ++k) o[size_t(i) * 9 + size_t(k)] = T[k];
    }
  };
  conj(om2.o1);
  conj(om2.o2);
  CoulombResult r2 = coulomb_gauge(om2, msh);
  CHECK(std::fabs(r1.defect - r2.defect) < 1e-7);
  double n1 = 0, n2 = 0;
  for (int i = 0; i < msh.nv(); ++i) {
    for (int e = 0; e < 3; ++e) {
      n1 += r1.xi.at(i, e) * r1.xi.at(i, e) * msh.vertex_area[size_t(i)];
      n2 += r2.xi.at(i, e) * r2.xi.at(i, e) * msh.vertex_area[size_t(i)];
    }
  }
  CHECK(std::sqrt(n1) == doctest::Approx(std::sqrt(n2)).epsilon(1e-4));
}

TEST_CASE("construct_AB: zero potential gives A = I, B = 0") {
  TriMesh msh = mesh::build_disc_mesh(4);
  OmegaField zero;
  zero.m = 3;
  zero.nv = msh.nv();
  zero.o1.assign(size_t(msh.nv()) * 9, 0.0);
  zero.o2.assign(zero.o1.size(), 0.0);
  CoulombResult cg = coulomb_gauge(zero, msh);
  ABResult ab = construct_AB(zero, msh, cg);
  CHECK(ab.converged);
  for (int i = 0; i < msh.nv(); ++i)
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b) {
        CHECK(std::fabs(ab.A.at(i, a * 3 + b) - (a == b ? 1.0 : 0.0)) < 1e-10);
        CHECK(std::fabs(ab.B.at(i, a * 3 + b)) < 1e-10);
      }
}

TEST_CASE("construct_AB: divergence-free case reproduces A = I, B = xi") {
  TriMesh msh = mesh::build_disc_mesh(5);
  OmegaField om = divfree_omega(msh, 0.12, 5);
  CoulombResult cg = coulomb_gauge(om, msh);
  ABResult ab = construct_AB(om, msh, cg);
  CHECK(ab.converged);
  double da = 0, db = 0;
  for (int i = 0; i < msh.nv(); ++i) {
    int e = 0;
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b) {
        da = std::max(da, std::fabs(ab.A.at(i, a * 3 + b) - (a == b ? 1.0 : 0.0)));
        if (b > a) {
          db = std::max(db, std::fabs(ab.B.at(i, a * 3 + b) - cg.xi.at(i, e)));
          ++e;
        }
      }
  }
  CHECK(da < 1e-6);
  CHECK(db < 1e-6);
}

TEST_CASE("construct_AB: random small potential, contraction and defect") {
  TriMesh msh = mesh::build_disc_mesh(5);
  OmegaField om = random_so3_omega(msh, 0.05, 23);
  CoulombResult cg = coulomb_gauge(om, msh);
  ABResult ab = construct_AB(om, msh, cg);
  CHECK(ab.converged);
  CHECK(ab.contraction < 0.9);
  CHECK(ab.a_dist_so < 0.5);
  CHECK(ab.conservation_defect < 1e-5);
}

TEST_CASE("conservation equivalence on a manufactured schrodinger solution") {
  TriMesh msh = mesh::build_disc_mesh(5);
  OmegaField om = random_so3_omega(msh, 0.03, 29);
  FieldRm bc = FieldRm::sample(msh, 3, [](mesh::Vec2 p) {
    return std::vector<double>{0.2 * p.x, 0.2 * p.y, 0.1 * (p.x * p.x - p.y * p.y)};
  });
  comp::SchrodingerResult sr = comp::schrodinger_linear_solve(om, bc);
  REQUIRE(sr.converged);
  CoulombResult cg = coulomb_gauge(om, msh);
  ABResult ab = construct_AB(om, msh, cg);
  EquivalenceReport eq = conservation_equivalence_check(sr.w, om, ab.A, ab.B);
  CHECK(eq.rhs_residual < 1e-6);  // u solves its own equation
  CHECK(eq.lhs_residual < 1e-5);  // and the conservation law follows

  // harmonic u with Omega = 0, A = I, B = 0: both residuals vanish
  OmegaField zero;
  zero.m = 3;
  zero.nv = msh.nv();
  zero.o1.assign(size_t(msh.nv()) * 9, 0.0);
  zero.o2.assign(zero.o1.size(), 0.0);
  comp::SchrodingerResult h = comp::schrodinger_linear_solve(zero, bc);
  FieldRm I(msh, 9), Z(msh, 9);
  for (int i = 0; i < msh.nv(); ++i)
    for (int k = 0; k < 3; ++k) I.at(i, k * 3 + k) = 1.0;
  EquivalenceReport eq0 = conservation_equivalence_check(h.w, zero, I, Z);
  CHECK(eq0.lhs_residual < 1e-8);
  CHECK(eq0.rhs_residual < 1e-8);
}

TEST_CASE("omega from geometry: antisymmetric and consistent with the source") {
  TriMesh msh = mesh::build_disc_mesh(5);
  FieldRm u = comp::stereographic_map(msh, 1.0);
  OmegaField om = omega_from_sphere_map(u);
  om.check_antisymmetry();

  // constant map -> zero potential
  FieldRm c(msh, 3);
  for (int i = 0; i < msh.nv(); ++i) c.at(i, 0) = 1.0;
  OmegaField omc = omega_from_sphere_map(c);
  for (double v : omc.o1) CHECK(std::fabs(v) < 1e-12);

  // the source u nearly solves -Delta u = Omega . grad u (refinement study)
  auto residual_at = [](int level) {
    TriMesh m = mesh::build_disc_mesh(level);
    FieldRm uu = comp::stereographic_map(m, 1.0);
    OmegaField o = omega_from_sphere_map(uu);
    comp::SchrodingerResult s = comp::schrodinger_linear_solve(o, uu, 50.0, 0);  // no iteration
    (void)s;
    // assemble the residual of uu directly
    mesh::PoissonSolver solver(m);
    mesh::TriGrad g = mesh::gradient_p1(uu);
    double t2 = 0;
    for (int k = 0; k < 3; ++k) {
      std::vector<mesh::Vec2> X(size_t(m.nt()), mesh::Vec2{});
      for (int t = 0; t < m.nt(); ++t) X[size_t(t)] = {g.gx(t, k), g.gy(t, k)};
      std::vector<double> r = mesh::weak_divergence(m, X);
      for (int t = 0; t < m.nt(); ++t) {
        const auto& tr = m.triangles[size_t(t)];
        for (int j = 0; j < 3; ++j) {
          double cv[3];
          for (int cc = 0; cc < 3; ++cc) {
            const size_t base = size_t(tr[size_t(cc)]) * 9;
            cv[cc] = o.o1[base + size_t(k * 3 + j)] * g.gx(t, j) +
                     o.o2[base + size_t(k * 3 + j)] * g.gy(t, j);
          }
          const double area = m.tri_area[size_t(t)];
          const double s = cv[0] + cv[1] + cv[2];
          for (int cc = 0; cc < 3; ++cc)
            r[size_t(tr[size_t(cc)])] += area / 12.0 * (s + cv[cc]);
        }
      }
      const double w = mesh::weak_l2_density(m, r);
      t2 += w * w;
    }
    return std::sqrt(t2);
  };
  const double r4 = residual_at(4), r5 = residual_at(5);
  CHECK(r5 < r4);

  // CMC source: the cap solves -Delta u = Omega . grad u with its own
  // potential, at a residual decreasing under refinement
  auto cmc_residual_at = [](int level) {
    TriMesh m = mesh::build_disc_mesh(level);
    FieldRm cap = comp::cap_solution(m, 0.5);
    OmegaField o = omega_from_cmc(cap, 1.0);
    o.check_antisymmetry();
    mesh::TriGrad g = mesh::gradient_p1(cap);
    double t2 = 0;
    for (int k = 0; k < 3; ++k) {
      std::vector<mesh::Vec2> X(size_t(m.nt()), mesh::Vec2{});
      for (int t = 0; t < m.nt(); ++t) X[size_t(t)] = {g.gx(t, k), g.gy(t, k)};
      std::vector<double> r = mesh::weak_divergence(m, X);
      for (int t = 0; t < m.nt(); ++t) {
        const auto& tr = m.triangles[size_t(t)];
        for (int j = 0; j < 3; ++j) {
          double cv[3];
          for (int cc = 0; cc < 3; ++cc) {
            const size_t base = size_t(tr[size_t(cc)]) * 9;
            cv[cc] = o.o1[base + size_t(k * 3 + j)] * g.gx(t, j) +
                     o.o2[base + size_t(k * 3 + j)] * g.gy(t, j);
          }
          const double area = m.tri_area[size_t(t)];
          const double sc = cv[0] + cv[1] + cv[2];
          for (int cc = 0; cc < 3; ++cc)
            r[size_t(tr[size_t(cc)])] += area / 12.0 * (sc + cv[cc]);
        }
      }
      const double w = mesh::weak_l2_density(m, r);
      t2 += w * w;
    }
    return std::sqrt(t2);
  };
  CHECK(cmc_residual_at(5) < cmc_residual_at(4));
}
