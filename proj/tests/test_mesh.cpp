#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "conflab/mesh/trimesh.hpp"

using namespace conflab::mesh;
constexpr double kPi = std::numbers::pi;

TEST_CASE("disc mesh level 0 is the 6-triangle fan") {
  TriMesh m = build_disc_mesh(0);
  CHECK(m.nt() == 6);
  CHECK(m.nv() == 7);
  CHECK(m.total_area == doctest::Approx(6 * 0.5 * std::sin(kPi / 3)).epsilon(1e-14));
  CHECK(m.total_area < kPi);
}

TEST_CASE("disc mesh areas increase to pi; counts deterministic") {
  double prev = 0;
  for (int level = 0; level <= 6; ++level) {
    TriMesh m = build_disc_mesh(level);
    const int n = 1 << level;
    CHECK(m.nv() == 1 + 3 * n * (n + 1));
    CHECK(m.nt() == 6 * n * n);
    CHECK(m.total_area > prev);
    prev = m.total_area;
  }
  CHECK(std::fabs(prev - kPi) < 1e-3);  // level 6
}

TEST_CASE("boundary vertices on the unit circle; quality floor") {
  for (int level : {0, 2, 4, 5}) {
    TriMesh m = build_disc_mesh(level);
    CHECK(int(m.boundary_loop.size()) == 6 * (1 << level));
    for (int b : m.boundary_loop)
      CHECK(std::fabs(m.vertices[size_t(b)].norm() - 1.0) < 1e-12);
    CHECK(m.min_angle_deg >= 20.0);
  }
}

TEST_CASE("level range is validated") {
  CHECK_THROWS(build_disc_mesh(-1));
  CHECK_THROWS(build_disc_mesh(10));
}

TEST_CASE("vertex areas sum to mesh area") {
  TriMesh m = build_disc_mesh(3);
  double s = 0;
  for (double a : m.vertex_area) s += a;
  CHECK(s == doctest::Approx(m.total_area).epsilon(1e-13));
}

TEST_CASE("point location") {
  TriMesh m = build_disc_mesh(4);
  std::mt19937 rng(2);
  std::uniform_real_distribution<double> U(-1, 1);
  for (int rep = 0; rep < 500; ++rep) {
    const Vec2 p{U(rng) * 0.7, U(rng) * 0.7};
    const int t = m.locate(p);
    REQUIRE(t >= 0);
    const auto& tr = m.triangles[size_t(t)];
    const Vec2 a = m.vertices[size_t(tr[0])], b = m.vertices[size_t(tr[1])], c = m.vertices[size_t(tr[2])];
    CHECK((b - a).cross(p - a) >= -1e-9);
    CHECK((c - b).cross(p - b) >= -1e-9);
    CHECK((a - c).cross(p - c) >= -1e-9);
  }
  CHECK(m.locate({2.0, 0.0}) == -1);
}

TEST_CASE("clipped areas tile a ball inside the mesh") {
  TriMesh m = build_disc_mesh(4);
  const Vec2 c{0.21, -0.13};
  const double rho = 0.4;
  double s = 0;
  for (int t = 0; t < m.nt(); ++t) s += clipped_tri_area(m, t, c, rho);
  CHECK(s == doctest::Approx(kPi * rho * rho).epsilon(1e-12));
  // ball covering the whole mesh returns total area
  double s2 = 0;
  for (int t = 0; t < m.nt(); ++t) s2 += clipped_tri_area(m, t, {0, 0}, 3.0);
  CHECK(s2 == doctest::Approx(m.total_area).epsilon(1e-13));
}

TEST_CASE("annulus mesh: geometric grading, two boundary loops") {
  TriMesh m = build_annulus_mesh(0.01, 32, 48);
  CHECK(int(m.boundary_loop.size()) == 48);
  CHECK(int(m.inner_loop.size()) == 48);
  for (int b : m.boundary_loop) CHECK(std::fabs(m.vertices[size_t(b)].norm() - 1.0) < 1e-12);
  for (int b : m.inner_loop) CHECK(std::fabs(m.vertices[size_t(b)].norm() - 0.01) < 1e-12);
  CHECK(m.total_area < kPi);
  CHECK(m.total_area > 0.9 * kPi * (1 - 0.01 * 0.01) * 0.95);
}
