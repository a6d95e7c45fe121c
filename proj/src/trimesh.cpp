#include "conflab/mesh/trimesh.hpp"

#include <algorithm>
#include <cstdio>
#include <numbers>
#include <stdexcept>

#include "conflab/core/parallel.hpp"

namespace conflab::mesh {

namespace {
constexpr double kPi = std::numbers::pi;

double signed_area(Vec2 a, Vec2 b, Vec2 c) { return 0.5 * (b - a).cross(c - a); }

// stitch ring (inner, cin vertices starting at base_in) to ring (outer, cout
// vertices starting at base_out), both CCW and angularly uniform
void stitch(std::vector<std::array<int, 3>>& tris, int base_in, int cin, int base_out, int cout) {
  int io = 0, oo = 0;
  const double da_in = 2.0 * kPi / cin, da_out = 2.0 * kPi / cout;
  while (io < cin || oo < cout) {
    const double next_out = (oo + 1) * da_out;
    const double next_in = (io + 1) * da_in;
    if (oo < cout && (io == cin || next_out <= next_in + 1e-14)) {
      tris.push_back({base_out + (oo % cout), base_out + ((oo + 1) % cout), base_in + (io % cin)});
      ++oo;
    } else {
      tris.push_back({base_out + (oo % cout), base_in + ((io + 1) % cin), base_in + (io % cin)});
      ++io;
    }
  }
}
}  // namespace

void TriMesh::finalize() {
  const int ntri = nt();
  tri_area.assign(size_t(ntri), 0.0);
  grad_hat.assign(size_t(ntri), {});
  vertex_area.assign(size_t(nv()), 0.0);
  is_boundary.assign(size_t(nv()), 0);
  for (int b : boundary_loop) is_boundary[size_t(b)] = 1;
  for (int b : inner_loop) is_boundary[size_t(b)] = 1;

  min_angle_deg = 180.0;
  total_area = 0.0;
  for (int t = 0; t < ntri; ++t) {
    auto& tr = triangles[size_t(t)];
    Vec2 a = vertices[size_t(tr[0])], b = vertices[size_t(tr[1])], c = vertices[size_t(tr[2])];
    double A = signed_area(a, b, c);
    if (A < 0) { std::swap(tr[1], tr[2]); std::swap(b, c); A = -A; }
    if (A <= 0) throw std::runtime_error("degenerate triangle");
    tri_area[size_t(t)] = A;
    total_area += A;
    const double inv2A = 1.0 / (2.0 * A);
    grad_hat[size_t(t)][0] = perp(c - b) * inv2A;
    grad_hat[size_t(t)][1] = perp(a - c) * inv2A;
    grad_hat[size_t(t)][2] = perp(b - a) * inv2A;
    for (int k = 0; k < 3; ++k) vertex_area[size_t(tr[k])] += A / 3.0;
    const double la = (c - b).norm(), lb = (a - c).norm(), lc = (b - a).norm();
    const double angs[3] = {std::acos(std::clamp((lb * lb + lc * lc - la * la) / (2 * lb * lc), -1.0, 1.0)),
                            std::acos(std::clamp((la * la + lc * lc - lb * lb) / (2 * la * lc), -1.0, 1.0)),
                            std::acos(std::clamp((la * la + lb * lb - lc * lc) / (2 * la * lb), -1.0, 1.0))};
    for (double ang : angs) min_angle_deg = std::min(min_angle_deg, ang * 180.0 / kPi);
  }

  // uniform grid index over the bounding box
  double x0 = 1e300, y0 = 1e300, x1 = -1e300, y1 = -1e300;
  for (const auto& p : vertices) {
    x0 = std::min(x0, p.x); y0 = std::min(y0, p.y);
    x1 = std::max(x1, p.x); y1 = std::max(y1, p.y);
  }
  grid_n_ = std::max(4, int(std::sqrt(double(ntri))));
  grid_x0_ = x0; grid_y0_ = y0;
  grid_h_ = std::max(x1 - x0, y1 - y0) / grid_n_ + 1e-300;
  grid_cells_.assign(size_t(grid_n_) * size_t(grid_n_), {});
  for (int t = 0; t < ntri; ++t) {
    const auto& tr = triangles[size_t(t)];
    double tx0 = 1e300, ty0 = 1e300, tx1 = -1e300, ty1 = -1e300;
    for (int k = 0; k < 3; ++k) {
      const Vec2 p = vertices[size_t(tr[k])];
      tx0 = std::min(tx0, p.x); ty0 = std::min(ty0, p.y);
      tx1 = std::max(tx1, p.x); ty1 = std::max(ty1, p.y);
    }
    const int i0 = std::clamp(int((tx0 - grid_x0_) / grid_h_), 0, grid_n_ - 1);
    const int i1 = std::clamp(int((tx1 - grid_x0_) / grid_h_), 0, grid_n_ - 1);
    const int j0 = std::clamp(int((ty0 - grid_y0_) / grid_h_), 0, grid_n_ - 1);
    const int j1 = std::clamp(int((ty1 - grid_y0_) / grid_h_), 0, grid_n_ - 1);
    for (int i = i0; i <= i1; ++i)
      for (int j = j0; j <= j1; ++j)
        grid_cells_[size_t(j) * size_t(grid_n_) + size_t(i)].push_back(t);
  }
}

int TriMesh::locate(Vec2 p) const {
  const int i = std::clamp(int((p.x - grid_x0_) / grid_h_), 0, grid_n_ - 1);
  const int j = std::clamp(int((p.y - grid_y0_) / grid_h_), 0, grid_n_ - 1);
  const double eps = -1e-12;
  for (int t : grid_cells_[size_t(j) * size_t(grid_n_) + size_t(i)]) {
    const auto& tr = triangles[size_t(t)];
    const Vec2 a = vertices[size_t(tr[0])], b = vertices[size_t(tr[1])], c = vertices[size_t(tr[2])];
    const double A = 2.0 * tri_area[size_t(t)];
    if ((b - a).cross(p - a) / A >= eps && (c - b).cross(p - b) / A >= eps &&
        (a - c).cross(p - c) / A >= eps)
      return t;
  }
  return -1;
}

TriMesh build_disc_mesh(int level) {
  if (level < 0 || level > 9) throw std::invalid_argument("build_disc_mesh: level in [0,9]");
  const int n = 1 << level;
  TriMesh m;
  m.refinement_level = level;
  m.vertices.push_back({0.0, 0.0});
  std::vector<int> ring_base(size_t(n) + 1, 0);
  for (int j = 1; j <= n; ++j) {
    ring_base[size_t(j)] = int(m.vertices.size());
    const int cj = 6 * j;
    const double r = double(j) / double(n);
    for (int k = 0; k < cj; ++k) {
      const double th = 2.0 * kPi * k / cj;
      m.vertices.push_back({r * std::cos(th), r * std::sin(th)});
    }
  }
  for (int k = 0; k < 6; ++k) m.triangles.push_back({0, ring_base[1] + k, ring_base[1] + (k + 1) % 6});
  for (int j = 2; j <= n; ++j)
    stitch(m.triangles, ring_base[size_t(j) - 1], 6 * (j - 1), ring_base[size_t(j)], 6 * j);
  const int cb = 6 * n;
  for (int k = 0; k < cb; ++k) m.boundary_loop.push_back(ring_base[size_t(n)] + k);
  m.finalize();
  return m;
}

TriMesh build_annulus_mesh(double r_inner, int n_radial, int n_angular) {
  if (!(r_inner > 0 && r_inner < 1)) throw std::invalid_argument("annulus: 0 < r_inner < 1");
  TriMesh m;
  for (int j = 0; j <= n_radial; ++j) {
    const double r = std::pow(r_inner, double(n_radial - j) / double(n_radial));
    for (int k = 0; k < n_angular; ++k) {
      const double th = 2.0 * kPi * k / n_angular;
      m.vertices.push_back({r * std::cos(th), r * std::sin(th)});
    }
  }
  for (int j = 0; j < n_radial; ++j) {
    const int b0 = j * n_angular, b1 = (j + 1) * n_angular;
    for (int k = 0; k < n_angular; ++k) {
      const int k1 = (k + 1) % n_angular;
      m.triangles.push_back({b0 + k, b1 + k, b1 + k1});
      m.triangles.push_back({b0 + k, b1 + k1, b0 + k1});
    }
  }
  for (int k = 0; k < n_angular; ++k) m.boundary_loop.push_back(n_radial * n_angular + k);
  for (int k = 0; k < n_angular; ++k) m.inner_loop.push_back(k);
  m.finalize();
  return m;
}

namespace {
// signed contribution of the oriented segment p1 -> p2 (relative to circle
// center) to the area of the clip region, Green's theorem form
double segment_contrib(Vec2 p1, Vec2 p2, double r) {
  auto chord = [&](Vec2 a, Vec2 b) { return 0.5 * a.cross(b); };
  auto arc = [&](Vec2 a, Vec2 b) {
    double dth = std::atan2(b.y, b.x) - std::atan2(a.y, a.x);
    if (dth > kPi) dth -= 2 * kPi;
    if (dth < -kPi) dth += 2 * kPi;
    return 0.5 * r * r * dth;
  };
  // intersection params of |p1 + t d| = r
  const Vec2 d = p2 - p1;
  const double A = d.dot(d), B = 2 * p1.dot(d), C = p1.dot(p1) - r * r;
  double ts[2];
  int nts = 0;
  const double disc = B * B - 4 * A * C;
  if (disc > 0 && A > 0) {
    const double sq = std::sqrt(disc);
    double t0 = (-B - sq) / (2 * A), t1 = (-B + sq) / (2 * A);
    if (t0 > 1e-14 && t0 < 1 - 1e-14) ts[nts++] = t0;
    if (t1 > 1e-14 && t1 < 1 - 1e-14) ts[nts++] = t1;
  }
  double total = 0.0, tprev = 0.0;
  Vec2 prev = p1;
  for (int k = 0; k <= nts; ++k) {
    const double tnext = (k == nts) ? 1.0 : ts[k];
    const Vec2 next = p1 + d * tnext;
    const Vec2 mid = p1 + d * (0.5 * (tprev + tnext));
    total += (mid.norm() <= r) ? chord(prev, next) : arc(prev, next);
    prev = next;
    tprev = tnext;
  }
  return total;
}
}  // namespace

double clipped_tri_area(const TriMesh& mesh, int t, Vec2 c, double rho) {
  const auto& tr = mesh.triangles[size_t(t)];
  const Vec2 p0 = mesh.vertices[size_t(tr[0])] - c;
  const Vec2 p1 = mesh.vertices[size_t(tr[1])] - c;
  const Vec2 p2 = mesh.vertices[size_t(tr[2])] - c;
  double far = std::max({p0.norm(), p1.norm(), p2.norm()});
  if (far <= rho) return mesh.tri_area[size_t(t)];
  const double a = segment_contrib(p0, p1, rho) + segment_contrib(p1, p2, rho) +
                   segment_contrib(p2, p0, rho);
  return std::max(0.0, a);
}

void write_obj(const TriMesh& mesh, const FieldRm* embed, const std::string& path) {
  std::FILE* f = std::fopen(path.c_str(), "w");
  if (!f) throw std::runtime_error("write_obj: cannot open " + path);
  for (int i = 0; i < mesh.nv(); ++i) {
    double x = mesh.vertices[size_t(i)].x, y = mesh.vertices[size_t(i)].y, z = 0.0;
    if (embed && embed->m >= 2) {
      x = embed->at(i, 0);
      y = embed->at(i, 1);
      z = embed->m >= 3 ? embed->at(i, 2) : 0.0;
    }
    std::fprintf(f, "v %.17g %.17g %.17g\n", x, y, z);
  }
  for (const auto& t : mesh.triangles) std::fprintf(f, "f %d %d %d\n", t[0] + 1, t[1] + 1, t[2] + 1);
  std::fclose(f);
}

void write_vtk_legacy(const TriMesh& mesh, const FieldRm* field, const std::string& path) {
  std::FILE* f = std::fopen(path.c_str(), "w");
  if (!f) throw std::runtime_error("write_vtk: cannot open " + path);
  std::fprintf(f, "# vtk DataFile Version 2.0\nconformal-lab mesh\nASCII\nDATASET UNSTRUCTURED_GRID\n");
  std::fprintf(f, "POINTS %d double\n", mesh.nv());
  for (const auto& p : mesh.vertices) std::fprintf(f, "%.17g %.17g 0\n", p.x, p.y);
  std::fprintf(f, "CELLS %d %d\n", mesh.nt(), 4 * mesh.nt());
  for (const auto& t : mesh.triangles) std::fprintf(f, "3 %d %d %d\n", t[0], t[1], t[2]);
  std::fprintf(f, "CELL_TYPES %d\n", mesh.nt());
  for (int t = 0; t < mesh.nt(); ++t) std::fprintf(f, "5\n");
  if (field) {
    std::fprintf(f, "POINT_DATA %d\nFIELD data 1\nu %d %d double\n", mesh.nv(), field->m, mesh.nv());
    for (int i = 0; i < mesh.nv(); ++i) {
      for (int k = 0; k < field->m; ++k) std::fprintf(f, "%.17g ", field->at(i, k));
      std::fprintf(f, "\n");
    }
  }
  std::fclose(f);
}

void write_field_csv(const FieldRm& field, const std::string& path) {
  std::FILE* f = std::fopen(path.c_str(), "w");
  if (!f) throw std::runtime_error("write_field_csv: cannot open " + path);
  std::fprintf(f, "vertex_id,x,y");
  for (int k = 0; k < field.m; ++k) std::fprintf(f, ",v%d", k);
  std::fprintf(f, "\n");
  for (int i = 0; i < field.nv(); ++i) {
    const Vec2 p = field.mesh->vertices[size_t(i)];
    std::fprintf(f, "%d,%.17g,%.17g", i, p.x, p.y);
    for (int k = 0; k < field.m; ++k) std::fprintf(f, ",%.17g", field.at(i, k));
    std::fprintf(f, "\n");
  }
  std::fclose(f);
}

}  // namespace conflab::mesh
