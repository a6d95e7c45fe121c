#pragma once

#include <array>
#include <cmath>
#include <string>
#include <vector>

namespace conflab::mesh {

struct Vec2 {
  double x = 0, y = 0;
  Vec2() = default;
  Vec2(double x_, double y_) : x(x_), y(y_) {}
  Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
  Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
  Vec2 operator*(double s) const { return {x * s, y * s}; }
  double dot(Vec2 o) const { return x * o.x + y * o.y; }
  double cross(Vec2 o) const { return x * o.y - y * o.x; }
  double norm() const { return std::sqrt(x * x + y * y); }
};
inline Vec2 perp(Vec2 v) { return {-v.y, v.x}; }  // rotate +90 degrees

// Triangulated parameter domain (unit disc, annulus, or imported).
// Immutable after construction; derived quantities are precomputed.
struct TriMesh {
  std::vector<Vec2> vertices;
  std::vector<std::array<int, 3>> triangles;  // positively oriented
  std::vector<int> boundary_loop;             // outer loop, ordered
  std::vector<int> inner_loop;                // second loop for annuli
  std::vector<char> is_boundary;
  std::vector<double> vertex_area;  // lumped mass
  std::vector<double> tri_area;
  std::vector<std::array<Vec2, 3>> grad_hat;  // gradient of each corner hat
  int refinement_level = 0;
  double total_area = 0;
  double min_angle_deg = 0;

  int nv() const { return int(vertices.size()); }
  int nt() const { return int(triangles.size()); }
  Vec2 centroid(int t) const {
    const auto& tr = triangles[size_t(t)];
    Vec2 c = vertices[size_t(tr[0])] + vertices[size_t(tr[1])] + vertices[size_t(tr[2])];
    return c * (1.0 / 3.0);
  }

  // spatial index for point location
  int locate(Vec2 p) const;  // containing triangle, -1 if outside

  void finalize();  // fills areas, gradients, index, quality stats

 private:
  int grid_n_ = 0;
  double grid_x0_ = 0, grid_y0_ = 0, grid_h_ = 0;
  std::vector<std::vector<int>> grid_cells_;
};

// Structured disc triangulation: 2^level concentric rings, ring j carrying
// 6j vertices at radius j/n; boundary vertices exactly on the unit circle.
TriMesh build_disc_mesh(int level);

// Annulus r_inner < r < 1 with geometrically graded rings (resolves
// logarithmic integrands); n_radial bands, n_angular vertices per ring.
TriMesh build_annulus_mesh(double r_inner, int n_radial, int n_angular);

// area of triangle t intersected with the disc B_rho(c)
double clipped_tri_area(const TriMesh& mesh, int t, Vec2 c, double rho);

// Per-vertex map into R^m.
struct FieldRm {
  const TriMesh* mesh = nullptr;
  int m = 1;
  std::vector<double> v;  // nv * m, row-major

  FieldRm() = default;
  FieldRm(const TriMesh& mesh_, int m_) : mesh(&mesh_), m(m_), v(size_t(mesh_.nv()) * size_t(m_), 0.0) {}

  double& at(int i, int k) { return v[size_t(i) * size_t(m) + size_t(k)]; }
  double at(int i, int k) const { return v[size_t(i) * size_t(m) + size_t(k)]; }
  int nv() const { return mesh->nv(); }

  template <class F>  // F: (Vec2) -> std::vector<double> or double
  static FieldRm sample(const TriMesh& mesh_, int m_, F&& f) {
    FieldRm u(mesh_, m_);
    for (int i = 0; i < mesh_.nv(); ++i) {
      if constexpr (std::is_same_v<std::invoke_result_t<F, Vec2>, double>) {
        u.at(i, 0) = f(mesh_.vertices[size_t(i)]);
      } else {
        auto val = f(mesh_.vertices[size_t(i)]);
        for (int k = 0; k < m_; ++k) u.at(i, k) = val[size_t(k)];
      }
    }
    return u;
  }
};

void write_obj(const TriMesh& mesh, const FieldRm* embed, const std::string& path);
void write_vtk_legacy(const TriMesh& mesh, const FieldRm* field, const std::string& path);
void write_field_csv(const FieldRm& field, const std::string& path);

}  // namespace conflab::mesh
