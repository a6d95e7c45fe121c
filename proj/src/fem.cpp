#include "conflab/mesh/fem.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "conflab/core/parallel.hpp"

namespace conflab::mesh {

TriGrad gradient_p1(const FieldRm& f) {
  const TriMesh& mesh = *f.mesh;
  TriGrad tg;
  tg.m = f.m;
  tg.g.assign(size_t(mesh.nt()) * size_t(f.m) * 2, 0.0);
  par::for_each(mesh.nt(), [&](std::int64_t t) {
    const auto& tr = mesh.triangles[size_t(t)];
    for (int k = 0; k < f.m; ++k) {
      double gx = 0, gy = 0;
      for (int c = 0; c < 3; ++c) {
        const double v = f.at(tr[size_t(c)], k);
        gx += v * mesh.grad_hat[size_t(t)][size_t(c)].x;
        gy += v * mesh.grad_hat[size_t(t)][size_t(c)].y;
      }
      tg.g[(size_t(t) * size_t(f.m) + size_t(k)) * 2] = gx;
      tg.g[(size_t(t) * size_t(f.m) + size_t(k)) * 2 + 1] = gy;
    }
  });
  return tg;
}

double dirichlet_energy(const FieldRm& u) {
  const TriMesh& mesh = *u.mesh;
  const TriGrad g = gradient_p1(u);
  return par::sum(mesh.nt(), [&](std::int64_t t) {
    double s = 0;
    for (int k = 0; k < u.m; ++k)
      s += g.gx(int(t), k) * g.gx(int(t), k) + g.gy(int(t), k) * g.gy(int(t), k);
    return 0.5 * s * mesh.tri_area[size_t(t)];
  });
}

double area_functional(const FieldRm& u) {
  if (u.m < 2) throw std::invalid_argument("area_functional: m >= 2 required");
  const TriMesh& mesh = *u.mesh;
  const TriGrad g = gradient_p1(u);
  return par::sum(mesh.nt(), [&](std::int64_t t) {
    // |u_x ^ u_y|^2 = sum_{i<j} (a_i b_j - a_j b_i)^2
    double s = 0;
    for (int i = 0; i < u.m; ++i)
      for (int j = i + 1; j < u.m; ++j) {
        const double w = g.gx(int(t), i) * g.gy(int(t), j) - g.gx(int(t), j) * g.gy(int(t), i);
        s += w * w;
      }
    return std::sqrt(s) * mesh.tri_area[size_t(t)];
  });
}

HopfField hopf_differential(const FieldRm& u) {
  if (u.m < 2) throw std::invalid_argument("hopf_differential: m >= 2 required");
  const TriMesh& mesh = *u.mesh;
  const TriGrad g = gradient_p1(u);
  HopfField h;
  h.re.assign(size_t(mesh.nt()), 0.0);
  h.im.assign(size_t(mesh.nt()), 0.0);
  par::for_each(mesh.nt(), [&](std::int64_t t) {
    double xx = 0, yy = 0, xy = 0;
    for (int k = 0; k < u.m; ++k) {
      xx += g.gx(int(t), k) * g.gx(int(t), k);
      yy += g.gy(int(t), k) * g.gy(int(t), k);
      xy += g.gx(int(t), k) * g.gy(int(t), k);
    }
    h.re[size_t(t)] = 0.25 * (xx - yy);
    h.im[size_t(t)] = -0.5 * xy;
  });
  return h;
}

void Csr::spmv(const double* x, double* y) const {
  par::for_each(n, [&](std::int64_t i) {
    double s = 0;
    for (int k = row_ptr[size_t(i)]; k < row_ptr[size_t(i) + 1]; ++k) s += val[size_t(k)] * x[col[size_t(k)]];
    y[i] = s;
  });
}

Csr assemble_stiffness(const TriMesh& mesh, const std::vector<std::array<double, 3>>* coeff) {
  const int nv = mesh.nv(), nt = mesh.nt();
  // adjacency pattern
  std::vector<std::vector<int>> adj{std::size_t(nv)};
  for (int t = 0; t < nt; ++t)
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b)
        adj[size_t(mesh.triangles[size_t(t)][size_t(a)])].push_back(mesh.triangles[size_t(t)][size_t(b)]);
  Csr A;
  A.n = nv;
  A.row_ptr.assign(size_t(nv) + 1, 0);
  for (int i = 0; i < nv; ++i) {
    auto& r = adj[size_t(i)];
    std::sort(r.begin(), r.end());
    r.erase(std::unique(r.begin(), r.end()), r.end());
    A.row_ptr[size_t(i) + 1] = A.row_ptr[size_t(i)] + int(r.size());
  }
  A.col.resize(size_t(A.row_ptr[size_t(nv)]));
  A.val.assign(A.col.size(), 0.0);
  par::for_each(nv, [&](std::int64_t i) {
    std::copy(adj[size_t(i)].begin(), adj[size_t(i)].end(), A.col.begin() + A.row_ptr[size_t(i)]);
  });

  // per-triangle element matrices, then deterministic row-major gather
  std::vector<std::array<double, 9>> elem{std::size_t(nt)};
  par::for_each(nt, [&](std::int64_t t) {
    const double area = mesh.tri_area[size_t(t)];
    double c11 = 1, c12 = 0, c22 = 1;
    if (coeff) { c11 = (*coeff)[size_t(t)][0]; c12 = (*coeff)[size_t(t)][1]; c22 = (*coeff)[size_t(t)][2]; }
    for (int a = 0; a < 3; ++a) {
      const Vec2 ga = mesh.grad_hat[size_t(t)][size_t(a)];
      const Vec2 cga{c11 * ga.x + c12 * ga.y, c12 * ga.x + c22 * ga.y};
      for (int b = 0; b < 3; ++b) {
        const Vec2 gb = mesh.grad_hat[size_t(t)][size_t(b)];
        elem[size_t(t)][size_t(a) * 3 + size_t(b)] = (cga.x * gb.x + cga.y * gb.y) * area;
      }
    }
  });
  std::vector<std::vector<std::pair<int, int>>> incident{std::size_t(nv)};  // (tri, corner)
  for (int t = 0; t < nt; ++t)
    for (int a = 0; a < 3; ++a) incident[size_t(mesh.triangles[size_t(t)][size_t(a)])].push_back({t, a});
  par::for_each(nv, [&](std::int64_t i) {
    const int r0 = A.row_ptr[size_t(i)], r1 = A.row_ptr[size_t(i) + 1];
    for (auto [t, a] : incident[size_t(i)]) {
      for (int b = 0; b < 3; ++b) {
        const int j = mesh.triangles[size_t(t)][size_t(b)];
        const int k = int(std::lower_bound(A.col.begin() + r0, A.col.begin() + r1, j) - A.col.begin());
        A.val[size_t(k)] += elem[size_t(t)][size_t(a) * 3 + size_t(b)];
      }
    }
  });
  return A;
}

std::vector<double> rhs_from_tri_density(const TriMesh& mesh, const std::vector<double>& f_tri) {
  std::vector<double> r(size_t(mesh.nv()), 0.0);
  for (int t = 0; t < mesh.nt(); ++t) {
    const double w = mesh.tri_area[size_t(t)] * f_tri[size_t(t)] / 3.0;
    for (int c = 0; c < 3; ++c) r[size_t(mesh.triangles[size_t(t)][size_t(c)])] += w;
  }
  return r;
}

std::vector<double> rhs_from_vertex_density(const TriMesh& mesh, const std::vector<double>& f_vertex) {
  std::vector<double> r(size_t(mesh.nv()), 0.0);
  for (int i = 0; i < mesh.nv(); ++i) r[size_t(i)] = mesh.vertex_area[size_t(i)] * f_vertex[size_t(i)];
  return r;
}

std::vector<double> weak_divergence(const TriMesh& mesh, const std::vector<Vec2>& X_tri) {
  std::vector<double> r(size_t(mesh.nv()), 0.0);
  for (int t = 0; t < mesh.nt(); ++t) {
    const double area = mesh.tri_area[size_t(t)];
    for (int c = 0; c < 3; ++c)
      r[size_t(mesh.triangles[size_t(t)][size_t(c)])] -=
          X_tri[size_t(t)].dot(mesh.grad_hat[size_t(t)][size_t(c)]) * area;
  }
  return r;
}

std::vector<double> rhs_jacobian(const FieldRm& a, const FieldRm& b, int ka, int kb) {
  const TriMesh& mesh = *a.mesh;
  const TriGrad gb = gradient_p1(b);
  std::vector<double> r(size_t(mesh.nv()), 0.0);
  for (int t = 0; t < mesh.nt(); ++t) {
    const auto& tr = mesh.triangles[size_t(t)];
    const double amean = (a.at(tr[0], ka) + a.at(tr[1], ka) + a.at(tr[2], ka)) / 3.0;
    const Vec2 gperp{-gb.gy(t, kb), gb.gx(t, kb)};
    const double w = amean * mesh.tri_area[size_t(t)];
    for (int c = 0; c < 3; ++c)
      r[size_t(tr[size_t(c)])] += w * gperp.dot(mesh.grad_hat[size_t(t)][size_t(c)]);
  }
  return r;
}

std::vector<double> vertex_average(const TriMesh& mesh, const std::vector<double>& f_tri) {
  std::vector<double> num(size_t(mesh.nv()), 0.0), den(size_t(mesh.nv()), 0.0);
  for (int t = 0; t < mesh.nt(); ++t) {
    const double area = mesh.tri_area[size_t(t)];
    for (int c = 0; c < 3; ++c) {
      num[size_t(mesh.triangles[size_t(t)][size_t(c)])] += area * f_tri[size_t(t)];
      den[size_t(mesh.triangles[size_t(t)][size_t(c)])] += area;
    }
  }
  for (int i = 0; i < mesh.nv(); ++i) num[size_t(i)] /= den[size_t(i)];
  return num;
}

}  // namespace conflab::mesh
