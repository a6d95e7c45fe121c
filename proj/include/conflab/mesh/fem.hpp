#pragma once

#include <array>
#include <vector>

#include "conflab/mesh/trimesh.hpp"

namespace conflab::mesh {

// per-triangle constant gradient of a P1 field, m rows x 2 columns
struct TriGrad {
  int m = 1;
  std::vector<double> g;  // nt * m * 2, [t][k][xy]
  double gx(int t, int k) const { return g[(size_t(t) * size_t(m) + size_t(k)) * 2]; }
  double gy(int t, int k) const { return g[(size_t(t) * size_t(m) + size_t(k)) * 2 + 1]; }
};

TriGrad gradient_p1(const FieldRm& f);

double dirichlet_energy(const FieldRm& u);
double area_functional(const FieldRm& u);  // needs m >= 2

// complex Hopf differential per triangle: 1/4(|u_x|^2-|u_y|^2) - i/2 <u_x,u_y>
struct HopfField {
  std::vector<double> re, im;  // per triangle
};
HopfField hopf_differential(const FieldRm& u);

// symmetric CSR matrix
struct Csr {
  int n = 0;
  std::vector<int> row_ptr, col;
  std::vector<double> val;
  void spmv(const double* x, double* y) const;  // y = A x
};

// stiffness with optional per-triangle 2x2 symmetric coefficient
// entries: sum_T  (C_T grad phi_i) . grad phi_j  * area_T
Csr assemble_stiffness(const TriMesh& mesh, const std::vector<std::array<double, 3>>* coeff = nullptr);
// coeff[t] = {c11, c12, c22}

// weak right-hand sides
// r_i = sum_T area/3 * f_T           (f given per triangle)
std::vector<double> rhs_from_tri_density(const TriMesh& mesh, const std::vector<double>& f_tri);
// r_i = int f phi_i with P1 f (lumped): m_i * f_i
std::vector<double> rhs_from_vertex_density(const TriMesh& mesh, const std::vector<double>& f_vertex);
// r_i = -int X . grad phi_i  (weak divergence of a per-triangle vector field)
std::vector<double> weak_divergence(const TriMesh& mesh, const std::vector<Vec2>& X_tri);
// r_i = int a grad^perp(b) . grad phi_i  == <jacobian(a,b), phi_i>, exact for P1
std::vector<double> rhs_jacobian(const FieldRm& a, const FieldRm& b, int ka = 0, int kb = 0);

// vertex recovery of a per-triangle field (area-weighted average)
std::vector<double> vertex_average(const TriMesh& mesh, const std::vector<double>& f_tri);

}  // namespace conflab::mesh
