#pragma once

#include <functional>
#include <random>
#include <vector>

#include "conflab/mesh/norms.hpp"
#include "conflab/mesh/solver.hpp"
#include "conflab/mesh/trimesh.hpp"

namespace conflab::comp {

using mesh::FieldRm;
using mesh::TriMesh;
using mesh::Vec2;

// -Delta phi = jacobian(a, b), phi = 0 on the boundary; the right-hand side is
// assembled in divergence form div[a grad^perp b] (exact for P1)
struct WenteResult {
  FieldRm phi;
  double phi_linf = 0;
  double grad_phi_l2 = 0;
  double grad_a_l2 = 0, grad_b_l2 = 0;
  double ratio = 0;  // (|phi|_inf + |grad phi|_2) / (|grad a|_2 |grad b|_2)
  bool ratio_defined = true;
};
WenteResult wente_solve(const FieldRm& a, const FieldRm& b,
                        const mesh::PoissonSolver* solver = nullptr);

// corpus of random trigonometric-polynomial pairs, deterministic for a seed
std::vector<std::pair<FieldRm, FieldRm>> trig_corpus(const TriMesh& mesh, int n_pairs,
                                                     unsigned seed);
struct SweepResult {
  double max_ratio = 0;
  int argmax = -1;
  int skipped = 0;  // degenerate pairs (zero jacobian factor)
};
SweepResult wente_constant_sweep(const std::vector<std::pair<FieldRm, FieldRm>>& corpus);

// W^{2,1} diagnostic: resample phi on a structured grid, second-order central
// differences, trapezoid L1 norm of the Hessian (sum of |entries| convention);
// cells without a full interior stencil take the nearest valid value
double clms_hessian_l1(const FieldRm& phi, int grid_n = 257);

// variable-coefficient Jacobian Poisson problem (elliptic a_ij checked)
WenteResult chanillo_li_solve(const std::vector<std::array<double, 3>>& coeff_tri,
                              const FieldRm& a, const FieldRm& b);

struct BethuelRow {
  double grad_a_l2weak = 0, grad_a_l2 = 0, grad_b_l2 = 0, grad_phi_l2 = 0;
  double ratio = 0;  // |grad phi|_2 / (|grad a|_{2,inf} |grad b|_2)
};
BethuelRow bethuel_estimate_experiment(const FieldRm& a, const FieldRm& b);

// CMC Picard iteration u = harmonic extension + 2H Delta0^{-1}(u_x x u_y)
struct CmcResult {
  FieldRm u;
  int iterations = 0;
  double final_update = 0;
  double contraction = 0;  // max ratio of successive update norms
  bool converged = false;
};
CmcResult cmc_solve(double H, const FieldRm& boundary, double smallness_gate = 2.0,
                    int max_iter = 60, double tol = 1e-9);
// dual-norm residual of Delta u - 2 H(u) u_x x u_y against P1 test functions
double cmc_residual(const FieldRm& u, std::function<double(Vec2)> H);
double cmc_residual(const FieldRm& u, double H);

// spherical-cap benchmark data: boundary circle of the unit-sphere cap cut at
// polar angle alpha (the small cap solution of the H = 1 problem)
FieldRm cap_boundary(const TriMesh& mesh, double alpha);
FieldRm cap_solution(const TriMesh& mesh, double alpha);
double hausdorff_to_cap(const FieldRm& u, double alpha);

// S^n harmonic map residuals: -Delta u = u |grad u|^2 and the conservation
// law div(u^i grad u^j - u^j grad u^i) = 0
struct SphereResiduals {
  double eq = 0;
  double conservation = 0;
  double renorm_warning = 0;  // max | |u|-1 | seen on input
};
SphereResiduals sphere_harmonic_residuals(FieldRm u);

// semi-implicit projected heat flow to S^n, Dirichlet boundary held fixed
struct FlowResult {
  FieldRm u;
  std::vector<double> energy_history;
  int accepted_steps = 0;
};
FlowResult harmonic_heat_flow(const FieldRm& u0, int steps, double dt);

// inverse stereographic benchmark maps D^2 -> S^2 (degree-1 chart and z -> z^2)
FieldRm stereographic_map(const TriMesh& mesh, double scale, int power = 1);

// discrete harmonic map by pointwise sphere relaxation (boundary fixed);
// the result satisfies (K u)_i parallel to u_i at every interior vertex
FieldRm sphere_harmonic_gs(const FieldRm& u0, int max_sweeps = 4000, double tol = 1e-14);

// harmonic map residual for a target metric g given as a callable with
// optional exact derivatives; Christoffel symbols by central differences
struct MetricOnTarget {
  int m = 2;
  std::function<void(const std::vector<double>&, std::vector<double>&)> g;  // row-major m x m
  std::function<bool(const std::vector<double>&, std::vector<double>&)> dg;  // m^3, optional
  double fd_step = 1e-5;
};
double metric_harmonic_residual(const FieldRm& u, const MetricOnTarget& g);

// linear Schroedinger system -Delta W = Omega . grad W by Picard iteration;
// Omega given per vertex as m x m antisymmetric matrices per component
struct OmegaField {
  int m = 3;
  // two 1-form components, each nv * m * m row-major
  std::vector<double> o1, o2;
  double l2_norm(const TriMesh& mesh) const;
  void check_antisymmetry() const;
  int nv = 0;
};
struct SchrodingerResult {
  FieldRm w;
  int iterations = 0;
  bool converged = false;
  double equation_residual = 0;  // weak residual of -Delta W = Omega . grad W
  double morrey_alpha = 0;
};
SchrodingerResult schrodinger_linear_solve(const OmegaField& omega, const FieldRm& bc,
                                           double gate = 4.0, int max_iter = 80,
                                           double tol = 1e-9);

}  // namespace conflab::comp
