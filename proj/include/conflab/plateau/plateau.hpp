#pragma once

#include <array>
#include <complex>
#include <vector>

#include "conflab/mesh/solver.hpp"
#include "conflab/mesh/trimesh.hpp"
#include "conflab/plateau/curve.hpp"

namespace conflab::plateau {

using mesh::FieldRm;
using mesh::TriMesh;

// weakly monotone boundary parametrization with three hard anchors
struct BoundaryParam {
  std::vector<double> tau;          // one angle per boundary-loop vertex
  std::array<int, 3> anchor_pos{};  // positions in the boundary loop
  std::array<double, 3> anchor_tau{};

  static BoundaryParam identity(const TriMesh& mesh, const std::array<double, 3>& anchors);
  // weak monotonicity: clip negative increments and rescale between anchors
  void project(double eps_delta = 1e-6);
  bool monotone(double tol = 0.0) const;
};

FieldRm harmonic_extension(const JordanCurve& curve, const BoundaryParam& bp, const TriMesh& mesh,
                           const mesh::PoissonSolver* solver = nullptr);
FieldRm harmonic_extension_warm(const JordanCurve& curve, const BoundaryParam& bp,
                                const TriMesh& mesh, const mesh::PoissonSolver* solver,
                                const FieldRm* warm);

// the unique disc Moebius map f(z) = e^{i theta}(z - a)/(1 - conj(a) z) with
// f(e^{2 pi i k/3}) = P_k; Newton on the three phase constraints
struct MoebiusParams {
  double theta = 0;
  std::complex<double> a{0, 0};
  double residual = 0;
  int iterations = 0;
};
MoebiusParams three_point_normalize(const std::array<std::complex<double>, 3>& P);

struct SweepRow {
  int sweep = 0;
  double E = 0, A = 0, hopf_l1 = 0;
};
struct PlateauOptions {
  int max_sweeps = 400;
  double tol_e = 1e-8;       // relative energy decrease per sweep
  int inner_steps = 4;       // boundary gradient steps per sweep
  double armijo = 1e-4;
  double eps_delta = 1e-6;
};
struct PlateauResult {
  FieldRm u;
  BoundaryParam bp;
  double E = 0, A = 0, hopf_l1 = 0;
  std::vector<SweepRow> history;
  bool monotone_history = true;
};
PlateauResult douglas_rado_solve(const JordanCurve& curve, const TriMesh& mesh,
                                 const PlateauOptions& opts = {},
                                 const BoundaryParam* init = nullptr);

// weak L1 norm of the stress-energy divergence pair (vanishes on stationary maps)
double stationarity_defect(const FieldRm& u);
// L1 norm of the Hopf differential
double hopf_l1(const FieldRm& u);
// Courant slice diagnostic: energy density integrated over a circle arc inside the disc
double courant_slice_energy(const FieldRm& u, mesh::Vec2 p, double rho, int n_quad = 720);
// detected near-branch triangles: |grad u|^2 < 1e-8 * mean
std::vector<int> branch_point_candidates(const FieldRm& u);

}  // namespace conflab::plateau
