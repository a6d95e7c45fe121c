#pragma once

#include <array>
#include <functional>

#include "conflab/mesh/solver.hpp"
#include "conflab/mesh/trimesh.hpp"
#include "conflab/willmore/chart.hpp"

namespace conflab::iso {

using mesh::FieldRm;
using mesh::TriMesh;
using mesh::Vec2;

// orthonormal tangent frame after the Coulomb rotation
struct FrameField {
  FieldRm f1, f2;               // per-vertex frame vectors in R^m
  FieldRm theta;                // rotation angle against the Gram-Schmidt frame
  std::vector<Vec2> conn_tri;   // <f1, d f2> per triangle
  double coulomb_defect = 0;    // weak norm of d^{*g}<f1, df2>
};

// initial_gauge optionally rotates the starting Gram-Schmidt frame by a P1
// angle field (sampled at vertices); the final connection is independent of
// it because the angle problem is convex over exactly that P1 gauge group
FrameField coulomb_frame(const wil::Chart& chart, const TriMesh& mesh,
                         std::function<double(Vec2)> initial_gauge = nullptr);

struct ConformalFactor {
  FieldRm lambda;               // gauged to zero on the boundary
  double liouville_defect = 0;  // weak norm of div(A grad lambda) + K sqrt(det g)
};
ConformalFactor conformal_factor(const wil::Chart& chart, const TriMesh& mesh,
                                 const FrameField& frame);

struct IsothermalCoords {
  FieldRm phi;                   // the two coordinate functions
  double closedness_defect = 0;  // least-squares misfit of d phi_i = e^-lam f_i^*
  double conformality_defect = 0;
  bool jacobian_positive = true;
};
IsothermalCoords build_isothermal_coords(const wil::Chart& chart, const TriMesh& mesh,
                                         const FrameField& frame, const ConformalFactor& cf);

// pipeline convenience: frame -> factor -> coordinates
IsothermalCoords isothermal_pipeline(const wil::Chart& chart, const TriMesh& mesh,
                                     FrameField* frame_out = nullptr,
                                     ConformalFactor* cf_out = nullptr);

struct FactorEstimateRow {
  std::string name;
  double grad_n_energy = 0;  // int |grad n|^2 (must be < 8 pi / 3)
  double sup_elam = 0;       // sup over B_rho of e^lambda
  double area = 0;
  double lam_linf = 0;       // sup |lambda| over B_rho, boundary-gauged
  double log_dist_term = 0;
  double c135 = 0;           // fitted constant of the sup e^lam estimate
  double c136 = 0;           // fitted constant of the |lambda| estimate
  bool hypothesis_ok = true;
};
struct FactorEstimateReport {
  std::vector<FactorEstimateRow> rows;
  double c135 = 0;  // single constant covering the family
  double c136 = 0;
};
FactorEstimateReport factor_estimates_check(
    const std::vector<std::pair<std::string, wil::Chart>>& family, double rho, int level);

struct LiftingNorms {
  double conn_l2weak = 0;    // L^{2,infty} of the connection
  double grad_e_l2weak = 0;  // L^{2,infty} of the frame gradients
  double grad_n_l2 = 0;
  double bound_rhs = 0;      // ||grad n||(1 + ||grad n||)
  double ratio = 0;
};
LiftingNorms coulomb_lifting_norms(const wil::Chart& chart, const TriMesh& mesh,
                                   const FrameField& frame);

}  // namespace conflab::iso
