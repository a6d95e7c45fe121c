#pragma once

#include <vector>

#include "conflab/mesh/solver.hpp"
#include "conflab/mesh/trimesh.hpp"

namespace conflab::mesh {

// Lorentz-scale norms from the decreasing rearrangement of |values| under
// the given measure weights (lumped vertex masses or triangle areas).
struct LorentzNorms {
  double l2_weak = 0;  // sup_l l |{|f|>l}|^{1/2}
  double l21 = 0;      // int_0^inf |{|f|>l}|^{1/2} dl
  double l2 = 0;
};
LorentzNorms lorentz_norms(std::vector<double> values, std::vector<double> weights);
LorentzNorms lorentz_norms(const FieldRm& f);  // scalar field, vertex masses

struct MorreyProfile {
  std::vector<double> rho;
  std::vector<double> energy;       // int_{B_rho} |grad u|^2, clipped quadrature
  double alpha = 0;                 // LS slope of log energy vs log rho
  double monotonicity_violation = 0;  // of rho^{-2} energy (harmonic: 0)
};
MorreyProfile morrey_profile(const FieldRm& u, Vec2 center, const std::vector<double>& radii);

// |2 int_{dB} |dv/dr|^2 - int_{dB} |grad v|^2| by circle quadrature
double pohozaev_check(const FieldRm& v, Vec2 p, double rho, int n_quad = 720);

// weak-residual norms; r is a per-vertex assembled residual
double weak_l2_density(const TriMesh& mesh, const std::vector<double>& r, bool interior_only = true);
double weak_l1(const TriMesh& mesh, const std::vector<double>& r, bool interior_only = true);
// sqrt(r^T K^{-1} r) with interior Dirichlet stiffness (discrete H^{-1})
double weak_hminus1(const PoissonSolver& solver, const std::vector<double>& r);

// least-squares slope of log(y) vs log(x)
double fit_loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace conflab::mesh
