#pragma once

#include <vector>

#include "conflab/mesh/trimesh.hpp"

namespace conflab::comp {

// Quadratic-growth counterexample experiments around Delta u + |grad u|^2 = 0.
//
// The atom family u_n = log[ sum_i lambda_i log(2/|x - a_i|) ] solves the
// equation distributionally; the pairing <Delta u + |grad u|^2, psi> is
// evaluated with closed-form integrands on a smooth partition: mesh
// quadrature away from the atoms, log-polar quadrature on atom patches, and
// the analytic near-field tail 2 pi lam psi(a)/(lam log(2/eps) + V) inside
// the innermost radius (the term whose logarithmic decay carries the
// delta-cancellation).
struct FrehseReport {
  double annulus_residual = 0;       // weak residual of loglog(2/r), annulus mesh
  std::vector<double> sup_values;    // sup |u| for shrinking inner radii
  std::vector<int> atom_counts;
  std::vector<double> atom_residuals;  // |<(II.8), psi>| per atom family
  double limit_residual = 0;           // same pairing for log[log(2/.) * f]
};

FrehseReport frehse_counterexample_report(int level = 6);

}  // namespace conflab::comp
