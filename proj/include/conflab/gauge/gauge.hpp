#pragma once

#include <vector>

#include "conflab/comp/compensation.hpp"
#include "conflab/mesh/trimesh.hpp"

namespace conflab::gauge {

using comp::OmegaField;
using mesh::FieldRm;
using mesh::TriMesh;

// per-vertex SO(m) field
struct RotationField {
  int m = 3;
  int nv = 0;
  std::vector<double> p;  // nv * m * m row-major
  double* at(int i) { return p.data() + std::size_t(i) * std::size_t(m) * std::size_t(m); }
  const double* at(int i) const {
    return p.data() + std::size_t(i) * std::size_t(m) * std::size_t(m);
  }
  static RotationField identity(int m, int nv);
  double max_orthogonality_defect() const;  // max |P^T P - I|
  double min_det() const;
};

// Coulomb gauge extraction: riemannian descent of int |P^{-1} dP + P^{-1} Omega P|^2
// with nearest-rotation retraction; xi recovered entrywise from the rotated
// potential by Dirichlet-0 Poisson solves.
struct CoulombResult {
  RotationField P;
  FieldRm xi;            // so(m) entries above the diagonal, column-packed
  double defect = 0;     // weak norm of div(Omega^P)
  double recon_residual = 0;  // dual-norm misfit of the reconstruction
  double recon_l2 = 0;        // plain L2 misfit (O(h) interpolation content)
  double gauge_energy = 0;    // int |grad xi|^2 + |grad P|^2
  double omega_l2 = 0;
  int iterations = 0;
};
CoulombResult coulomb_gauge(const OmegaField& omega, const TriMesh& mesh, double gate = 4.0,
                            int max_iter = 4000);

// conserved pair (A, B) by Picard iteration of the coupled Neumann/Dirichlet
// system; normalized so that mean(A P) = Id (the divergence-free case then
// reproduces A = Id, B = xi exactly)
struct ABResult {
  FieldRm A;  // nv x (m*m)
  FieldRm B;
  double conservation_defect = 0;  // weak norm of div(grad A - A Omega)
  double a_dist_so = 0;            // sup distance of A to SO(m)
  double contraction = 0;
  int iterations = 0;
  bool converged = false;
};
ABResult construct_AB(const OmegaField& omega, const TriMesh& mesh, const CoulombResult& cg,
                      int max_iter = 60, double tol = 1e-10);

// conservation-law equivalence: weak residuals of div(A grad u - B grad^perp u) and of
// Delta u + Omega . grad u for the same u
struct EquivalenceReport {
  double lhs_residual = 0;  // dual norm of div(A grad u - B grad^perp u)
  double rhs_residual = 0;  // dual norm of Delta u + Omega . grad u
};
EquivalenceReport conservation_equivalence_check(const FieldRm& u, const OmegaField& omega,
                                                 const FieldRm& A, const FieldRm& B);

// potentials from geometry: S^2 harmonic maps or CMC data
OmegaField omega_from_sphere_map(const FieldRm& u);
OmegaField omega_from_cmc(const FieldRm& u, double H);

// random small so(3) potential from smooth trigonometric entries
OmegaField random_so3_omega(const TriMesh& mesh, double amplitude, unsigned seed);
// divergence-free potential Omega = grad^perp xi0 for a given smooth xi0 entry
OmegaField divfree_omega(const TriMesh& mesh, double amplitude, unsigned seed);

}  // namespace conflab::gauge
