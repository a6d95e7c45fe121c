#pragma once

#include "conflab/willmore/chart.hpp"

namespace conflab::wil {

double willmore_energy(const Surface& s);
double surface_area(const Surface& s);

struct CurvatureReport {
  double int_k = 0;        // integral of K dvol
  double gb_defect = -1;   // |int K - 2 pi chi| (closed surfaces only)
  double i2_defect = 0;    // max | |I|^2 - (4|H|^2 - 2K) |
  double dn_defect = 0;    // max | |dn|_g^2 - |I|^2 |
  double umbilic_defect = 0;  // max | (|H|^2-K) - (k1-k2)^2/4 | (m = 3)
  bool gb_applicable = false;
};
CurvatureReport curvature_identities_check(const Surface& s);

// conservative bracket  T_k = d_k H - 3 pi_n(d_k H) + star(d_k^perp n ^ H)
void bracket_at(const Geom& g, std::vector<Jet>& T1, std::vector<Jet>& T2);

// Willmore operator  Delta_perp H + A(H) - 2|H|^2 H  (pointwise values)
std::vector<double> willmore_operator_at(const Geom& g);

struct ResidualReport {
  double pointwise = 0;  // L2 of the pointwise residual density (order-4 jets)
  double weak = 0;       // assembled weak divergence (P1 on discs, FD on grids)
};
// codim-1 residual density: Delta_g H + 2H(H^2 - K); pointwise and weak
ResidualReport willmore_residual_codim1(const Patch& p);
// conservative density: -(e^{-2lam}/2) div[T]; pointwise norm matches the
// codim-1 one identically for m = 3 (the two forms are the same identity)
ResidualReport willmore_residual_conservative(const Patch& p);

struct StructureDefects {
  double hn = 0;        // -2H grad(phi) = grad(n) + n x grad^perp(n)
  double laplace = 0;   // Delta phi = 2 e^{2 lam} H
  double kn = 0;        // K n = -(e^{-2lam}/2) grad(n) x grad^perp(n)
  double dzbar_ez = 0;  // dzbar(e^lam e_z) = (e^{2lam}/2) H
  double dz_ez = 0;     // dz(e^{-lam} e_z) = H0/2
  double codazzi = 0;   // e^{-2lam} dzbar(e^{2lam}<H,H0>) = <H,dz H> + <H0,dzbar H>
};
StructureDefects structure_identities_check(const Patch& p, int max_samples = 4096);

struct FirstVariationReport {
  double dW_fd = 0;       // central difference of the energy
  double dW_operator = 0; // int <Delta_perp H + A(H) - 2|H|^2 H, V> dvol
  double defect = 0;
  double vnorm = 0;       // L2 norm of the variation field
};
FirstVariationReport first_variation_check(const Surface& s,
                                           std::function<Jet(const Jet&, const Jet&)> profile,
                                           double t = 1e-4);

struct PhysicalEnergies {
  double hawking = 0;
  double helfrich = 0;
  double area = 0;
  double willmore = 0;
};
PhysicalEnergies physical_energies(const Surface& s, double helfrich_c0, double helfrich_c1);

struct InvarianceReport {
  double w_base = 0, w_transformed = 0;
  double min_center_dist = 0;
};
// inversion x -> (x - c)/|x - c|^2; throws if the center is closer than 0.05
InvarianceReport conformal_invariance_check(const Surface& s, const std::vector<double>& center);
InvarianceReport dilation_invariance_check(const Surface& s, double factor);

struct MultiplicityRow {
  std::string name;
  double w = 0;
  int k = 1;
  double bound = 0;
  bool satisfied = false;
};
std::vector<MultiplicityRow> multiplicity_energy_scan(const std::vector<Surface>& family);

}  // namespace conflab::wil
