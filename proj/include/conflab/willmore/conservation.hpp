#pragma once

#include "conflab/willmore/chart.hpp"

namespace conflab::wil {

// Conservation potentials of a near-Willmore conformal disc chart:
// grad^perp L = grad H - 3 pi_n(grad H) + star(grad^perp n ^ H), then
// grad S = <L, grad Phi>,  grad R = L ^ grad Phi + 2 (star(n |_ H)) |_ grad Phi.
// All law residuals are weak L2-density norms on interior vertices; the
// recovery residuals are the L2 misfits of the least-squares inversions.
struct ConservationReport {
  double gate_residual = 0;     // weak conservative residual of the input
  double l_recovery = 0;
  double s_recovery = 0;
  double r_recovery = 0;
  double law_flux = 0;             // div<L, grad^perp Phi>
  double law_moment = 0;             // div[L ^ grad^perp Phi + 2(star(n|_H))|_grad^perp Phi]
  double sys_s_grad = 0;           // grad S + <star n, grad^perp R>
  double sys_r_grad = 0;           // grad R - (-1)^m star(n . grad^perp R) - (-1)^{m-1} grad^perp S star n
  double sys_s_poisson = 0;           // Delta S + <star grad n, grad^perp R>
  double sys_r_poisson = 0;           // Delta R - (-1)^m star(grad n . grad^perp R) - grad^perp S star grad n
  double sys_phi_poisson = 0;         // Delta Phi - 1/2 grad^perp S . grad Phi + 1/2 grad R |_ grad^perp Phi
  double f_holomorphy = 0;      // || dzbar f ||
  double f_linf = 0;
  double pairing_zbar = 0;           // <dzbar Phi, dz(L - 2iH)> - i |H|^2 e^{2 lam}
  double pairing_z = 0;           // <dz Phi, dz(L - 2iH)> - (f/2 - 2i e^{2lam} <H, H0>)
};

ConservationReport conservation_laws(const Chart& chart, int level, double residual_gate = 0.05);

}  // namespace conflab::wil
