// Acceptance suite: every criterion runs at its stated level and tolerance
// and prints exactly one PASS/FAIL line. Exit code 0 iff all pass.

#include <cstdio>
#include <map>
#include <string>
#include <vector>

#include "conflab/cli/experiments.hpp"

using conflab::cli::Report;
using nlohmann::json;

namespace {

struct Criterion {
  int id;
  const char* label;
  const char* experiment;
  // check-name prefixes that belong to this criterion
  std::vector<std::string> prefixes;
};

const std::vector<Criterion> kCriteria = {
    {1, "Willmore sphere: W = 4pi (0.5%, level 6), radius invariant to 1e-10",
     "willmore-energy", {"sphere_w_4pi", "sphere_radius_invariance"}},
    {2, "Willmore Clifford torus: W = 2pi^2 (0.5%, 256x256), residual order >= 0.9",
     "willmore-energy", {"clifford_w_2pi2", "clifford_residual_order"}},
    {3, "Gauss-Bonnet: sphere 4pi (0.5%), torus of revolution 0 (1e-2)",
     "willmore-energy", {"gauss_bonnet_sphere", "gauss_bonnet_torus"}},
    {4, "Pointwise identity suite < 1e-8 on sphere and Clifford charts",
     "willmore-residual",
     {"sphere_vi", "sphere_codazzi", "clifford_vi", "clifford_codazzi"}},
    {5, "Conformal invariance: W within 1% under 5 random inversions",
     "invariance", {"sphere_inversion", "clifford_inversion", "dilation_exact"}},
    {6, "Wente: |phi|_inf = 0.25 (1e-3), order >= 1.9, corpus ratio stable 5%",
     "wente", {"phi_linf", "linf_order", "corpus_ratio_stability"}},
    {7, "Plateau circle: E, A in pi +- 1e-2, |Hopf|_L1 < 1e-2, monotone history",
     "plateau",
     {"E_near_pi", "A_near_pi", "hopf_l1", "history_monotone", "E_adversarial_near_pi",
      "adv_history_monotone"}},
    {8, "CMC cap: residual < 1e-3, distance < 2e-3, contraction < 0.9",
     "cmc", {"cmc_residual", "cap_distance", "contraction", "converged"}},
    {9, "Sphere harmonic maps: residual orders >= 0.9, flow energy monotone",
     "harmonic", {"eq_order", "conservation_order", "flow_energy_monotone"}},
    {10, "Frehse: annulus residual < 1e-2, limit candidate residual > 0.1",
     "frehse", {"annulus_residual", "atom_residual", "limit_residual_above", "sup_"}},
    {11, "Gauge: Coulomb defect < 1e-6, recon < 1e-5, conservation < 1e-5, div-free case",
     "gauge",
     {"coulomb_defect", "recon_residual", "conservation_defect", "divfree_"}},
    {12, "Conservation potentials: law residual orders >= 0.9, f holomorphy < 1e-3",
     "conservation-laws", {"sphere_", "clifford_"}},
    {13, "First variation: torus matches dW within 1e-3 |V|, sphere < 1e-5",
     "willmore-residual", {"firstvar_"}},
    {14, "Isothermal: shear defect < 1e-6, graph O(h), sphere Liouville O(h)",
     "isothermal",
     {"shear_conformality", "graph_conformality", "liouville_decreasing", "coulomb_defect"}},
    {15, "Helein threshold: map energy 8pi (3%), frame slope 2pi (20%)",
     "helein-threshold", {"map_energy_8pi", "frame_slope_2pi", "small_lambda_bounded"}},
    {16, "Morrey/harmonic diagnostics: monotone profile (1e-6), Pohozaev O(h)",
     "morrey", {"profile_monotone", "affine_alpha_2", "pohozaev_"}},
};

bool matches(const std::string& name, const std::vector<std::string>& prefixes) {
  for (const auto& p : prefixes)
    if (name.rfind(p, 0) == 0) return true;
  return false;
}

}  // namespace

int main() {
  std::map<std::string, Report> reports;
  bool all_pass = true;

  for (const auto& c : kCriteria) {
    if (reports.find(c.experiment) == reports.end()) {
      json cfg = conflab::cli::default_config(c.experiment);
      cfg["fast"] = false;
      try {
        reports.emplace(c.experiment, conflab::cli::run_experiment(cfg));
      } catch (const std::exception& e) {
        std::printf("[FAIL] criterion %2d: %s  (experiment threw: %s)\n", c.id, c.label, e.what());
        all_pass = false;
        continue;
      }
    }
  }

  for (const auto& c : kCriteria) {
    auto it = reports.find(c.experiment);
    if (it == reports.end()) continue;  // already reported as thrown
    bool ok = true;
    int n = 0;
    double worst = 0;
    std::string worst_name;
    for (const auto& chk : it->second.checks) {
      if (!matches(chk.name, c.prefixes)) continue;
      ++n;
      if (!chk.pass && (worst_name.empty() || chk.value > worst)) {
        worst = chk.value;
        worst_name = chk.name;
      }
      ok = ok && chk.pass;
    }
    if (n == 0) ok = false;
    all_pass = all_pass && ok;
    if (ok)
      std::printf("[PASS] criterion %2d: %s  (%d checks)\n", c.id, c.label, n);
    else
      std::printf("[FAIL] criterion %2d: %s  (failing: %s = %.6g)\n", c.id, c.label,
                  worst_name.c_str(), worst);
  }
  std::printf("acceptance: %s\n", all_pass ? "PASS" : "FAIL");
  return all_pass ? 0 : 1;
}
