#pragma once

#include <vector>

#include "conflab/mesh/trimesh.hpp"
#include "conflab/willmore/chart.hpp"

namespace conflab::iso {

// Gauss-map bubble family: inverse stereographic blow-up on |x| <= 1/2,
// interpolated to the south pole on the outer annulus, constant outside
std::vector<Jet> bubble_map(const Jet& x, const Jet& y, double lam, bool collar = true);

// degree of the map as covered-area / 4 pi (rounded)
double bubble_covered_area(double lam, int level, bool collar = true);

struct ThresholdRow {
  double rho = 0;
  double frame_energy = 0;  // per component, minimal under the degree constraint
};
struct ThresholdReport {
  double lam = 0;
  double map_energy = 0;       // int |grad n|^2 over the disc
  int degree = 0;
  std::vector<ThresholdRow> rows;
  double slope = 0;            // frame energy vs log(1/rho)
  double lift_energy = 0;      // explicit lift when the image is contractible
};

// map-energy measurement plus the minimal-frame-energy scan over rho
ThresholdReport helein_threshold_experiment(double lam, const std::vector<double>& rhos,
                                            int disc_level, int annulus_nr, int annulus_ntheta,
                                            bool collar = true);

}  // namespace conflab::iso
