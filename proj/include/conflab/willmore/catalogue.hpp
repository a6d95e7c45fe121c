#pragma once

#include "conflab/willmore/chart.hpp"

namespace conflab::wil {

// benchmark charts with exact jet derivatives
Chart sphere_chart(double radius, bool north, double tilt = 0.0);  // stereographic, unit-disc domain
Chart clifford_chart();              // stereographic image of the Clifford torus, [0,2pi)^2
Chart cylinder_chart(double radius = 1.0);
Chart catenoid_chart();
Chart graph_chart(double amplitude);         // z = a sin x1 sin x2 (not conformal)
Chart shear_chart();                         // (x1 + x2/2, x2, 0)
Chart torus_rev_chart(double R, double r);   // torus of revolution, [0,2pi)^2
// conformality-preserving window reparametrization x -> center + scale * x
Chart window_chart(const Chart& base, mesh::Vec2 center, double scale);

Surface make_sphere(double radius, int disc_level, double tilt = 0.0);
Surface make_clifford(int grid_n);
Surface make_torus_rev(double R, double r, int grid_n);
Surface make_sphere_double(double radius, int disc_level);  // doubly traversed

}  // namespace conflab::wil
