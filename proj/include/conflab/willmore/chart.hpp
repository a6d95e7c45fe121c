#pragma once

#include <functional>
#include <string>
#include <vector>

#include "conflab/core/jet.hpp"
#include "conflab/exta/multivector.hpp"
#include "conflab/mesh/trimesh.hpp"

namespace conflab::wil {

using exta::MultiVec;
using JetMV = MultiVec<Jet>;

// complex jets for the z / zbar calculus
struct CJet {
  Jet re, im;
  CJet() = default;
  CJet(Jet r, Jet i) : re(r), im(i) {}
};
inline CJet operator+(const CJet& a, const CJet& b) { return {a.re + b.re, a.im + b.im}; }
inline CJet operator-(const CJet& a, const CJet& b) { return {a.re - b.re, a.im - b.im}; }
inline CJet operator*(const CJet& a, const CJet& b) {
  return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
}
inline CJet operator*(const CJet& a, const Jet& s) { return {a.re * s, a.im * s}; }
inline CJet conj(const CJet& a) { return {a.re, -a.im}; }

// d/dx and d/dy of a degree-4 jet, exact to degree 3
Jet jdx(const Jet& f);
Jet jdy(const Jet& f);
inline CJet jdz(const Jet& f) { return {jdx(f) * 0.5, jdy(f) * (-0.5)}; }     // (fx - i fy)/2
inline CJet jdzbar(const Jet& f) { return {jdx(f) * 0.5, jdy(f) * 0.5}; }     // (fx + i fy)/2
inline CJet jdz(const CJet& f) { return {jdx(f.re) * 0.5 + jdy(f.im) * 0.5, jdx(f.im) * 0.5 - jdy(f.re) * 0.5}; }
inline CJet jdzbar(const CJet& f) { return {jdx(f.re) * 0.5 - jdy(f.im) * 0.5, jdx(f.im) * 0.5 + jdy(f.re) * 0.5}; }

// immersion chart: m components as order-4 jets of the two parameters
using ChartFn = std::function<std::vector<Jet>(const Jet& x1, const Jet& x2)>;

struct Chart {
  int m = 3;
  ChartFn fn;
  bool conformal_hint = false;
};

// cached pointwise geometry of an immersion chart (everything a Willmore
// operator needs, with derivatives carried by the jets)
struct Geom {
  int m = 3;
  bool conformal = false;
  std::vector<Jet> phi;             // order 4
  std::vector<Jet> phix, phiy;      // order 3
  std::vector<Jet> h11v, h12v, h22v;  // pi_n(d^2 phi), coordinate form
  std::vector<Jet> e1, e2;          // orthonormal tangent frame
  std::vector<Jet> Hvec;            // mean curvature vector
  JetMV n;                          // Gauss (m-2)-vector
  Jet g11, g12, g22, detg;
  Jet lam;                          // conformal factor (conformal charts)
  Jet K;

  // frame second fundamental form I(e_i, e_j)
  std::vector<Jet> Ih11, Ih12, Ih22;

  double normH2() const;                        // |H|^2 value
  std::vector<Jet> pi_n(const std::vector<Jet>& w) const;  // normal projection
  // scalar mean curvature (m = 3): <H, star(e1^e2)>
  Jet Hs() const;
  std::vector<Jet> n_vec() const;  // m = 3 unit normal as a vector
  // Weingarten operator in conformal coordinates, complex normal vector
  std::vector<CJet> H0() const;
  Jet H0_norm2() const;
};

Geom geom_at(const Chart& chart, double x, double y);

// immersion floor |phi_x ^ phi_y| and conformality flags are checked here
struct ChartCheck {
  double min_wedge = 0;       // min |phi_x ^ phi_y|
  double max_offdiag = 0;     // max |g12|
  double max_aniso = 0;       // max |g11 - g22|
  bool conformal = false;
};
ChartCheck check_chart(const Chart& chart, const std::vector<mesh::Vec2>& samples);

// ---- quadrature domains ----

// integration patch: either a disc (triangle centroids of a supplied mesh)
// or a periodic [0,2pi)^2 grid (trapezoid = spectrally accurate)
struct Patch {
  Chart chart;
  bool periodic = false;
  int grid_n = 64;              // periodic grids
  int disc_level = 5;           // disc patches
  double weight = 1.0;
};

struct Surface {
  std::string name;
  std::vector<Patch> patches;
  bool closed = true;
  int genus = 0;
  int multiplicity = 1;  // known covering multiplicity
  double w_ref = -1;     // reference Willmore energy when known
};

// sum of f(geom) * dvol over all patches; f sees the pointwise geometry
double integrate(const Surface& s, const std::function<double(const Geom&)>& f);
// per-patch sampling with parameter points (for pointwise max defects)
void for_each_sample(const Patch& p, const std::function<void(double, double, const Geom&)>& f);

// Moebius transforms of R^m as chart wrappers
Chart translate_chart(const Chart& c, const std::vector<double>& v);
Chart dilate_chart(const Chart& c, double s);
Chart invert_chart(const Chart& c, const std::vector<double>& center);
// normal perturbation phi + t * profile(x,y) * unit normal (m = 3)
Chart perturb_normal_chart(const Chart& c, double t, std::function<Jet(const Jet&, const Jet&)> profile);

}  // namespace conflab::wil
