#pragma once

#include <functional>
#include <string>
#include <vector>

namespace conflab::plateau {

// closed curve in R^m parametrized over [0, 2pi); analytic presets carry
// exact tangents, sampled curves are interpolated by a periodic cubic spline
struct JordanCurve {
  int m = 3;
  std::function<void(double, std::vector<double>&, std::vector<double>&)> eval;  // pos, d/dt
  double length = 0;  // rectifiable length (computed by fine polygonal sum)

  std::vector<double> at(double t) const {
    std::vector<double> p(std::size_t(m), 0.0), d(std::size_t(m), 0.0);
    eval(t, p, d);
    return p;
  }
  std::vector<double> tangent(double t) const {
    std::vector<double> p(std::size_t(m), 0.0), d(std::size_t(m), 0.0);
    eval(t, p, d);
    return d;
  }
};

JordanCurve circle_curve(double radius = 1.0);
JordanCurve ellipse_curve(double a, double b);                // (a cos t, b sin t, 0)
JordanCurve wave_curve(double amplitude, int harmonics = 2);  // (cos t, sin t, A cos kt)
// periodic C^2 cubic spline through samples (theta_k strictly increasing,
// first sample NOT repeated at the end)
JordanCurve spline_curve(const std::vector<double>& theta,
                         const std::vector<std::vector<double>>& points);
// CSV rows theta,x,y,... -> spline curve
JordanCurve curve_from_csv(const std::string& path);

}  // namespace conflab::plateau
