#include "conflab/plateau/curve.hpp"

#include <cmath>
#include <cstdio>
#include <cstring>
#include <cstdlib>
#include <numbers>
#include <stdexcept>

namespace conflab::plateau {

namespace {
constexpr double kPi = std::numbers::pi;

double polygonal_length(const JordanCurve& c, int n = 4096) {
  double len = 0;
  std::vector<double> prev = c.at(0.0);
  for (int k = 1; k <= n; ++k) {
    std::vector<double> cur = c.at(2 * kPi * k / n);
    double d2 = 0;
    for (int i = 0; i < c.m; ++i) d2 += (cur[std::size_t(i)] - prev[std::size_t(i)]) *
                                        (cur[std::size_t(i)] - prev[std::size_t(i)]);
    len += std::sqrt(d2);
    prev = cur;
  }
  return len;
}
}  // namespace

JordanCurve circle_curve(double radius) {
  JordanCurve c;
  c.m = 3;
  c.eval = [radius](double t, std::vector<double>& p, std::vector<double>& d) {
    p = {radius * std::cos(t), radius * std::sin(t), 0.0};
    d = {-radius * std::sin(t), radius * std::cos(t), 0.0};
  };
  c.length = 2 * kPi * radius;
  return c;
}

JordanCurve ellipse_curve(double a, double b) {
  JordanCurve c;
  c.m = 3;
  c.eval = [a, b](double t, std::vector<double>& p, std::vector<double>& d) {
    p = {a * std::cos(t), b * std::sin(t), 0.0};
    d = {-a * std::sin(t), b * std::cos(t), 0.0};
  };
  c.length = polygonal_length(c);
  return c;
}

JordanCurve wave_curve(double amplitude, int harmonics) {
  JordanCurve c;
  c.m = 3;
  c.eval = [amplitude, harmonics](double t, std::vector<double>& p, std::vector<double>& d) {
    p = {std::cos(t), std::sin(t), amplitude * std::cos(harmonics * t)};
    d = {-std::sin(t), std::cos(t), -amplitude * harmonics * std::sin(harmonics * t)};
  };
  c.length = polygonal_length(c);
  return c;
}

JordanCurve spline_curve(const std::vector<double>& theta,
                         const std::vector<std::vector<double>>& points) {
  const int n = int(theta.size());
  if (n < 3 || points.size() != theta.size())
    throw std::invalid_argument("spline_curve: need >= 3 samples with matching sizes");
  for (int k = 0; k + 1 < n; ++k)
    if (!(theta[std::size_t(k)] < theta[std::size_t(k + 1)]))
      throw std::invalid_argument("spline_curve: theta must be strictly increasing");
  const int m = int(points.front().size());

  // periodic C^2 cubic spline: solve the cyclic tridiagonal system for the
  // second derivatives M_k (Sherman-Morrison on the standard tridiagonal)
  std::vector<double> h(std::size_t(n), 0.0);
  for (int k = 0; k < n; ++k) {
    const double t0 = theta[std::size_t(k)];
    const double t1 = k + 1 < n ? theta[std::size_t(k + 1)] : theta[0] + 2 * kPi;
    h[std::size_t(k)] = t1 - t0;
    if (h[std::size_t(k)] <= 0) throw std::invalid_argument("spline_curve: bad spacing");
  }
  auto wrap = [&](int k) { return (k % n + n) % n; };

  std::vector<std::vector<double>> M(std::size_t(n), std::vector<double>(std::size_t(m), 0.0));
  // cyclic system: for each dimension, a_k M_{k-1} + b_k M_k + c_k M_{k+1} = d_k
  for (int dim = 0; dim < m; ++dim) {
    std::vector<double> a(std::size_t(n), 0.0), b(std::size_t(n), 0.0), c(std::size_t(n), 0.0),
        d(std::size_t(n), 0.0);
    for (int k = 0; k < n; ++k) {
      const double hm = h[std::size_t(wrap(k - 1))], hk = h[std::size_t(k)];
      a[std::size_t(k)] = hm / 6.0;
      b[std::size_t(k)] = (hm + hk) / 3.0;
      c[std::size_t(k)] = hk / 6.0;
      const double fk = points[std::size_t(k)][std::size_t(dim)];
      const double fp = points[std::size_t(wrap(k + 1))][std::size_t(dim)];
      const double fm = points[std::size_t(wrap(k - 1))][std::size_t(dim)];
      d[std::size_t(k)] = (fp - fk) / hk - (fk - fm) / hm;
    }
    // Sherman-Morrison for the cyclic system
    auto solve_tri = [&](std::vector<double> dd) {
      std::vector<double> bp = b, x(std::size_t(n), 0.0);
      // plain tridiagonal (ignoring the corner terms a[0], c[n-1])
      for (int k = 1; k < n; ++k) {
        const double w = a[std::size_t(k)] / bp[std::size_t(k - 1)];
        bp[std::size_t(k)] -= w * c[std::size_t(k - 1)];
        dd[std::size_t(k)] -= w * dd[std::size_t(k - 1)];
      }
      x[std::size_t(n - 1)] = dd[std::size_t(n - 1)] / bp[std::size_t(n - 1)];
      for (int k = n - 2; k >= 0; --k)
        x[std::size_t(k)] = (dd[std::size_t(k)] - c[std::size_t(k)] * x[std::size_t(k + 1)]) /
                            bp[std::size_t(k)];
      return x;
    };
    const double alpha = a[0], beta = c[std::size_t(n - 1)];
    const double gamma = -b[0];
    std::vector<double> bmod = b;
    b[0] -= gamma;
    b[std::size_t(n - 1)] -= alpha * beta / gamma;
    std::vector<double> u(std::size_t(n), 0.0);
    u[0] = gamma;
    u[std::size_t(n - 1)] = alpha;
    std::vector<double> x1 = solve_tri(d);
    std::vector<double> x2 = solve_tri(u);
    const double fact = (x1[0] + beta * x1[std::size_t(n - 1)] / gamma) /
                        (1.0 + x2[0] + beta * x2[std::size_t(n - 1)] / gamma);
    for (int k = 0; k < n; ++k) M[std::size_t(k)][std::size_t(dim)] = x1[std::size_t(k)] - fact * x2[std::size_t(k)];
    b = bmod;
  }

  JordanCurve curve;
  curve.m = m;
  auto th0 = theta;
  curve.eval = [n, m, th0, points, M, h, wrap](double t, std::vector<double>& p,
                                               std::vector<double>& d) {
    // reduce t into [theta0, theta0 + 2pi)
    double tt = std::fmod(t - th0[0], 2 * kPi);
    if (tt < 0) tt += 2 * kPi;
    tt += th0[0];
    int k = n - 1;
    for (int i = 0; i + 1 < n; ++i)
      if (tt >= th0[std::size_t(i)] && tt < th0[std::size_t(i + 1)]) {
        k = i;
        break;
      }
    const double hk = h[std::size_t(k)];
    const double t0 = th0[std::size_t(k)];
    const double A = (t0 + hk - tt) / hk, B = (tt - t0) / hk;
    p.assign(std::size_t(m), 0.0);
    d.assign(std::size_t(m), 0.0);
    for (int dim = 0; dim < m; ++dim) {
      const double f0 = points[std::size_t(k)][std::size_t(dim)];
      const double f1 = points[std::size_t(wrap(k + 1))][std::size_t(dim)];
      const double M0 = M[std::size_t(k)][std::size_t(dim)];
      const double M1 = M[std::size_t(wrap(k + 1))][std::size_t(dim)];
      p[std::size_t(dim)] = A * f0 + B * f1 +
                            ((A * A * A - A) * M0 + (B * B * B - B) * M1) * hk * hk / 6.0;
      d[std::size_t(dim)] = (f1 - f0) / hk +
                            ((3 * B * B - 1) * M1 - (3 * A * A - 1) * M0) * hk / 6.0;
    }
  };
  curve.length = polygonal_length(curve);
  return curve;
}

JordanCurve curve_from_csv(const std::string& path) {
  std::FILE* f = std::fopen(path.c_str(), "r");
  if (!f) throw std::runtime_error("curve_from_csv: cannot open " + path);
  char line[4096];
  std::vector<double> theta;
  std::vector<std::vector<double>> pts;
  bool header = true;
  while (std::fgets(line, sizeof line, f)) {
    if (header) {  // skip "theta,x,y,..."
      header = false;
      continue;
    }
    std::vector<double> row;
    char* tok = std::strtok(line, ",\n");
    while (tok) {
      row.push_back(std::atof(tok));
      tok = std::strtok(nullptr, ",\n");
    }
    if (row.size() < 3) continue;
    theta.push_back(row[0]);
    pts.push_back(std::vector<double>(row.begin() + 1, row.end()));
  }
  std::fclose(f);
  return spline_curve(theta, pts);
}

}  // namespace conflab::plateau
