#pragma once

#include <array>
#include <cmath>
#include <cstddef>

// Truncated bivariate Taylor expansions of total degree <= 4. Charts are
// written once against this scalar type and yield exact derivatives up to
// fourth order, which is what the pointwise Willmore operators need.

namespace conflab {

struct Jet {
  // coefficient of h^i k^j at index off[i+j] + j; f(x+h,y+k) = sum c_ij h^i k^j
  static constexpr int N = 15;
  static constexpr std::array<int, 5> off = {0, 1, 3, 6, 10};
  std::array<double, N> c{};

  Jet() = default;
  explicit Jet(double v) { c[0] = v; }

  static int idx(int i, int j) { return off[i + j] + j; }

  static Jet var_x(double x0) { Jet j(x0); j.c[idx(1, 0)] = 1.0; return j; }
  static Jet var_y(double y0) { Jet j(y0); j.c[idx(0, 1)] = 1.0; return j; }

  double value() const { return c[0]; }
  // partial derivative d^{i+j} f / dx^i dy^j
  double d(int i, int j) const {
    static constexpr double fact[5] = {1, 1, 2, 6, 24};
    return c[idx(i, j)] * fact[i] * fact[j];
  }

  Jet operator-() const { Jet r; for (int i = 0; i < N; ++i) r.c[i] = -c[i]; return r; }
  Jet& operator+=(const Jet& o) { for (int i = 0; i < N; ++i) c[i] += o.c[i]; return *this; }
  Jet& operator-=(const Jet& o) { for (int i = 0; i < N; ++i) c[i] -= o.c[i]; return *this; }
  Jet& operator+=(double v) { c[0] += v; return *this; }
  Jet& operator-=(double v) { c[0] -= v; return *this; }
};

inline Jet operator+(Jet a, const Jet& b) { a += b; return a; }
inline Jet operator-(Jet a, const Jet& b) { a -= b; return a; }
inline Jet operator+(Jet a, double b) { a += b; return a; }
inline Jet operator+(double a, Jet b) { b += a; return b; }
inline Jet operator-(Jet a, double b) { a -= b; return a; }
inline Jet operator-(double a, const Jet& b) { Jet r = -b; r += a; return r; }

inline Jet operator*(const Jet& a, const Jet& b) {
  Jet r;
  for (int da = 0; da <= 4; ++da)
    for (int ja = 0; ja <= da; ++ja) {
      const double ca = a.c[Jet::off[da] + ja];
      if (ca == 0.0) continue;
      const int ia = da - ja;
      for (int db = 0; db + da <= 4; ++db)
        for (int jb = 0; jb <= db; ++jb) {
          const double cb = b.c[Jet::off[db] + jb];
          if (cb == 0.0) continue;
          r.c[Jet::idx(ia + db - jb, ja + jb)] += ca * cb;
        }
    }
  return r;
}
inline Jet operator*(Jet a, double s) { for (auto& v : a.c) v *= s; return a; }
inline Jet operator*(double s, Jet a) { return a * s; }

// g(f) for univariate g with derivative table d[0..4] at f.value()
inline Jet jet_compose(const Jet& f, const std::array<double, 5>& d) {
  Jet w = f; w.c[0] = 0.0;
  Jet r(d[4] / 24.0);
  r = r * w; r += d[3] / 6.0;
  r = r * w; r += d[2] / 2.0;
  r = r * w; r += d[1];
  r = r * w; r += d[0];
  return r;
}

inline Jet jrecip(const Jet& a) {
  const double u = a.value();
  const double u2 = u * u;
  return jet_compose(a, {1.0 / u, -1.0 / u2, 2.0 / (u2 * u), -6.0 / (u2 * u2), 24.0 / (u2 * u2 * u)});
}
inline Jet operator/(const Jet& a, const Jet& b) { return a * jrecip(b); }
inline Jet operator/(const Jet& a, double s) { return a * (1.0 / s); }
inline Jet operator/(double a, const Jet& b) { return jrecip(b) * a; }

inline Jet jsqrt(const Jet& a) {
  const double s = std::sqrt(a.value());
  const double s3 = s * s * s, s5 = s3 * s * s, s7 = s5 * s * s;
  return jet_compose(a, {s, 0.5 / s, -0.25 / s3, 0.375 / s5, -0.9375 / s7});
}
inline Jet jexp(const Jet& a) {
  const double e = std::exp(a.value());
  return jet_compose(a, {e, e, e, e, e});
}
inline Jet jlog(const Jet& a) {
  const double u = a.value();
  const double u2 = u * u;
  return jet_compose(a, {std::log(u), 1.0 / u, -1.0 / u2, 2.0 / (u2 * u), -6.0 / (u2 * u2)});
}
inline Jet jsin(const Jet& a) {
  const double s = std::sin(a.value()), c = std::cos(a.value());
  return jet_compose(a, {s, c, -s, -c, s});
}
inline Jet jcos(const Jet& a) {
  const double s = std::sin(a.value()), c = std::cos(a.value());
  return jet_compose(a, {c, -s, -c, s, c});
}
inline Jet jsinh(const Jet& a) {
  const double s = std::sinh(a.value()), c = std::cosh(a.value());
  return jet_compose(a, {s, c, s, c, s});
}
inline Jet jcosh(const Jet& a) {
  const double s = std::sinh(a.value()), c = std::cosh(a.value());
  return jet_compose(a, {c, s, c, s, c});
}

// scalar overloads so chart code can be written generically
inline double jsqrt(double a) { return std::sqrt(a); }
inline double jexp(double a) { return std::exp(a); }
inline double jlog(double a) { return std::log(a); }
inline double jsin(double a) { return std::sin(a); }
inline double jcos(double a) { return std::cos(a); }
inline double jsinh(double a) { return std::sinh(a); }
inline double jcosh(double a) { return std::cosh(a); }
inline double jrecip(double a) { return 1.0 / a; }

}  // namespace conflab
