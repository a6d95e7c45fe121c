#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "conflab/core/jet.hpp"

using namespace conflab;

namespace {
// reference function with all the primitives used by the charts
template <class T>
T ref(T x, T y) {
  return jsin(x * y) + jexp(x * 0.3) / (1.0 + x * x + y * y) + jsqrt(2.0 + x) * jlog(3.0 + y) +
         jcosh(x * 0.5) - jcos(y);
}

double fd(double x0, double y0, int di, int dj) {
  const double h = 1e-5;
  auto f = [](double x, double y) { return ref<double>(x, y); };
  if (di == 1 && dj == 0) return (f(x0 + h, y0) - f(x0 - h, y0)) / (2 * h);
  if (di == 0 && dj == 1) return (f(x0, y0 + h) - f(x0, y0 - h)) / (2 * h);
  if (di == 2 && dj == 0) return (f(x0 + h, y0) - 2 * f(x0, y0) + f(x0 - h, y0)) / (h * h);
  if (di == 0 && dj == 2) return (f(x0, y0 + h) - 2 * f(x0, y0) + f(x0, y0 - h)) / (h * h);
  if (di == 1 && dj == 1)
    return (f(x0 + h, y0 + h) - f(x0 + h, y0 - h) - f(x0 - h, y0 + h) + f(x0 - h, y0 - h)) /
           (4 * h * h);
  return 0;
}
}  // namespace

TEST_CASE("jet derivatives match finite differences") {
  const double x0 = 0.37, y0 = -0.21;
  Jet r = ref(Jet::var_x(x0), Jet::var_y(y0));
  CHECK(r.value() == doctest::Approx(ref<double>(x0, y0)).epsilon(1e-14));
  CHECK(r.d(1, 0) == doctest::Approx(fd(x0, y0, 1, 0)).epsilon(1e-8));
  CHECK(r.d(0, 1) == doctest::Approx(fd(x0, y0, 0, 1)).epsilon(1e-8));
  CHECK(r.d(2, 0) == doctest::Approx(fd(x0, y0, 2, 0)).epsilon(1e-5));
  CHECK(r.d(0, 2) == doctest::Approx(fd(x0, y0, 0, 2)).epsilon(1e-5));
  CHECK(r.d(1, 1) == doctest::Approx(fd(x0, y0, 1, 1)).epsilon(1e-5));
}

TEST_CASE("fourth-order coefficients are exact on polynomials") {
  // f = x^2 y^2 has d4/dx2dy2 = 4
  Jet x = Jet::var_x(1.3), y = Jet::var_y(-0.4);
  Jet f = x * x * y * y;
  CHECK(f.d(2, 2) == doctest::Approx(4.0).epsilon(1e-13));
  CHECK(f.d(3, 0) == doctest::Approx(0.0).epsilon(1e-13));
  // x^4: fourth x-derivative 24
  Jet g = x * x * x * x;
  CHECK(g.d(3, 1) == doctest::Approx(0.0).epsilon(1e-13));
  CHECK((g).c[Jet::idx(4, 0)] * 24.0 == doctest::Approx(24.0).epsilon(1e-13));
}

TEST_CASE("division and sqrt are inverses") {
  Jet x = Jet::var_x(0.8), y = Jet::var_y(0.1);
  Jet a = 1.0 + x * x + jsin(y);
  Jet b = a / a;
  CHECK(b.value() == doctest::Approx(1.0).epsilon(1e-14));
  for (int i = 1; i < Jet::N; ++i) CHECK(std::fabs(b.c[size_t(i)]) < 1e-13);
  Jet s = jsqrt(a) * jsqrt(a);
  for (int i = 0; i < Jet::N; ++i) CHECK(s.c[size_t(i)] == doctest::Approx(a.c[size_t(i)]).epsilon(1e-12));
}
