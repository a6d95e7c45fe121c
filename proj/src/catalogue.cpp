#include "conflab/willmore/catalogue.hpp"

#include <cmath>
#include <numbers>

namespace conflab::wil {

namespace {
constexpr double kPi = std::numbers::pi;
}

Chart sphere_chart(double radius, bool north, double tilt) {
  Chart c;
  c.m = 3;
  c.conformal_hint = true;
  const double ct = std::cos(tilt), st = std::sin(tilt);
  c.fn = [radius, north, ct, st](const Jet& x, const Jet& yin) {
    // the north patch flips the second parameter so the atlas orientation
    // (and with it the Gauss map) is globally consistent
    const Jet y = north ? -yin : yin;
    const Jet r2 = x * x + y * y;
    const Jet inv = jrecip(1.0 + r2);
    Jet px = x * 2.0 * inv;
    Jet py = y * 2.0 * inv;
    Jet pz = (r2 - 1.0) * inv;
    if (north) pz = pz * (-1.0);
    // tilt: rotate in the (x,z)-plane, reparametrizing the same sphere
    std::vector<Jet> out(3);
    out[0] = (px * ct + pz * st) * radius;
    out[1] = py * radius;
    out[2] = (pz * ct - px * st) * radius;
    return out;
  };
  return c;
}

Chart clifford_chart() {
  Chart c;
  c.m = 3;
  c.conformal_hint = true;
  c.fn = [](const Jet& th, const Jet& ph) {
    const double s2 = std::sqrt(2.0);
    const Jet den = jrecip(s2 - jsin(ph));
    std::vector<Jet> out(3);
    out[0] = jcos(th) * den;
    out[1] = jsin(th) * den;
    out[2] = jcos(ph) * den;
    return out;
  };
  return c;
}

Chart cylinder_chart(double radius) {
  Chart c;
  c.m = 3;
  c.conformal_hint = (radius == 1.0);
  c.fn = [radius](const Jet& x, const Jet& y) {
    std::vector<Jet> out(3);
    out[0] = jcos(x) * radius;
    out[1] = jsin(x) * radius;
    out[2] = y;
    return out;
  };
  return c;
}

Chart catenoid_chart() {
  Chart c;
  c.m = 3;
  c.conformal_hint = true;
  c.fn = [](const Jet& x, const Jet& y) {
    std::vector<Jet> out(3);
    out[0] = jcosh(y) * jcos(x);
    out[1] = jcosh(y) * jsin(x);
    out[2] = x * 0.0 + y;
    return out;
  };
  return c;
}

Chart graph_chart(double amplitude) {
  Chart c;
  c.m = 3;
  c.fn = [amplitude](const Jet& x, const Jet& y) {
    std::vector<Jet> out(3);
    out[0] = x;
    out[1] = y;
    out[2] = jsin(x) * jsin(y) * amplitude;
    return out;
  };
  return c;
}

Chart shear_chart() {
  Chart c;
  c.m = 3;
  c.fn = [](const Jet& x, const Jet& y) {
    std::vector<Jet> out(3);
    out[0] = x + y * 0.5;
    out[1] = y;
    out[2] = x * 0.0;
    return out;
  };
  return c;
}

Chart torus_rev_chart(double R, double r) {
  Chart c;
  c.m = 3;
  c.fn = [R, r](const Jet& u, const Jet& v) {
    const Jet w = R + jcos(v) * r;
    std::vector<Jet> out(3);
    out[0] = w * jcos(u);
    out[1] = w * jsin(u);
    out[2] = jsin(v) * r;
    return out;
  };
  return c;
}

Chart window_chart(const Chart& base, mesh::Vec2 center, double scale) {
  Chart c = base;
  c.fn = [fn = base.fn, center, scale](const Jet& x, const Jet& y) {
    return fn(x * scale + center.x, y * scale + center.y);
  };
  return c;
}

Surface make_sphere(double radius, int disc_level, double tilt) {
  Surface s;
  s.name = "sphere";
  s.closed = true;
  s.genus = 0;
  s.multiplicity = 1;
  s.w_ref = 4.0 * kPi;
  Patch south{sphere_chart(radius, false, tilt), false, 64, disc_level, 1.0};
  Patch north{sphere_chart(radius, true, tilt), false, 64, disc_level, 1.0};
  s.patches = {south, north};
  return s;
}

Surface make_clifford(int grid_n) {
  Surface s;
  s.name = "clifford";
  s.closed = true;
  s.genus = 1;
  s.multiplicity = 1;
  s.w_ref = 2.0 * kPi * kPi;
  Patch p{clifford_chart(), true, grid_n, 5, 1.0};
  s.patches = {p};
  return s;
}

Surface make_torus_rev(double R, double r, int grid_n) {
  Surface s;
  s.name = "torus_rev";
  s.closed = true;
  s.genus = 1;
  s.multiplicity = 1;
  Patch p{torus_rev_chart(R, r), true, grid_n, 5, 1.0};
  s.patches = {p};
  return s;
}

Surface make_sphere_double(double radius, int disc_level) {
  Surface s = make_sphere(radius, disc_level);
  s.name = "sphere_double";
  s.multiplicity = 2;
  s.w_ref = 8.0 * kPi;
  auto base = s.patches;
  s.patches.insert(s.patches.end(), base.begin(), base.end());
  return s;
}

}  // namespace conflab::wil
