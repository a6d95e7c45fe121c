#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "conflab/core/parallel.hpp"

using namespace conflab;

TEST_CASE("for_each covers every index once") {
  std::vector<int> hits(100000, 0);
  par::for_each(100000, [&](std::int64_t i) { hits[size_t(i)]++; });
  for (int h : hits) CHECK(h == 1);
}

TEST_CASE("chunked sum is bitwise identical, serial vs parallel") {
  const std::int64_t n = 1 << 20;
  auto term = [](std::int64_t i) { return std::sin(1e-6 * double(i)) / (1.0 + double(i % 97)); };
  par::set_enabled(false);
  const double s_serial = par::sum(n, term);
  par::set_enabled(true);
  const double s_par = par::sum(n, term);
  CHECK(s_serial == s_par);  // exact: same chunk decomposition, same combine order
}

TEST_CASE("sum handles empty and small ranges") {
  CHECK(par::sum(0, [](std::int64_t) { return 1.0; }) == 0.0);
  CHECK(par::sum(3, [](std::int64_t i) { return double(i); }) == 3.0);
}
