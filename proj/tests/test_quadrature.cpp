// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>

#include "hexdiv/quadrature.hpp"

using namespace hexdiv;

TEST_CASE("1-point rule integrates x exactly") {
  const QuadratureRule& r = gauss_rule(1, 1);
  CHECK(r.size() == 1);
  double s = 0;
  for (std::size_t q = 0; q < r.size(); ++q) s += r.weights[q] * r.points[q][0];
  CHECK(s == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("3-point rule integrates x^5 exactly") {
  const QuadratureRule& r = gauss_rule(1, 5);
  CHECK(r.size() == 3);
  double s = 0;
  for (std::size_t q = 0; q < r.size(); ++q) s += r.weights[q] * std::pow(r.points[q][0], 5);
  CHECK(s == doctest::Approx(1.0 / 6.0).epsilon(1e-14));
}

TEST_CASE("2-D rule of degree 6 integrates x^2 y^4") {
  const QuadratureRule& r = gauss_rule(2, 6);
  double s = 0;
  for (std::size_t q = 0; q < r.size(); ++q)
    s += r.weights[q] * std::pow(r.points[q][0], 2) * std::pow(r.points[q][1], 4);
  CHECK(s == doctest::Approx(1.0 / 15.0).epsilon(1e-14));
}

TEST_CASE("weights sum to one in all dimensions") {
  for (int k = 1; k <= 3; ++k) {
    const QuadratureRule& r = gauss_rule(k, 9);
    double s = 0;
    for (double w : r.weights) s += w;
    CHECK(s == doctest::Approx(1.0).epsilon(1e-14));
  }
}
