// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <vector>

namespace hexdiv {

/// Tensor Gauss-Legendre rule on [0,1]^dim.  Weights sum to 1 and the rule
/// integrates monomials exactly up to `degree` in each variable; both facts
/// are verified when the rule is built.
struct QuadratureRule {
  int dim = 1;
  int degree = 0;
  std::vector<std::array<double, 3>> points;  // trailing coordinates unused for dim < 3
  std::vector<double> weights;

  std::size_t size() const { return points.size(); }
};

/// 1-D Gauss-Legendre nodes/weights on [0,1] (n points, exact to degree 2n-1).
void gauss_legendre_01(int n, std::vector<double>& x, std::vector<double>& w);

/// Tensor rule on [0,1]^k exact to `degree` per variable.  Cached.
const QuadratureRule& gauss_rule(int k, int degree);

}  // namespace hexdiv
