// SPDX-License-Identifier: Apache-2.0
#include "hexdiv/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

namespace hexdiv {

void gauss_legendre_01(int n, std::vector<double>& x, std::vector<double>& w) {
  x.assign(n, 0.0);
  w.assign(n, 0.0);
  // Newton on Legendre P_n over [-1,1], then map to [0,1].
  for (int i = 0; i < n; ++i) {
    double t = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = t;
      for (int k = 2; k <= n; ++k) {
        double p2 = ((2 * k - 1) * t * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (t * p1 - p0) / (t * t - 1.0);
      double dt = p1 / dp;
      t -= dt;
      if (std::abs(dt) < 1e-16) break;
    }
    x[i] = 0.5 * (1.0 - t);  // ascending after loop order flip below
    w[i] = 1.0 / ((1.0 - t * t) * dp * dp);
  }
  // nodes came out descending in t -> ascending in x already; normalize order
  for (int i = 0; i < n / 2; ++i) {
    // ensure ascending x
    if (x[i] > x[n - 1 - i]) {
      std::swap(x[i], x[n - 1 - i]);
      std::swap(w[i], w[n - 1 - i]);
    }
  }
}

namespace {

void verify_rule(const QuadratureRule& r) {
  // Exactness per variable on monomials x^d (and the weight sum).
  double wsum = 0.0;
  for (double w : r.weights) wsum += w;
  if (std::abs(wsum - 1.0) > 1e-13) throw std::logic_error("quadrature weights do not sum to 1");
  for (int axis = 0; axis < r.dim; ++axis) {
    for (int d = 0; d <= r.degree; ++d) {
      double s = 0.0;
      for (std::size_t q = 0; q < r.size(); ++q)
        s += r.weights[q] * std::pow(r.points[q][axis], d);
      if (std::abs(s - 1.0 / (d + 1)) > 1e-12)
        throw std::logic_error("quadrature exactness check failed");
    }
  }
}

QuadratureRule build_rule(int k, int degree) {
  int n = degree / 2 + 1;  // n-point Gauss exact to 2n-1 >= degree
  std::vector<double> x, w;
  gauss_legendre_01(n, x, w);
  QuadratureRule r;
  r.dim = k;
  r.degree = degree;
  if (k == 1) {
    for (int i = 0; i < n; ++i) {
      r.points.push_back({x[i], 0.0, 0.0});
      r.weights.push_back(w[i]);
    }
  } else if (k == 2) {
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        r.points.push_back({x[i], x[j], 0.0});
        r.weights.push_back(w[i] * w[j]);
      }
  } else if (k == 3) {
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int l = 0; l < n; ++l) {
          r.points.push_back({x[i], x[j], x[l]});
          r.weights.push_back(w[i] * w[j] * w[l]);
        }
  } else {
    throw std::invalid_argument("gauss_rule: dim must be 1, 2, or 3");
  }
  verify_rule(r);
  return r;
}

}  // namespace

const QuadratureRule& gauss_rule(int k, int degree) {
  static std::map<std::pair<int, int>, QuadratureRule> cache;
  static std::mutex mu;
  std::lock_guard<std::mutex> lock(mu);
  auto key = std::make_pair(k, degree);
  auto it = cache.find(key);
  if (it == cache.end()) it = cache.emplace(key, build_rule(k, degree)).first;
  return it->second;
}

}  // namespace hexdiv
