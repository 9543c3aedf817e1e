#include "mrdwr/fem/quadrature.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace mrdwr::fem {

namespace {

// Legendre P_n and P_n' on [-1,1]
void legendre(int n, double x, double &p, double &dp) {
  double p0 = 1.0, p1 = x;
  if (n == 0) {
    p = 1.0;
    dp = 0.0;
    return;
  }
  for (int k = 2; k <= n; ++k) {
    const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
    p0 = p1;
    p1 = pk;
  }
  p = p1;
  dp = n * (x * p1 - p0) / (x * x - 1.0);
}

} // namespace

QuadratureRule gauss_points(int n) {
  if (n < 1 || n > 5)
    throw std::invalid_argument("Gauss rule supports 1..5 points");
  QuadratureRule r;
  for (int k = 0; k < n; ++k) {
    double x = -std::cos(std::numbers::pi * (k + 0.75) / (n + 0.5));
    double p = 0.0, dp = 1.0;
    for (int it = 0; it < 100; ++it) {
      legendre(n, x, p, dp);
      const double dx = p / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16)
        break;
    }
    legendre(n, x, p, dp);
    r.points.push_back(0.5 * (x + 1.0));
    r.weights.push_back(1.0 / ((1.0 - x * x) * dp * dp));
  }
  return r;
}

QuadratureRule gauss_lobatto_points(int n) {
  if (n < 2 || n > 5)
    throw std::invalid_argument("Gauss-Lobatto rule supports 2..5 points");
  const int m = n - 1;
  QuadratureRule r;
  auto weight = [&](double x) {
    double p, dp;
    legendre(m, x, p, dp);
    return 1.0 / (m * (m + 1.0) * p * p);
  };
  r.points.push_back(0.0);
  r.weights.push_back(weight(-1.0));
  // interior nodes are the roots of P_m'
  for (int k = 1; k < m; ++k) {
    double x = -std::cos(std::numbers::pi * k / m);
    for (int it = 0; it < 100; ++it) {
      double p, dp;
      legendre(m, x, p, dp);
      // P_m'' from the Legendre equation
      const double d2p = (2.0 * x * dp - m * (m + 1.0) * p) / (1.0 - x * x);
      const double dx = dp / d2p;
      x -= dx;
      if (std::abs(dx) < 1e-16)
        break;
    }
    r.points.push_back(0.5 * (x + 1.0));
    r.weights.push_back(weight(x));
  }
  r.points.push_back(1.0);
  r.weights.push_back(weight(1.0));
  return r;
}

QuadratureRule2D tensor_rule(const QuadratureRule &rule) {
  QuadratureRule2D r;
  for (std::size_t b = 0; b < rule.size(); ++b)
    for (std::size_t a = 0; a < rule.size(); ++a) {
      r.points.push_back({rule.points[a], rule.points[b]});
      r.weights.push_back(rule.weights[a] * rule.weights[b]);
    }
  return r;
}

} // namespace mrdwr::fem
