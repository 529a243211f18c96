#pragma once

#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "errors.hpp"

namespace c1fem {

/// Gauss-Legendre rule on [0, 1].
struct QuadRule1D {
  std::vector<double> nodes;
  std::vector<double> weights;
  int n() const noexcept { return static_cast<int>(nodes.size()); }
};

struct Point2 {
  double x = 0.0;
  double y = 0.0;
};

/// Axis-aligned rectangle [x0, x0 + hx] x [y0, y0 + hy].
struct Rect {
  double x0 = 0.0;
  double y0 = 0.0;
  double hx = 1.0;
  double hy = 1.0;
};

/// Tensor-product rule on a rectangle. n1d is the point count per direction.
struct QuadRule2D {
  std::vector<Point2> points;
  std::vector<double> weights;
  int n1d = 0;
  std::size_t size() const noexcept { return points.size(); }
};

inline QuadRule1D gauss1d(int n) {
  if (n < 1 || n > 30)
    throw InvalidArgument("gauss1d: point count must lie in [1, 30], got " + std::to_string(n));
  QuadRule1D rule;
  rule.nodes.resize(static_cast<std::size_t>(n));
  rule.weights.resize(static_cast<std::size_t>(n));
  const int half = (n + 1) / 2;
  for (int i = 0; i < half; ++i) {
    // Chebyshev-type estimate of the i-th largest root on [-1, 1]
    double s = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    bool converged = false;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = s;
      for (int m = 1; m < n; ++m) {
        const double p2 = ((2 * m + 1) * s * p1 - m * p0) / (m + 1);
        p0 = p1;
        p1 = p2;
      }
      const double pn = (n == 1) ? s : p1;
      const double pnm1 = (n == 1) ? 1.0 : p0;
      dp = n * (s * pn - pnm1) / (s * s - 1.0);
      const double step = pn / dp;
      s -= step;
      if (std::abs(step) <= 1e-16) {
        converged = true;
        break;
      }
    }
    if (!converged && n > 1)
      throw SolverError("gauss1d: Newton iteration did not converge");
    if (n == 1) {
      s = 0.0;
      dp = 1.0;
    } else {
      // re-evaluate the derivative at the converged root
      double p0 = 1.0, p1 = s;
      for (int m = 1; m < n; ++m) {
        const double p2 = ((2 * m + 1) * s * p1 - m * p0) / (m + 1);
        p0 = p1;
        p1 = p2;
      }
      dp = n * (s * p1 - p0) / (s * s - 1.0);
    }
    const double w = 2.0 / ((1.0 - s * s) * dp * dp);
    // map to [0, 1]; roots ordered ascending
    rule.nodes[i] = 0.5 * (1.0 - s);
    rule.nodes[n - 1 - i] = 0.5 * (1.0 + s);
    rule.weights[i] = 0.5 * w;
    rule.weights[n - 1 - i] = 0.5 * w;
  }
  if (n % 2 == 1)
    rule.nodes[n / 2] = 0.5;
  return rule;
}

inline QuadRule2D tensor_rule(const QuadRule1D& rule, const Rect& rect = {}) {
  if (!(rect.hx > 0.0) || !(rect.hy > 0.0))
    throw InvalidArgument("tensor_rule: rectangle sizes must be positive");
  QuadRule2D out;
  out.n1d = rule.n();
  out.points.reserve(static_cast<std::size_t>(rule.n() * rule.n()));
  out.weights.reserve(out.points.capacity());
  for (int i = 0; i < rule.n(); ++i)
    for (int j = 0; j < rule.n(); ++j) {
      out.points.push_back({rect.x0 + rect.hx * rule.nodes[i], rect.y0 + rect.hy * rule.nodes[j]});
      out.weights.push_back(rect.hx * rect.hy * rule.weights[i] * rule.weights[j]);
    }
  return out;
}

template <class F>
double integrate(F&& f, const QuadRule2D& rule) {
  double sum = 0.0;
  for (std::size_t q = 0; q < rule.size(); ++q) {
    const auto [x, y] = rule.points[q];
    const double v = f(x, y);
    if (!std::isfinite(v))
      throw NonFiniteError("integrate: non-finite integrand at (" + std::to_string(x) + ", " +
                               std::to_string(y) + ")",
                           x, y);
    sum += rule.weights[q] * v;
  }
  return sum;
}

} // namespace c1fem
