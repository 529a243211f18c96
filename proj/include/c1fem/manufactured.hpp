#pragma once

#include <cmath>
#include <functional>
#include <numbers>
#include <span>
#include <vector>

#include "assembly.hpp"
#include "mesh.hpp"
#include "ref_element.hpp"

namespace c1fem {

using ScalarField = std::function<double(double, double)>;

/// Exact solution of the clamped plate problem with its derivatives through
/// order two and the load f = Lap^2 u.
struct ManufacturedSolution {
  ScalarField u, ux, uy, uxx, uxy, uyy, f;

  /// Value or first/mixed derivative, for nodal interpolation.
  double operator()(double x, double y, DofKind kind) const {
    switch (kind) {
    case DofKind::Value: return u(x, y);
    case DofKind::DX: return ux(x, y);
    case DofKind::DY: return uy(x, y);
    case DofKind::DXY: return uxy(x, y);
    }
    return 0.0;
  }
};

/// u = sin^2(pi x) sin^2(pi y) on the unit square.
inline ManufacturedSolution manufactured() {
  using std::numbers::pi;
  // u = s(x) s(y), s(t) = sin^2(pi t)
  auto s = [](double t) { return std::pow(std::sin(pi * t), 2); };
  auto s1 = [](double t) { return pi * std::sin(2 * pi * t); };
  auto s2 = [](double t) { return 2 * pi * pi * std::cos(2 * pi * t); };
  auto s4 = [](double t) { return -8 * std::pow(pi, 4) * std::cos(2 * pi * t); };
  ManufacturedSolution m;
  m.u = [=](double x, double y) { return s(x) * s(y); };
  m.ux = [=](double x, double y) { return s1(x) * s(y); };
  m.uy = [=](double x, double y) { return s(x) * s1(y); };
  m.uxx = [=](double x, double y) { return s2(x) * s(y); };
  m.uxy = [=](double x, double y) { return s1(x) * s1(y); };
  m.uyy = [=](double x, double y) { return s(x) * s2(y); };
  m.f = [=](double x, double y) { return s4(x) * s(y) + 2 * s2(x) * s2(y) + s(x) * s4(y); };
  return m;
}

/// u = x^2 (1-x)^2 y^2 (1-y)^2, which lies in Q_4 and in P_8.
inline ManufacturedSolution polynomial_bubble() {
  auto X = [](double t) { return t * t * (1 - t) * (1 - t); };
  auto X1 = [](double t) { return 2 * t - 6 * t * t + 4 * t * t * t; };
  auto X2 = [](double t) { return 2 - 12 * t + 12 * t * t; };
  ManufacturedSolution m;
  m.u = [=](double x, double y) { return X(x) * X(y); };
  m.ux = [=](double x, double y) { return X1(x) * X(y); };
  m.uy = [=](double x, double y) { return X(x) * X1(y); };
  m.uxx = [=](double x, double y) { return X2(x) * X(y); };
  m.uxy = [=](double x, double y) { return X1(x) * X1(y); };
  m.uyy = [=](double x, double y) { return X(x) * X2(y); };
  m.f = [=](double x, double y) { return 24 * X(y) + 2 * X2(x) * X2(y) + 24 * X(x); };
  return m;
}

/// Global nodal interpolant of `target` (callable (x, y, DofKind) -> double).
template <class Target>
std::vector<double> interpolate_global(const MeshTopology& mesh, const GlobalDofMap& map, const ElementBasis& el,
                                       Target&& target) {
  check_compatible(map, el);
  std::vector<double> g(static_cast<std::size_t>(map.num_dofs), 0.0);
  for (int c = 0; c < mesh.num_cells(); ++c) {
    const auto local = local_interpolate(el, target, mesh.cell_rect(c));
    const auto& l2g = map.cell_dofs[c];
    for (std::size_t i = 0; i < l2g.size(); ++i)
      g[l2g[i]] = local[i];
  }
  return g;
}

struct ErrorNorms {
  double l2 = 0.0;
  double h2 = 0.0;
};

/// ||u - u_h||_0 and |u - u_h|_2 (mixed term counted twice) by cellwise
/// tensor Gauss quadrature with quad_n points per direction.
inline ErrorNorms error_norms(std::span<const double> coeffs, const ManufacturedSolution& exact,
                              const MeshTopology& mesh, const GlobalDofMap& map, const ElementBasis& el,
                              int quad_n) {
  check_compatible(map, el);
  const ReferenceTables tab(el, quad_n);
  const double h = mesh.h;
  const auto scale = dof_scales(el, h);
  const std::size_t m = el.size(), nq = tab.rule.size();
  long double l2 = 0.0L, h2 = 0.0L;
  std::vector<long double> c(m);
  for (int cell = 0; cell < mesh.num_cells(); ++cell) {
    const auto& l2g = map.cell_dofs[cell];
    for (std::size_t i = 0; i < m; ++i)
      c[i] = coeffs[l2g[i]] * scale[i];
    const Rect r = mesh.cell_rect(cell);
    long double cl2 = 0.0L, ch2 = 0.0L;
    for (std::size_t q = 0; q < nq; ++q) {
      long double v = 0.0L, vxx = 0.0L, vxy = 0.0L, vyy = 0.0L;
      for (std::size_t i = 0; i < m; ++i) {
        v += c[i] * tab.value(q, i);
        vxx += c[i] * tab.dxx(q, i);
        vxy += c[i] * tab.dxy(q, i);
        vyy += c[i] * tab.dyy(q, i);
      }
      const double x = r.x0 + h * tab.rule.points[q].x, y = r.y0 + h * tab.rule.points[q].y;
      const long double ev = exact.u(x, y) - v;
      const long double exx = exact.uxx(x, y) - vxx / (h * h);
      const long double exy = exact.uxy(x, y) - vxy / (h * h);
      const long double eyy = exact.uyy(x, y) - vyy / (h * h);
      cl2 += tab.rule.weights[q] * ev * ev;
      ch2 += tab.rule.weights[q] * (exx * exx + 2 * exy * exy + eyy * eyy);
    }
    l2 += h * h * cl2;
    h2 += h * h * ch2;
  }
  return {static_cast<double>(std::sqrt(l2)), static_cast<double>(std::sqrt(h2))};
}

} // namespace c1fem
