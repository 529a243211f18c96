#pragma once

#include <cmath>
#include <cstdio>
#include <ostream>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "linalg.hpp"
#include "mesh.hpp"
#include "quadrature.hpp"
#include "ref_element.hpp"

namespace c1fem {

/// Shape-function values and second derivatives tabulated at the points of a
/// tensor Gauss rule on the reference square. Built once per element and rule
/// and shared by every cell of a uniform mesh.
struct ReferenceTables {
  QuadRule2D rule;
  WideMatrix value;
  WideMatrix dxx;
  WideMatrix dxy;
  WideMatrix dyy;

  ReferenceTables(const ElementBasis& el, int n1d)
      : rule(tensor_rule(gauss1d(n1d))), value(tabulate_wide(el, rule.points)),
        dxx(tabulate_wide(el, rule.points, 2, 0)), dxy(tabulate_wide(el, rule.points, 1, 1)),
        dyy(tabulate_wide(el, rule.points, 0, 2)) {}
};

inline std::vector<double> dof_scales(const ElementBasis& el, double h) {
  std::vector<double> s(el.size());
  for (std::size_t i = 0; i < el.size(); ++i)
    s[i] = dof_scale(el.dofs[i], h, h);
  return s;
}

/// A_ij = int_T (Lap phi_i)(Lap phi_j) on a square cell of size h, where phi_i
/// is the physical dual of DOF i (reference dual times h^(a+b)).
inline WideMatrix local_stiffness_wide(const ElementBasis& el, double h, const ReferenceTables& tab) {
  if (tab.rule.n1d < el.degree() + 1)
    throw InvalidArgument("local_stiffness: quadrature with " + std::to_string(tab.rule.n1d) +
                          " points per direction cannot integrate Q_" + std::to_string(2 * el.degree()) +
                          " exactly");
  if (!(h > 0.0))
    throw InvalidArgument("local_stiffness: cell size must be positive");
  const std::size_t m = el.size(), nq = tab.rule.size();
  WideMatrix lap(nq, m);
  for (std::size_t q = 0; q < nq; ++q)
    for (std::size_t i = 0; i < m; ++i)
      lap(q, i) = tab.dxx(q, i) + tab.dyy(q, i);
  const auto s = dof_scales(el, h);
  WideMatrix A(m, m);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = i; j < m; ++j) {
      long double sum = 0.0L;
      for (std::size_t q = 0; q < nq; ++q)
        sum += tab.rule.weights[q] * lap(q, i) * lap(q, j);
      A(i, j) = A(j, i) = static_cast<long double>(s[i]) * s[j] * sum / (static_cast<long double>(h) * h);
    }
  return A;
}

inline DenseMatrix local_stiffness(const ElementBasis& el, double h, const ReferenceTables& tab) {
  return local_stiffness_wide(el, h, tab).to_dense();
}

inline DenseMatrix local_stiffness(const ElementBasis& el, double h, int n1d) {
  return local_stiffness(el, h, ReferenceTables(el, n1d));
}

/// b_i = int_cell f phi_i.
template <class F>
std::vector<long double> local_load_wide(const ElementBasis& el, const Rect& cell, F&& f,
                                         const ReferenceTables& tab) {
  const std::size_t m = el.size(), nq = tab.rule.size();
  std::vector<double> fq(nq);
  for (std::size_t q = 0; q < nq; ++q) {
    const double x = cell.x0 + cell.hx * tab.rule.points[q].x;
    const double y = cell.y0 + cell.hy * tab.rule.points[q].y;
    fq[q] = f(x, y);
    if (!std::isfinite(fq[q]))
      throw NonFiniteError("local_load: non-finite load at (" + std::to_string(x) + ", " + std::to_string(y) + ")",
                           x, y);
  }
  std::vector<long double> b(m, 0.0L);
  const long double area = static_cast<long double>(cell.hx) * cell.hy;
  for (std::size_t i = 0; i < m; ++i) {
    long double sum = 0.0L;
    for (std::size_t q = 0; q < nq; ++q)
      sum += tab.rule.weights[q] * fq[q] * tab.value(q, i);
    b[i] = dof_scale(el.dofs[i], cell.hx, cell.hy) * area * sum;
  }
  return b;
}

template <class F>
std::vector<double> local_load(const ElementBasis& el, const Rect& cell, F&& f, const ReferenceTables& tab) {
  const auto b = local_load_wide(el, cell, std::forward<F>(f), tab);
  return {b.begin(), b.end()};
}

/// Reduced system on the DOFs not removed by the clamped boundary condition.
struct LinearSystem {
  WideCsrMatrix matrix;
  std::vector<long double> rhs;
  std::vector<int> free_to_global;
  /// -1 for constrained DOFs.
  std::vector<int> global_to_free;
  int full_dim = 0;

  /// Scatters a free-DOF vector into a global vector with zeros on the boundary.
  std::vector<double> expand(std::span<const double> free) const {
    std::vector<double> g(static_cast<std::size_t>(full_dim), 0.0);
    for (std::size_t i = 0; i < free_to_global.size(); ++i)
      g[free_to_global[i]] = free[i];
    return g;
  }
};

inline void check_compatible(const GlobalDofMap& map, const ElementBasis& el) {
  if (map.flavor != el.flavor() || map.k != el.degree() || map.local_size() != el.size())
    throw InvalidArgument("DOF map and element disagree on flavor or degree");
}

/// Scatter-adds cell matrices and loads in lexicographic cell order, then
/// drops boundary rows and columns. Boundary data is homogeneous, so the load
/// needs no correction.
template <class F>
LinearSystem assemble(const MeshTopology& mesh, const GlobalDofMap& map, const ElementBasis& el, F&& f,
                      int quad_n) {
  check_compatible(map, el);
  const ReferenceTables tab(el, quad_n);
  const WideMatrix A = local_stiffness_wide(el, mesh.h, tab);

  LinearSystem sys;
  sys.full_dim = map.num_dofs;
  sys.global_to_free.assign(static_cast<std::size_t>(map.num_dofs), -1);
  for (int g = 0; g < map.num_dofs; ++g)
    if (!map.boundary[g]) {
      sys.global_to_free[g] = static_cast<int>(sys.free_to_global.size());
      sys.free_to_global.push_back(g);
    }
  const int nfree = static_cast<int>(sys.free_to_global.size());
  sys.rhs.assign(static_cast<std::size_t>(nfree), 0.0L);

  std::vector<BasicTriplet<long double>> trips;
  trips.reserve(static_cast<std::size_t>(mesh.num_cells()) * el.size() * el.size());
  for (int c = 0; c < mesh.num_cells(); ++c) {
    const auto& l2g = map.cell_dofs[c];
    const auto b = local_load_wide(el, mesh.cell_rect(c), f, tab);
    for (std::size_t i = 0; i < l2g.size(); ++i) {
      const int fi = sys.global_to_free[l2g[i]];
      if (fi < 0)
        continue;
      sys.rhs[fi] += b[i];
      for (std::size_t j = 0; j < l2g.size(); ++j) {
        const int fj = sys.global_to_free[l2g[j]];
        if (fj >= 0)
          trips.push_back({fi, fj, A(i, j)});
      }
    }
  }
  sys.matrix = WideCsrMatrix::from_triplets(nfree, nfree, std::move(trips));
  return sys;
}

/// Global stiffness matrix before boundary elimination.
inline WideCsrMatrix assemble_full_stiffness(const MeshTopology& mesh, const GlobalDofMap& map, const ElementBasis& el,
                                         int quad_n) {
  check_compatible(map, el);
  const WideMatrix A = local_stiffness_wide(el, mesh.h, ReferenceTables(el, quad_n));
  std::vector<BasicTriplet<long double>> trips;
  for (int c = 0; c < mesh.num_cells(); ++c) {
    const auto& l2g = map.cell_dofs[c];
    for (std::size_t i = 0; i < l2g.size(); ++i)
      for (std::size_t j = 0; j < l2g.size(); ++j)
        trips.push_back({l2g[i], l2g[j], A(i, j)});
  }
  return WideCsrMatrix::from_triplets(map.num_dofs, map.num_dofs, std::move(trips));
}

inline std::vector<double> gather(const GlobalDofMap& map, int cell, std::span<const double> global) {
  const auto& l2g = map.cell_dofs[cell];
  std::vector<double> c(l2g.size());
  for (std::size_t i = 0; i < l2g.size(); ++i)
    c[i] = global[l2g[i]];
  return c;
}

struct InterfaceJumps {
  double value = 0.0;
  double normal_derivative = 0.0;
};

/// Largest jumps of u_h and of its normal derivative across interior edges,
/// sampled at `samples` equispaced points per edge (endpoints included).
inline InterfaceJumps c1_interface_audit(const MeshTopology& mesh, const GlobalDofMap& map, const ElementBasis& el,
                                         std::span<const double> coeffs, int samples) {
  check_compatible(map, el);
  if (samples < 2)
    throw InvalidArgument("c1_interface_audit: need at least two samples per edge");
  InterfaceJumps jumps;
  for (int e = 0; e < mesh.num_edges(); ++e) {
    if (mesh.edge_on_boundary(e))
      continue;
    const auto [lo, hi] = mesh.edge_cells(e);
    const auto clo = gather(map, lo, coeffs), chi = gather(map, hi, coeffs);
    const Rect rlo = mesh.cell_rect(lo), rhi = mesh.cell_rect(hi);
    const bool horizontal = mesh.is_horizontal(e);
    for (int s = 0; s < samples; ++s) {
      const double t = static_cast<double>(s) / (samples - 1);
      // lo cell sees the edge at its top (x-edge) or right side (y-edge)
      const double xl = horizontal ? t : 1.0, yl = horizontal ? 1.0 : t;
      const double xh = horizontal ? t : 0.0, yh = horizontal ? 0.0 : t;
      const int ndx = horizontal ? 0 : 1, ndy = horizontal ? 1 : 0;
      const double v = evaluate_local(el, clo, rlo, xl, yl) - evaluate_local(el, chi, rhi, xh, yh);
      const double d =
          evaluate_local(el, clo, rlo, xl, yl, ndx, ndy) - evaluate_local(el, chi, rhi, xh, yh, ndx, ndy);
      jumps.value = std::max(jumps.value, std::abs(v));
      jumps.normal_derivative = std::max(jumps.normal_derivative, std::abs(d));
    }
  }
  return jumps;
}

/// Coordinate-format export: one "row col value" line per stored entry,
/// zero-based indices.
template <class T>
void write_coordinate_matrix(std::ostream& os, const BasicCsrMatrix<T>& A) {
  char buf[64];
  for (int i = 0; i < A.rows; ++i)
    for (int p = A.row_ptr[i]; p < A.row_ptr[i + 1]; ++p) {
      std::snprintf(buf, sizeof buf, "%d %d %.17g\n", i, A.col_idx[p], static_cast<double>(A.values[p]));
      os << buf;
    }
}

} // namespace c1fem
