#pragma once

// Reference-square C1 elements on [0,1]^2: the tensor Bogner-Fox-Schmit
// element of bidegree k and its serendipity reduction, which keeps every
// boundary DOF, spans P_k plus a fixed set of BFS dual functions ("bubbles"),
// and for k >= 8 keeps a triangular set of interior Lagrange points.
//
// Canonical BFS DOF order (0-based):
//   0..15   vertices x1=(0,0), x2=(1,0), x3=(1,1), x4=(0,1), each
//           (Value, DX, DY, DXY)
//   16..    edges bottom (x1x2), right (x2x3), top (x4x3), left (x1x4); each
//           edge has k-3 points at t = j/(k-2), j = 1..k-3, measured from the
//           edge's first vertex, each contributing (Value, normal derivative)
//   last    interior points (i/(k-2), j/(k-2)), i outer, j inner
//
// Shape functions are computed in a tensor shifted-Legendre basis and then
// expanded into monomial Poly2D coefficients.

#include <cmath>
#include <cstdio>
#include <limits>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "errors.hpp"
#include "linalg.hpp"
#include "poly2d.hpp"
#include "quadrature.hpp"

namespace c1fem {

enum class DofKind { Value, DX, DY, DXY };
enum class Flavor { BFS, Serendipity };

inline constexpr int dx_order(DofKind k) { return (k == DofKind::DX || k == DofKind::DXY) ? 1 : 0; }
inline constexpr int dy_order(DofKind k) { return (k == DofKind::DY || k == DofKind::DXY) ? 1 : 0; }

inline std::string to_string(DofKind k) {
  switch (k) {
  case DofKind::Value: return "value";
  case DofKind::DX: return "dx";
  case DofKind::DY: return "dy";
  case DofKind::DXY: return "dxy";
  }
  return "?";
}

inline std::string to_string(Flavor f) { return f == Flavor::BFS ? "bfs" : "serendipity"; }

enum class EntityType { Vertex, Edge, Interior };

/// Where a DOF lives, for matching DOFs between neighbouring cells.
/// Vertex: index = vertex 0..3. Edge: index = edge 0..3 (bottom, right, top,
/// left), point = position along the edge. Interior: point = position in the
/// element's interior point list.
struct EntityTag {
  EntityType type = EntityType::Vertex;
  int index = 0;
  int point = 0;
};

struct DofFunctional {
  DofKind kind = DofKind::Value;
  double x = 0.0;
  double y = 0.0;
  EntityTag entity;
};

struct DofSet {
  std::vector<DofFunctional> dofs;
  int degree = 0;
  Flavor flavor = Flavor::BFS;

  std::size_t size() const noexcept { return dofs.size(); }
  const DofFunctional& operator[](std::size_t i) const { return dofs[i]; }
};

struct ElementBasis {
  DofSet dofs;
  BasisList shape_functions;
  /// Column j holds the tensor-Legendre coefficients of shape j (row
  /// a*(k+1)+b multiplies P_a(2x-1) P_b(2y-1)). Evaluation goes through this
  /// representation; shape_functions is its monomial expansion.
  WideMatrix legendre;
  BasisList span_basis;
  std::vector<int> bubble_ids;
  /// 1-norm condition estimate of the DOF matrix used to build the duals.
  double cond = 0.0;
  /// Which enrichment was used: "none" (BFS), "index-list", "geometric", or "custom".
  std::string bubble_set = "none";

  int degree() const noexcept { return dofs.degree; }
  Flavor flavor() const noexcept { return dofs.flavor; }
  std::size_t size() const noexcept { return dofs.size(); }
};

inline constexpr double kUnisolvenceCondLimit = 1e12;

/// Number of interior DOFs of the serendipity element: dim P_{k-8}.
inline int serendipity_interior_count(int k) { return k >= 8 ? (k - 7) * (k - 6) / 2 : 0; }

inline int element_dof_count(int k, Flavor f) {
  if (f == Flavor::BFS)
    return (k + 1) * (k + 1);
  return 16 + 8 * (k - 3) + serendipity_interior_count(k);
}

namespace detail {

inline const Point2 kVertices[4] = {{0.0, 0.0}, {1.0, 0.0}, {1.0, 1.0}, {0.0, 1.0}};

inline Point2 edge_point(int edge, double t) {
  switch (edge) {
  case 0: return {t, 0.0};
  case 1: return {1.0, t};
  case 2: return {t, 1.0};
  default: return {0.0, t};
  }
}

inline DofKind edge_normal(int edge) { return (edge % 2 == 0) ? DofKind::DY : DofKind::DX; }

inline void append_boundary_dofs(DofSet& set, int k) {
  constexpr DofKind kinds[4] = {DofKind::Value, DofKind::DX, DofKind::DY, DofKind::DXY};
  for (int v = 0; v < 4; ++v)
    for (DofKind kind : kinds)
      set.dofs.push_back({kind, kVertices[v].x, kVertices[v].y, {EntityType::Vertex, v, 0}});
  for (int e = 0; e < 4; ++e)
    for (int j = 1; j <= k - 3; ++j) {
      const Point2 p = edge_point(e, static_cast<double>(j) / (k - 2));
      set.dofs.push_back({DofKind::Value, p.x, p.y, {EntityType::Edge, e, j - 1}});
      set.dofs.push_back({edge_normal(e), p.x, p.y, {EntityType::Edge, e, j - 1}});
    }
}

/// Row of the DOF matrix: the functional applied to each tensor Legendre
/// product P_a(2x-1) P_b(2y-1), index a*(k+1)+b.
inline std::vector<long double> legendre_row(const DofFunctional& F, int k) {
  const auto n = static_cast<std::size_t>(k + 1);
  std::vector<long double> vx(n), dxv(n), vy(n), dyv(n);
  shifted_legendre_table<long double>(k, F.x, vx, dxv);
  shifted_legendre_table<long double>(k, F.y, vy, dyv);
  const auto& fx = dx_order(F.kind) ? dxv : vx;
  const auto& fy = dy_order(F.kind) ? dyv : vy;
  std::vector<long double> row(n * n);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      row[a * n + b] = fx[a] * fy[b];
  return row;
}

inline WideMatrix legendre_dof_matrix(const DofSet& set, int k) {
  WideMatrix M(set.size(), static_cast<std::size_t>((k + 1) * (k + 1)));
  for (std::size_t i = 0; i < set.size(); ++i) {
    const auto r = legendre_row(set[i], k);
    std::copy(r.begin(), r.end(), M.a.begin() + static_cast<std::ptrdiff_t>(i * M.cols));
  }
  return M;
}

inline BasisList to_monomial_basis(const WideMatrix& leg_cols, int k, SpaceLabel label) {
  BasisList out;
  out.label = label;
  out.degree = k;
  for (std::size_t j = 0; j < leg_cols.cols; ++j)
    out.functions.push_back(legendre_to_monomial(leg_cols.column(j), k));
  return out;
}

struct LegendreDuals {
  WideMatrix coeffs; // column j = Legendre coefficients of the j-th dual
  double cond = 0.0;
};

inline LegendreDuals invert_dof_matrix(const WideMatrix& M, const std::vector<int>& bubbles,
                                       const std::string& what) {
  const double cond = condition_estimate(M.to_dense());
  if (!(cond < kUnisolvenceCondLimit))
    throw UnisolvenceError(what + ": DOF matrix is numerically singular (condition estimate " +
                               std::to_string(cond) + ")",
                           cond, bubbles);
  return {wide_inverse(M), cond};
}

inline void check_degree(int k, int lo, const char* who) {
  if (k < lo || k > kMaxPolyDegree)
    throw InvalidArgument(std::string(who) + ": degree must lie in [" + std::to_string(lo) + ", " +
                          std::to_string(kMaxPolyDegree) + "], got " + std::to_string(k));
}

inline LegendreDuals bfs_legendre_duals(const DofSet& set, int k) {
  return invert_dof_matrix(legendre_dof_matrix(set, k), {}, "BFS element k=" + std::to_string(k));
}

} // namespace detail

inline DofSet bfs_dofs(int k) {
  if (k < 3)
    throw InvalidArgument("bfs_dofs: degree must be at least 3");
  DofSet set;
  set.degree = k;
  set.flavor = Flavor::BFS;
  detail::append_boundary_dofs(set, k);
  int m = 0;
  for (int i = 1; i <= k - 3; ++i)
    for (int j = 1; j <= k - 3; ++j)
      set.dofs.push_back({DofKind::Value, static_cast<double>(i) / (k - 2), static_cast<double>(j) / (k - 2),
                          {EntityType::Interior, 0, m++}});
  return set;
}

/// Boundary DOFs of BFS plus, for k >= 8, the interior points
/// (i/(k-2), j/(k-2)) with 1 <= j <= i <= k-7.
inline DofSet serendipity_dofs(int k) {
  if (k < 4)
    throw InvalidArgument("serendipity_dofs: degree must be at least 4");
  DofSet set;
  set.degree = k;
  set.flavor = Flavor::Serendipity;
  detail::append_boundary_dofs(set, k);
  int m = 0;
  for (int i = 1; i <= k - 7; ++i)
    for (int j = 1; j <= i; ++j)
      set.dofs.push_back({DofKind::Value, static_cast<double>(i) / (k - 2), static_cast<double>(j) / (k - 2),
                          {EntityType::Interior, 0, m++}});
  return set;
}

/// Index of the (Value | normal) DOF at point p (0-based) of edge e in the
/// canonical BFS ordering.
inline int bfs_edge_dof_index(int k, int edge, int point, bool normal) {
  return 16 + edge * 2 * (k - 3) + 2 * point + (normal ? 1 : 0);
}

/// Enrichment used by the k = 5 element when the default set is rejected:
/// values at both bottom points, normal derivative at the second bottom
/// point, value and normal derivative at the first right point.
inline std::vector<int> bubble_ids_k5_geometric() {
  return {4, 5, 6, 7, 11, 13, bfs_edge_dof_index(5, 0, 0, false), bfs_edge_dof_index(5, 0, 1, false),
          bfs_edge_dof_index(5, 0, 1, true), bfs_edge_dof_index(5, 1, 0, false),
          bfs_edge_dof_index(5, 1, 0, true)};
}

/// 0-based indices into bfs_dofs(k) of the BFS duals that enrich P_k.
/// All sets start with the four DOFs at x2, DXY at x3 and DX at x4.
inline std::vector<int> bubble_ids(int k) {
  if (k < 4)
    throw InvalidArgument("bubble_ids: degree must be at least 4");
  std::vector<int> ids = {4, 5, 6, 7, 11, 13};
  auto edge = [k](int e, int p, bool normal) { return bfs_edge_dof_index(k, e, p, normal); };
  if (k == 4) {
    ids.insert(ids.end(), {edge(0, 0, false), edge(0, 0, true), edge(1, 0, true)});
  } else if (k == 5) {
    ids.insert(ids.end(),
               {edge(0, 0, true), edge(0, 1, false), edge(0, 1, true), edge(1, 0, false), edge(1, 0, true)});
  } else {
    ids.insert(ids.end(), {edge(0, 0, false), edge(0, 0, true), edge(0, 1, false), edge(0, 1, true),
                           edge(0, 2, true), edge(1, 0, true)});
  }
  return ids;
}

inline ElementBasis build_bfs_element(int k) {
  detail::check_degree(k, 3, "build_bfs_element");
  ElementBasis el;
  el.dofs = bfs_dofs(k);
  const auto duals = detail::bfs_legendre_duals(el.dofs, k);
  el.cond = duals.cond;
  el.legendre = duals.coeffs;
  el.shape_functions = detail::to_monomial_basis(el.legendre, k, SpaceLabel::Qk);
  el.span_basis = monomial_basis(SpaceLabel::Qk, k);
  return el;
}

/// Serendipity element spanned by P_k and the BFS duals listed in `bubbles`.
/// Throws UnisolvenceError if the DOF matrix is numerically singular.
inline ElementBasis build_serendipity_element_with(int k, const std::vector<int>& bubbles,
                                                   const std::string& label = "custom") {
  detail::check_degree(k, 4, "build_serendipity_element");
  const DofSet bfs = bfs_dofs(k);
  const auto bfs_duals = detail::bfs_legendre_duals(bfs, k);
  const std::size_t nq = static_cast<std::size_t>((k + 1) * (k + 1));
  const std::size_t np = static_cast<std::size_t>(dim_p(k));

  // Span generator in Legendre coordinates: P_k products first (same graded
  // order as monomial_basis), then the selected BFS duals.
  WideMatrix G(nq, np + bubbles.size());
  std::size_t col = 0;
  for (int d = 0; d <= k; ++d)
    for (int a = d; a >= 0; --a)
      G(static_cast<std::size_t>(a * (k + 1) + (d - a)), col++) = 1.0L;
  for (int b : bubbles) {
    if (b < 0 || static_cast<std::size_t>(b) >= bfs.size())
      throw InvalidArgument("build_serendipity_element: bubble index out of range");
    for (std::size_t i = 0; i < nq; ++i)
      G(i, col) = bfs_duals.coeffs(i, static_cast<std::size_t>(b));
    ++col;
  }

  ElementBasis el;
  el.dofs = serendipity_dofs(k);
  el.bubble_ids = bubbles;
  el.bubble_set = label;
  if (el.dofs.size() != G.cols)
    throw UnisolvenceError("serendipity element k=" + std::to_string(k) + ": " +
                               std::to_string(G.cols) + " spanning functions for " +
                               std::to_string(el.dofs.size()) + " DOFs",
                           std::numeric_limits<double>::infinity(), bubbles);
  const WideMatrix M = detail::legendre_dof_matrix(el.dofs, k) * G;
  const auto duals = detail::invert_dof_matrix(M, bubbles, "serendipity element k=" + std::to_string(k));
  el.cond = duals.cond;
  el.legendre = G * duals.coeffs;
  el.shape_functions = detail::to_monomial_basis(el.legendre, k, SpaceLabel::Serendipity);

  el.span_basis = monomial_basis(SpaceLabel::Pk, k);
  el.span_basis.label = SpaceLabel::Serendipity;
  for (int b : bubbles) {
    el.span_basis.functions.push_back(
        detail::legendre_to_monomial(bfs_duals.coeffs.column(static_cast<std::size_t>(b)), k));
  }
  return el;
}

inline ElementBasis build_serendipity_element(int k) {
  detail::check_degree(k, 4, "build_serendipity_element");
  if (k != 5)
    return build_serendipity_element_with(k, bubble_ids(k), "index-list");
  try {
    return build_serendipity_element_with(k, bubble_ids(k), "index-list");
  } catch (const UnisolvenceError&) {
    return build_serendipity_element_with(k, bubble_ids_k5_geometric(), "geometric");
  }
}

inline ElementBasis build_element(Flavor f, int k) {
  return f == Flavor::BFS ? build_bfs_element(k) : build_serendipity_element(k);
}

/// Applies F to a reference polynomial that represents a function on an
/// hx-by-hy cell: derivatives pick up hx^-a hy^-b.
inline double apply_dof(const DofFunctional& F, const Poly2D& p, double hx = 1.0, double hy = 1.0) {
  if (!(hx > 0.0) || !(hy > 0.0))
    throw InvalidArgument("apply_dof: scale must be positive");
  const int a = dx_order(F.kind), b = dy_order(F.kind);
  return p.eval(F.x, F.y, a, b) / (std::pow(hx, a) * std::pow(hy, b));
}

/// Factor hx^a hy^b turning the reference dual of a DOF into the dual of the
/// same DOF on the physical cell.
inline double dof_scale(const DofFunctional& F, double hx, double hy) {
  return std::pow(hx, dx_order(F.kind)) * std::pow(hy, dy_order(F.kind));
}

/// Nodal interpolation: c_i = F_i(target) with raw physical derivatives.
/// `target(x, y, kind)` returns the value or derivative at a physical point.
template <class Target>
std::vector<double> local_interpolate(const ElementBasis& el, Target&& target, const Rect& cell = {}) {
  std::vector<double> c(el.size());
  for (std::size_t i = 0; i < el.size(); ++i) {
    const auto& F = el.dofs[i];
    c[i] = target(cell.x0 + cell.hx * F.x, cell.y0 + cell.hy * F.y, F.kind);
  }
  return c;
}

/// Derivative (dx, dy) of every shape function at one reference point.
inline std::vector<long double> shape_values(const ElementBasis& el, double x, double y, int dx = 0, int dy = 0) {
  if (dx < 0 || dy < 0 || dx > kMaxDerivative || dy > kMaxDerivative)
    throw InvalidArgument("shape_values: derivative order out of range");
  const int k = el.degree();
  const auto n = static_cast<std::size_t>(k + 1);
  const auto px = detail::shifted_legendre_derivative(k, x, dx);
  const auto py = detail::shifted_legendre_derivative(k, y, dy);
  std::vector<long double> out(el.size(), 0.0L);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) {
      const long double t = px[a] * py[b];
      if (t == 0.0L)
        continue;
      const long double* row = &el.legendre.a[(a * n + b) * el.legendre.cols];
      for (std::size_t j = 0; j < out.size(); ++j)
        out[j] += t * row[j];
    }
  return out;
}

/// Evaluates sum_i c_i phi_i on the physical cell at reference point (xi, eta),
/// returning the physical derivative of order (dx, dy).
inline double evaluate_local(const ElementBasis& el, std::span<const double> c, const Rect& cell, double xi,
                             double eta, int dx = 0, int dy = 0) {
  const auto phi = shape_values(el, xi, eta, dx, dy);
  long double s = 0.0L;
  for (std::size_t i = 0; i < el.size(); ++i)
    if (c[i] != 0.0)
      s += c[i] * dof_scale(el.dofs[i], cell.hx, cell.hy) * phi[i];
  return static_cast<double>(s / (std::pow(cell.hx, dx) * std::pow(cell.hy, dy)));
}


/// Matrix D(i, j) = F_i(shape_j) on the reference square.
inline DenseMatrix duality_matrix(const ElementBasis& el) {
  DenseMatrix D(el.size(), el.size());
  for (std::size_t i = 0; i < el.size(); ++i) {
    const auto& F = el.dofs[i];
    const auto v = shape_values(el, F.x, F.y, dx_order(F.kind), dy_order(F.kind));
    for (std::size_t j = 0; j < el.size(); ++j)
      D(i, j) = static_cast<double>(v[j]);
  }
  return D;
}

/// Same as duality_matrix but applied to the exported monomial expansions.
inline DenseMatrix monomial_duality_matrix(const ElementBasis& el) {
  DenseMatrix D(el.size(), el.size());
  for (std::size_t i = 0; i < el.size(); ++i)
    for (std::size_t j = 0; j < el.size(); ++j)
      D(i, j) = apply_dof(el.dofs[i], el.shape_functions[j]);
  return D;
}

inline double identity_error(const DenseMatrix& D) {
  double e = 0.0;
  for (std::size_t i = 0; i < D.rows(); ++i)
    for (std::size_t j = 0; j < D.cols(); ++j)
      e = std::max(e, std::abs(D(i, j) - (i == j ? 1.0 : 0.0)));
  return e;
}

inline double duality_error(const ElementBasis& el) { return identity_error(duality_matrix(el)); }

/// Tabulates d^dx d^dy of every shape function at reference points.
/// Result(q, i) = shape_i derivative at points[q].
inline WideMatrix tabulate_wide(const ElementBasis& el, std::span<const Point2> points, int dx = 0, int dy = 0) {
  WideMatrix T(points.size(), el.size());
  for (std::size_t q = 0; q < points.size(); ++q) {
    const auto v = shape_values(el, points[q].x, points[q].y, dx, dy);
    std::copy(v.begin(), v.end(), T.a.begin() + static_cast<std::ptrdiff_t>(q * T.cols));
  }
  return T;
}

inline DenseMatrix tabulate(const ElementBasis& el, std::span<const Point2> points, int dx = 0, int dy = 0) {
  return tabulate_wide(el, points, dx, dy).to_dense();
}

struct UnisolvenceReport {
  int dim = 0;
  double cond = 0.0;
  bool pass = false;
  std::string bubble_set;
};

inline UnisolvenceReport unisolvence_report(int k, Flavor f) {
  UnisolvenceReport r;
  r.dim = element_dof_count(k, f);
  try {
    const ElementBasis el = build_element(f, k);
    r.cond = el.cond;
    r.bubble_set = el.bubble_set;
    r.pass = el.cond < kUnisolvenceCondLimit && static_cast<int>(el.size()) == r.dim;
  } catch (const UnisolvenceError& e) {
    r.cond = e.condition();
    r.pass = false;
  }
  return r;
}

/// Plain-text dump of every shape function's monomial coefficient grid
/// (row i = power of x, column j = power of y), 17 significant digits.
inline void write_element(std::ostream& os, const ElementBasis& el) {
  os << "# element " << to_string(el.flavor()) << " degree " << el.degree() << " dofs " << el.size()
     << " bubble_set " << el.bubble_set << " cond " << el.cond << "\n";
  char buf[64];
  for (std::size_t s = 0; s < el.size(); ++s) {
    const auto& F = el.dofs[s];
    const auto& p = el.shape_functions[s];
    std::snprintf(buf, sizeof buf, "%.17g %.17g", F.x, F.y);
    os << "# shape " << s << " kind " << to_string(F.kind) << " point " << buf << " rows " << p.nx() + 1
       << " cols " << p.ny() + 1 << "\n";
    for (int i = 0; i <= p.nx(); ++i) {
      for (int j = 0; j <= p.ny(); ++j) {
        std::snprintf(buf, sizeof buf, "%.16e", p.coeff(i, j));
        os << (j ? " " : "") << buf;
      }
      os << "\n";
    }
  }
}

} // namespace c1fem
