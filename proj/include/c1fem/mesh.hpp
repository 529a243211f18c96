#pragma once

#include <array>
#include <string>
#include <vector>

#include "errors.hpp"
#include "quadrature.hpp"
#include "ref_element.hpp"

namespace c1fem {

/// Uniform n x n square mesh of the unit square.
///
/// Ids are lexicographic (x fastest): vertex (i, j) -> j(n+1) + i; horizontal
/// edge (i, j), i < n, j <= n -> j n + i; vertical edge (i, j), i <= n, j < n ->
/// n(n+1) + j(n+1) + i; cell (i, j) -> j n + i.
struct MeshTopology {
  int n = 1;
  double h = 1.0;

  int num_vertices() const noexcept { return (n + 1) * (n + 1); }
  int num_horizontal_edges() const noexcept { return n * (n + 1); }
  int num_edges() const noexcept { return 2 * n * (n + 1); }
  int num_cells() const noexcept { return n * n; }

  int vertex(int i, int j) const noexcept { return j * (n + 1) + i; }
  int horizontal_edge(int i, int j) const noexcept { return j * n + i; }
  int vertical_edge(int i, int j) const noexcept { return n * (n + 1) + j * (n + 1) + i; }
  int cell(int i, int j) const noexcept { return j * n + i; }

  bool is_horizontal(int e) const noexcept { return e < num_horizontal_edges(); }

  /// Cell vertices in element order x1, x2, x3, x4 (counter-clockwise from
  /// the lower-left corner).
  std::array<int, 4> cell_vertices(int c) const noexcept {
    const int i = c % n, j = c / n;
    return {vertex(i, j), vertex(i + 1, j), vertex(i + 1, j + 1), vertex(i, j + 1)};
  }

  /// Cell edges in element order bottom, right, top, left.
  std::array<int, 4> cell_edges(int c) const noexcept {
    const int i = c % n, j = c / n;
    return {horizontal_edge(i, j), vertical_edge(i + 1, j), horizontal_edge(i, j + 1), vertical_edge(i, j)};
  }

  Rect cell_rect(int c) const noexcept {
    const int i = c % n, j = c / n;
    return {i * h, j * h, h, h};
  }

  bool vertex_on_boundary(int v) const noexcept {
    const int i = v % (n + 1), j = v / (n + 1);
    return i == 0 || j == 0 || i == n || j == n;
  }

  bool edge_on_boundary(int e) const noexcept {
    if (is_horizontal(e)) {
      const int j = e / n;
      return j == 0 || j == n;
    }
    const int i = (e - num_horizontal_edges()) % (n + 1);
    return i == 0 || i == n;
  }

  /// Cells incident to an edge (one entry is -1 for boundary edges).
  std::array<int, 2> edge_cells(int e) const noexcept {
    if (is_horizontal(e)) {
      const int i = e % n, j = e / n;
      return {j > 0 ? cell(i, j - 1) : -1, j < n ? cell(i, j) : -1};
    }
    const int r = e - num_horizontal_edges();
    const int i = r % (n + 1), j = r / (n + 1);
    return {i > 0 ? cell(i - 1, j) : -1, i < n ? cell(i, j) : -1};
  }
};

inline constexpr int kMaxGridLevel = 12;

inline MeshTopology build_mesh_n(int n) {
  if (n < 1)
    throw InvalidArgument("build_mesh_n: need at least one cell per direction");
  return {n, 1.0 / n};
}

/// Grid level g has n = 2^(g-1) cells per direction.
inline MeshTopology build_mesh(int grid_level) {
  if (grid_level < 1 || grid_level > kMaxGridLevel)
    throw InvalidArgument("build_mesh: grid level must lie in [1, " + std::to_string(kMaxGridLevel) + "], got " +
                          std::to_string(grid_level));
  return build_mesh_n(1 << (grid_level - 1));
}

/// Global C1 DOF numbering.
///
/// Entities are numbered in a sweep by (y, x) of their centres: vertex row j
/// interleaved with horizontal edges of row j, then vertical edges of cell row
/// j interleaved with the cell interiors. This keeps the assembled matrix
/// banded in the natural ordering.
struct GlobalDofMap {
  int k = 0;
  Flavor flavor = Flavor::BFS;
  int dofs_per_vertex = 4;
  int dofs_per_edge = 0;
  int dofs_per_cell = 0;
  int num_dofs = 0;
  std::vector<int> vertex_offset;
  std::vector<int> edge_offset;
  std::vector<int> cell_offset;
  /// Per-cell local-to-global indices, aligned with the element DOF order.
  std::vector<std::vector<int>> cell_dofs;
  /// True where the clamped boundary condition removes the DOF.
  std::vector<bool> boundary;

  std::size_t local_size() const noexcept { return cell_dofs.empty() ? 0 : cell_dofs.front().size(); }
};

inline int interior_dof_count(int k, Flavor f) {
  return f == Flavor::BFS ? (k - 3) * (k - 3) : serendipity_interior_count(k);
}

/// Closed-form dim V_h before boundary elimination.
inline int global_dof_count(int n, int k, Flavor f) {
  return 4 * (n + 1) * (n + 1) + 4 * n * (n + 1) * (k - 3) + n * n * interior_dof_count(k, f);
}

inline GlobalDofMap build_dof_map(const MeshTopology& mesh, int k, Flavor flavor) {
  if (k < 3 || (flavor == Flavor::Serendipity && k < 4) || k > kMaxPolyDegree)
    throw InvalidArgument("build_dof_map: unsupported element degree " + std::to_string(k));
  const int n = mesh.n;
  GlobalDofMap map;
  map.k = k;
  map.flavor = flavor;
  map.dofs_per_edge = 2 * (k - 3);
  map.dofs_per_cell = interior_dof_count(k, flavor);
  map.vertex_offset.assign(static_cast<std::size_t>(mesh.num_vertices()), -1);
  map.edge_offset.assign(static_cast<std::size_t>(mesh.num_edges()), -1);
  map.cell_offset.assign(static_cast<std::size_t>(mesh.num_cells()), -1);

  int next = 0;
  for (int j = 0; j <= n; ++j) {
    for (int i = 0; i <= n; ++i) {
      map.vertex_offset[mesh.vertex(i, j)] = next;
      next += map.dofs_per_vertex;
      if (i < n) {
        map.edge_offset[mesh.horizontal_edge(i, j)] = next;
        next += map.dofs_per_edge;
      }
    }
    if (j == n)
      break;
    for (int i = 0; i <= n; ++i) {
      map.edge_offset[mesh.vertical_edge(i, j)] = next;
      next += map.dofs_per_edge;
      if (i < n) {
        map.cell_offset[mesh.cell(i, j)] = next;
        next += map.dofs_per_cell;
      }
    }
  }
  map.num_dofs = next;

  map.boundary.assign(static_cast<std::size_t>(next), false);
  for (int v = 0; v < mesh.num_vertices(); ++v)
    if (mesh.vertex_on_boundary(v))
      for (int d = 0; d < 4; ++d)
        map.boundary[map.vertex_offset[v] + d] = true;
  for (int e = 0; e < mesh.num_edges(); ++e)
    if (mesh.edge_on_boundary(e))
      for (int d = 0; d < map.dofs_per_edge; ++d)
        map.boundary[map.edge_offset[e] + d] = true;

  // Edge points are ordered from each edge's first element vertex, which is
  // the end with smaller x (horizontal) or smaller y (vertical) for every
  // cell, so shared edges need no reversal. Derivative DOFs are global
  // physical derivatives and need no sign change on axis-aligned cells.
  map.cell_dofs.resize(static_cast<std::size_t>(mesh.num_cells()));
  for (int c = 0; c < mesh.num_cells(); ++c) {
    auto& l2g = map.cell_dofs[c];
    l2g.reserve(static_cast<std::size_t>(16 + 4 * map.dofs_per_edge + map.dofs_per_cell));
    for (int v : mesh.cell_vertices(c))
      for (int d = 0; d < 4; ++d)
        l2g.push_back(map.vertex_offset[v] + d);
    for (int e : mesh.cell_edges(c))
      for (int d = 0; d < map.dofs_per_edge; ++d)
        l2g.push_back(map.edge_offset[e] + d);
    for (int d = 0; d < map.dofs_per_cell; ++d)
      l2g.push_back(map.cell_offset[c] + d);
  }
  return map;
}

inline int boundary_dof_count(const GlobalDofMap& map) {
  int count = 0;
  for (bool b : map.boundary)
    count += b ? 1 : 0;
  return count;
}

} // namespace c1fem
