#pragma once

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "assembly.hpp"
#include "linalg.hpp"
#include "manufactured.hpp"
#include "mesh.hpp"
#include "ref_element.hpp"

namespace c1fem {

struct StudyOptions {
  Flavor flavor = Flavor::Serendipity;
  int degree = 4;
  int grid_first = 1;
  int grid_last = 5;
  /// Gauss points per direction for stiffness and load; 0 selects k + 2.
  int quad = 0;
  /// Gauss points per direction for the error norms; 0 selects k + 6.
  int norm_quad = 0;
  SolverKind solver = SolverKind::Cholesky;
};

struct ConvergenceRow {
  int grid = 0;
  int n = 0;
  int dim = 0;
  double l2_error = std::numeric_limits<double>::quiet_NaN();
  std::optional<double> l2_order;
  double h2_error = std::numeric_limits<double>::quiet_NaN();
  std::optional<double> h2_order;
  double residual = std::numeric_limits<double>::quiet_NaN();
  /// Empty on success, otherwise the failure message of this grid's run.
  std::string failure;
};

struct ConvergenceReport {
  Flavor flavor = Flavor::Serendipity;
  int degree = 0;
  int quad_order = 0;
  int norm_quad_order = 0;
  SolverKind solver = SolverKind::Cholesky;
  std::string bubble_set;
  std::vector<ConvergenceRow> rows;
};

/// log2(previous / current), or nothing if either error is unusable.
inline std::optional<double> observed_order(double previous, double current) {
  if (!(previous > 0.0) || !(current > 0.0) || !std::isfinite(previous) || !std::isfinite(current))
    return std::nullopt;
  return std::log2(previous / current);
}

inline void fill_orders(ConvergenceReport& report) {
  for (std::size_t r = 0; r < report.rows.size(); ++r) {
    auto& row = report.rows[r];
    row.l2_order.reset();
    row.h2_order.reset();
    if (r == 0)
      continue;
    const auto& prev = report.rows[r - 1];
    if (prev.grid + 1 != row.grid)
      continue;
    row.l2_order = observed_order(prev.l2_error, row.l2_error);
    row.h2_order = observed_order(prev.h2_error, row.h2_error);
  }
}

/// Solves one grid of the clamped plate problem and measures the errors.
inline ConvergenceRow solve_grid(const ElementBasis& el, const ManufacturedSolution& exact, int grid, int quad,
                                 int norm_quad, SolverKind solver) {
  ConvergenceRow row;
  row.grid = grid;
  const MeshTopology mesh = build_mesh(grid);
  row.n = mesh.n;
  const GlobalDofMap map = build_dof_map(mesh, el.degree(), el.flavor());
  row.dim = map.num_dofs;
  try {
    const LinearSystem sys = assemble(mesh, map, el, exact.f, quad);
    const SolveResult sol = spd_solve(sys.matrix, sys.rhs, solver);
    const auto coeffs = sys.expand(sol.x);
    const ErrorNorms e = error_norms(coeffs, exact, mesh, map, el, norm_quad);
    row.l2_error = e.l2;
    row.h2_error = e.h2;
    row.residual = sol.residual;
  } catch (const std::exception& ex) {
    row.failure = ex.what();
  }
  return row;
}

inline ConvergenceReport run_study(const StudyOptions& opt, const ManufacturedSolution& exact = manufactured()) {
  if (opt.grid_first < 1 || opt.grid_last < opt.grid_first || opt.grid_last > kMaxGridLevel)
    throw InvalidArgument("run_study: invalid grid range");
  const ElementBasis el = build_element(opt.flavor, opt.degree);
  ConvergenceReport report;
  report.flavor = opt.flavor;
  report.degree = opt.degree;
  report.quad_order = opt.quad > 0 ? opt.quad : opt.degree + 2;
  report.norm_quad_order = opt.norm_quad > 0 ? opt.norm_quad : opt.degree + 6;
  report.solver = opt.solver;
  report.bubble_set = el.bubble_set;
  for (int g = opt.grid_first; g <= opt.grid_last; ++g)
    report.rows.push_back(solve_grid(el, exact, g, report.quad_order, report.norm_quad_order, opt.solver));
  fill_orders(report);
  return report;
}

enum class ReportFormat { Table, Csv, Json };

/// 3 significant digits with a mantissa in [0.1, 1), e.g. 0.837E-01.
inline std::string format_sci3(double v) {
  if (std::isnan(v))
    return "      NaN";
  if (v == 0.0)
    return "0.000E+00";
  const double a = std::abs(v);
  int e = static_cast<int>(std::floor(std::log10(a))) + 1;
  double m = std::round(a / std::pow(10.0, e) * 1000.0) / 1000.0;
  if (m >= 1.0) {
    m /= 10.0;
    ++e;
  } else if (m < 0.1) {
    m *= 10.0;
    --e;
  }
  char buf[32];
  std::snprintf(buf, sizeof buf, "%s%.3fE%+03d", v < 0 ? "-" : "", m, e);
  return buf;
}

inline void write_table(std::ostream& os, const ConvergenceReport& r) {
  char buf[160];
  os << "# C1-Q" << r.degree << ' ' << (r.flavor == Flavor::BFS ? "BFS" : "serendipity") << " element, quad "
     << r.quad_order << ", norm quad " << r.norm_quad_order << ", solver " << to_string(r.solver) << "\n";
  os << "grid |  ||u-u_h||_0  O(h^r) |  |u-u_h|_2   O(h^r) |  dim V_h\n";
  for (const auto& row : r.rows) {
    std::snprintf(buf, sizeof buf, "%4d |  %s %6.1f |  %s %6.1f | %8d", row.grid, format_sci3(row.l2_error).c_str(),
                  row.l2_order.value_or(0.0), format_sci3(row.h2_error).c_str(), row.h2_order.value_or(0.0),
                  row.dim);
    os << buf;
    if (!row.failure.empty())
      os << "  # failed: " << row.failure;
    os << "\n";
  }
}

inline void write_csv(std::ostream& os, const ConvergenceReport& r) {
  os << "grid,n,dim,l2_error,l2_order,h2_error,h2_order,residual\n";
  auto num = [](double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return std::string(buf);
  };
  auto opt = [&](const std::optional<double>& v) { return v ? num(*v) : std::string(); };
  for (const auto& row : r.rows)
    os << row.grid << ',' << row.n << ',' << row.dim << ',' << num(row.l2_error) << ',' << opt(row.l2_order) << ','
       << num(row.h2_error) << ',' << opt(row.h2_order) << ',' << num(row.residual) << "\n";
}

inline nlohmann::json to_json(const ConvergenceReport& r) {
  using nlohmann::json;
  auto num = [](double v) { return std::isfinite(v) ? json(v) : json(nullptr); };
  auto opt = [](const std::optional<double>& v) { return v ? json(*v) : json(nullptr); };
  json rows = json::array();
  for (const auto& row : r.rows) {
    json j = {{"grid", row.grid},         {"n", row.n},
              {"dim", row.dim},           {"l2_error", num(row.l2_error)},
              {"l2_order", opt(row.l2_order)}, {"h2_error", num(row.h2_error)},
              {"h2_order", opt(row.h2_order)}, {"residual", num(row.residual)}};
    if (!row.failure.empty())
      j["failure"] = row.failure;
    rows.push_back(std::move(j));
  }
  return {{"element", to_string(r.flavor)},
          {"degree", r.degree},
          {"quad_order", r.quad_order},
          {"norm_quad_order", r.norm_quad_order},
          {"solver", to_string(r.solver)},
          {"rows", rows}};
}

inline void emit_report(const ConvergenceReport& r, ReportFormat format, std::ostream& os) {
  switch (format) {
  case ReportFormat::Table: write_table(os, r); break;
  case ReportFormat::Csv: write_csv(os, r); break;
  case ReportFormat::Json: os << to_json(r).dump(2) << "\n"; break;
  }
}

inline void emit_report(const ConvergenceReport& r, ReportFormat format, const std::string& path) {
  std::ofstream os(path);
  if (!os)
    throw std::runtime_error("emit_report: cannot open " + path + " for writing");
  emit_report(r, format, os);
  if (!os)
    throw std::runtime_error("emit_report: write to " + path + " failed");
}

} // namespace c1fem
