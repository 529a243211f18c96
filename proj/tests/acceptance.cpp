#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "c1fem/manufactured.hpp"
#include "c1fem/study.hpp"
#include "c1fem/verify.hpp"

using namespace c1fem;

namespace {

struct TableRow {
  int grid;
  double l2;
  double l2_order;
  double h2;
  double h2_order;
  int dim;
};

struct TableBlock {
  Flavor flavor;
  int k;
  std::vector<TableRow> rows;
};

// Published convergence tables for the sin^2 sin^2 plate solution.
const std::vector<TableBlock>& published() {
  static const std::vector<TableBlock> blocks{
      {Flavor::BFS,
       4,
       {{1, 0.837E-01, 0.0, 0.287E+01, 0.0, 25},
        {2, 0.939E-02, 3.2, 0.161E+01, 0.8, 64},
        {3, 0.150E-03, 6.0, 0.147E+00, 3.5, 196},
        {4, 0.461E-05, 5.0, 0.184E-01, 3.0, 676},
        {5, 0.143E-06, 5.0, 0.231E-02, 3.0, 2500},
        {6, 0.447E-08, 5.0, 0.288E-03, 3.0, 9604},
        {7, 0.162E-09, 4.8, 0.360E-04, 3.0, 37636}}},
      {Flavor::Serendipity,
       4,
       {{1, 0.375E+00, 0.0, 0.174E+02, 0.0, 24},
        {2, 0.468E-01, 3.0, 0.470E+01, 1.9, 60},
        {3, 0.704E-03, 6.1, 0.239E+00, 4.3, 180},
        {4, 0.111E-04, 6.0, 0.212E-01, 3.5, 612},
        {5, 0.290E-06, 5.3, 0.248E-02, 3.1, 2244},
        {6, 0.869E-08, 5.1, 0.306E-03, 3.0, 8580},
        {7, 0.382E-09, 4.5, 0.381E-04, 3.0, 33540}}},
      {Flavor::BFS,
       5,
       {{1, 0.324E-01, 0.0, 0.435E+01, 0.0, 36},
        {2, 0.138E-03, 7.9, 0.918E-01, 5.6, 100},
        {3, 0.789E-05, 4.1, 0.146E-01, 2.7, 324},
        {4, 0.130E-06, 5.9, 0.912E-03, 4.0, 1156},
        {5, 0.206E-08, 6.0, 0.570E-04, 4.0, 4356},
        {6, 0.302E-10, 6.1, 0.356E-05, 4.0, 16900}}},
      {Flavor::Serendipity,
       5,
       {{1, 0.375E+00, 0.0, 0.136E+02, 0.0, 32},
        {2, 0.433E-01, 3.1, 0.459E+01, 1.6, 84},
        {3, 0.419E-03, 6.7, 0.227E+00, 4.3, 260},
        {4, 0.492E-05, 6.4, 0.106E-01, 4.4, 900},
        {5, 0.697E-07, 6.1, 0.562E-03, 4.2, 3332},
        {6, 0.103E-08, 6.1, 0.323E-04, 4.1, 12804}}},
      {Flavor::BFS,
       6,
       {{1, 0.157E-02, 0.0, 0.802E+00, 0.0, 49},
        {2, 0.706E-04, 4.5, 0.499E-01, 4.0, 144},
        {3, 0.394E-06, 7.5, 0.115E-02, 5.4, 484},
        {4, 0.310E-08, 7.0, 0.360E-04, 5.0, 1764},
        {5, 0.258E-10, 6.9, 0.113E-05, 5.0, 6724}}},
      {Flavor::Serendipity,
       6,
       {{1, 0.375E+00, 0.0, 0.137E+02, 0.0, 40},
        {2, 0.131E-01, 4.8, 0.158E+01, 3.1, 108},
        {3, 0.222E-03, 5.9, 0.370E-01, 5.4, 340},
        {4, 0.208E-05, 6.7, 0.800E-03, 5.5, 1188},
        {5, 0.169E-07, 6.9, 0.197E-04, 5.3, 4420}}},
      {Flavor::BFS,
       7,
       {{1, 0.115E-02, 0.0, 0.379E+00, 0.0, 64},
        {2, 0.964E-06, 10.2, 0.253E-02, 7.2, 196},
        {3, 0.183E-07, 5.7, 0.763E-04, 5.0, 676},
        {4, 0.731E-10, 8.0, 0.119E-05, 6.0, 2500},
        {5, 0.158E-10, 2.2, 0.185E-07, 6.0, 9604}}},
      {Flavor::Serendipity,
       7,
       {{1, 0.375E+00, 0.0, 0.140E+02, 0.0, 48},
        {2, 0.380E-02, 6.6, 0.430E+00, 5.0, 132},
        {3, 0.668E-05, 9.2, 0.426E-02, 6.7, 420},
        {4, 0.247E-07, 8.1, 0.541E-04, 6.3, 1476},
        {5, 0.313E-10, 9.6, 0.735E-06, 6.2, 5508}}},
      {Flavor::BFS,
       8,
       {{1, 0.531E-04, 0.0, 0.716E-01, 0.0, 81},
        {2, 0.546E-06, 6.6, 0.743E-03, 6.6, 256},
        {3, 0.755E-09, 9.5, 0.433E-05, 7.4, 900},
        {4, 0.557E-11, 7.1, 0.334E-07, 7.0, 3364}}},
      {Flavor::Serendipity,
       8,
       {{1, 0.465E-01, 0.0, 0.389E+01, 0.0, 57},
        {2, 0.365E-03, 7.0, 0.465E-01, 6.4, 160},
        {3, 0.133E-05, 8.1, 0.421E-03, 6.8, 516},
        {4, 0.229E-08, 9.2, 0.292E-05, 7.2, 1828}}},
  };
  return blocks;
}

std::string label(Flavor f, int k) { return to_string(f) + " k=" + std::to_string(k); }

struct Outcome {
  bool pass = true;
  std::string detail;
  std::vector<std::string> failures;

  void fail(std::string what) {
    pass = false;
    failures.push_back(std::move(what));
  }
};

int report(int id, const std::string& name, const Outcome& o, double seconds) {
  std::printf("%s criterion %d: %s  (%s; %.1f s)\n", o.pass ? "PASS" : "FAIL", id, name.c_str(), o.detail.c_str(),
              seconds);
  for (const auto& f : o.failures)
    std::printf("    %s\n", f.c_str());
  std::fflush(stdout);
  return o.pass ? 0 : 1;
}

template <class F>
int run(int id, const std::string& name, F&& body) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o.fail(std::string("exception: ") + e.what());
  }
  const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return report(id, name, o, s);
}

char buf[256];

// One study per table block, covering every published grid; shared by the
// order, magnitude and residual criteria.
std::map<std::pair<Flavor, int>, ConvergenceReport> g_studies;

const ConvergenceReport& study_for(Flavor f, int k) {
  auto it = g_studies.find({f, k});
  if (it != g_studies.end())
    return it->second;
  int last = 0;
  for (const auto& b : published())
    if (b.flavor == f && b.k == k)
      last = b.rows.back().grid;
  StudyOptions opt;
  opt.flavor = f;
  opt.degree = k;
  opt.grid_first = 1;
  opt.grid_last = last;
  return g_studies.emplace(std::make_pair(f, k), run_study(opt)).first->second;
}

Outcome dimensions() {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  int checked = 0;
  for (const auto& b : published())
    for (const auto& r : b.rows) {
      const int dim = build_dof_map(build_mesh(r.grid), b.k, b.flavor).num_dofs;
      ++checked;
      if (dim != r.dim) {
        std::snprintf(buf, sizeof buf, "%s grid %d: dim %d, table %d", label(b.flavor, b.k).c_str(), r.grid, dim,
                      r.dim);
        o.fail(buf);
      }
    }
  const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (s >= 1.0)
    o.fail("dimension enumeration took " + std::to_string(s) + " s");
  o.detail = std::to_string(checked) + " table dims compared";
  return o;
}

Outcome orders() {
  Outcome o;
  int checked = 0;
  for (int k = 4; k <= 8; ++k)
    for (Flavor f : {Flavor::BFS, Flavor::Serendipity}) {
      const ConvergenceReport& r = study_for(f, k);
      const int last = k == 8 ? 4 : 5;
      for (const auto& row : r.rows) {
        if (row.grid < 4 || row.grid > last)
          continue;
        if (!row.failure.empty()) {
          o.fail(label(f, k) + " grid " + std::to_string(row.grid) + ": " + row.failure);
          continue;
        }
        if (row.l2_error >= 1e-9 && row.l2_order) {
          ++checked;
          if (*row.l2_order < k + 0.6 || *row.l2_order > k + 1.6) {
            std::snprintf(buf, sizeof buf, "%s grid %d: L2 order %.2f outside [%.1f, %.1f]", label(f, k).c_str(),
                          row.grid, *row.l2_order, k + 0.6, k + 1.6);
            o.fail(buf);
          }
        }
        if (row.h2_error >= 1e-9 && row.h2_order) {
          ++checked;
          if (*row.h2_order < k - 1.4 || *row.h2_order > k - 0.6) {
            std::snprintf(buf, sizeof buf, "%s grid %d: H2 order %.2f outside [%.1f, %.1f]", label(f, k).c_str(),
                          row.grid, *row.h2_order, k - 1.4, k - 0.6);
            o.fail(buf);
          }
        }
      }
    }
  o.detail = std::to_string(checked) + " orders checked, " + std::to_string(o.failures.size()) + " out of band";
  return o;
}

Outcome magnitudes() {
  Outcome o;
  int checked = 0;
  auto compare = [&](const TableBlock& b, int grid, const char* norm, double ours, double theirs) {
    if (theirs < 1e-8)
      return;
    ++checked;
    const double rel = std::abs(ours - theirs) / theirs;
    if (!(rel <= 0.10)) {
      std::snprintf(buf, sizeof buf, "%s grid %d %s: %s vs table %s (%.0f%%)", label(b.flavor, b.k).c_str(), grid, norm,
                    format_sci3(ours).c_str(), format_sci3(theirs).c_str(), 100 * rel);
      o.fail(buf);
    }
  };
  for (const auto& b : published()) {
    const ConvergenceReport& r = study_for(b.flavor, b.k);
    for (const auto& t : b.rows) {
      const auto& row = r.rows[static_cast<std::size_t>(t.grid - 1)];
      compare(b, t.grid, "L2", row.l2_error, t.l2);
      compare(b, t.grid, "H2", row.h2_error, t.h2);
    }
  }
  o.detail = std::to_string(checked - static_cast<int>(o.failures.size())) + " of " + std::to_string(checked) +
             " entries within 10%";
  return o;
}

Outcome grid_one() {
  Outcome o;
  std::string values;
  for (int k : {4, 5}) {
    StudyOptions opt;
    opt.flavor = Flavor::Serendipity;
    opt.degree = k;
    opt.grid_first = opt.grid_last = 1;
    const double e = run_study(opt).rows[0].l2_error;
    std::snprintf(buf, sizeof buf, "%sk=%d L2 %.9f", values.empty() ? "" : ", ", k, e);
    values += buf;
    if (!(std::abs(e - 0.375) <= 1e-6))
      o.fail("serendipity k=" + std::to_string(k) + " grid 1 L2 error differs from 0.375");
  }
  o.detail = values;
  return o;
}

Outcome certificates() {
  Outcome o;
  VerifySummary s = verify(3, 10, {Flavor::BFS, Flavor::Serendipity});
  double worst_cond = 0.0, worst_dual = 0.0;
  for (const auto& e : s.elements)
    for (const auto& c : e.checks) {
      if (c.name == "unisolvence")
        worst_cond = std::max(worst_cond, c.measured);
      if (c.name == "duality")
        worst_dual = std::max(worst_dual, c.measured);
      if ((c.name == "unisolvence" || c.name == "duality") && !c.pass) {
        std::snprintf(buf, sizeof buf, "%s %s %.3e", label(e.flavor, e.degree).c_str(), c.name.c_str(), c.measured);
        o.fail(buf);
      }
    }
  std::snprintf(buf, sizeof buf, "%zu elements, max cond %.2e, max duality error %.2e", s.elements.size(), worst_cond,
                worst_dual);
  o.detail = buf;
  return o;
}

Outcome interfaces() {
  Outcome o;
  double worst = 0.0;
  int n = 0;
  for (Flavor f : {Flavor::BFS, Flavor::Serendipity})
    for (int k = f == Flavor::BFS ? 3 : 4; k <= kMaxPolyDegree; ++k) {
      const CheckResult c = check_interface(build_element(f, k), 2, 10);
      ++n;
      worst = std::max(worst, c.measured);
      if (!c.pass) {
        std::snprintf(buf, sizeof buf, "%s relative jump %.3e", label(f, k).c_str(), c.measured);
        o.fail(buf);
      }
    }
  std::snprintf(buf, sizeof buf, "%d elements, max relative jump %.2e", n, worst);
  o.detail = buf;
  return o;
}

Outcome reproduction() {
  Outcome o;
  double worst = 0.0;
  for (Flavor f : {Flavor::BFS, Flavor::Serendipity})
    for (int k = 4; k <= 8; ++k) {
      const CheckResult c = check_reproduction(build_element(f, k), 20);
      worst = std::max(worst, c.measured);
      if (!c.pass) {
        std::snprintf(buf, sizeof buf, "%s relative sup error %.3e", label(f, k).c_str(), c.measured);
        o.fail(buf);
      }
    }
  std::snprintf(buf, sizeof buf, "max relative sup error %.2e", worst);
  o.detail = buf;
  return o;
}

Outcome galerkin() {
  Outcome o;
  const ManufacturedSolution p = polynomial_bubble();
  // |u*|_2 from a 10-point rule, exact for this Q_4 function
  const ElementBasis ref = build_element(Flavor::BFS, 4);
  const MeshTopology m1 = build_mesh(1);
  const GlobalDofMap map1 = build_dof_map(m1, 4, Flavor::BFS);
  const std::vector<double> zero(static_cast<std::size_t>(map1.num_dofs), 0.0);
  const double seminorm = error_norms(zero, p, m1, map1, ref, 10).h2;
  double worst = 0.0;
  for (auto [f, k] : {std::pair{Flavor::BFS, 4}, std::pair{Flavor::Serendipity, 8}}) {
    StudyOptions opt;
    opt.flavor = f;
    opt.degree = k;
    opt.grid_first = 2;
    opt.grid_last = 3;
    for (const auto& row : run_study(opt, p).rows) {
      const double rel = row.h2_error / seminorm;
      worst = std::max(worst, std::isnan(rel) ? INFINITY : rel);
      if (!(rel <= 1e-7)) {
        std::snprintf(buf, sizeof buf, "%s grid %d relative H2 error %.3e", label(f, k).c_str(), row.grid, rel);
        o.fail(buf);
      }
    }
  }
  std::snprintf(buf, sizeof buf, "max relative H2 error %.2e", worst);
  o.detail = buf;
  return o;
}

Outcome units() {
  Outcome o;
  double worst_quad = 0.0;
  for (int n = 1; n <= 30; ++n) {
    const QuadRule1D g = gauss1d(n);
    for (int d = 0; d <= 2 * n - 1; ++d) {
      long double s = 0.0L;
      for (int i = 0; i < n; ++i)
        s += g.weights[i] * std::pow(static_cast<long double>(g.nodes[i]), d);
      const double rel = static_cast<double>(std::abs(s * (d + 1) - 1.0L));
      worst_quad = std::max(worst_quad, rel);
      if (!(rel <= 1e-13)) {
        std::snprintf(buf, sizeof buf, "gauss n=%d degree %d relative error %.3e", n, d, rel);
        o.fail(buf);
      }
    }
  }
  double worst_res = 0.0;
  int systems = 0;
  for (const auto& [key, r] : g_studies)
    for (const auto& row : r.rows) {
      if (row.grid == 1)
        continue;
      ++systems;
      worst_res = std::max(worst_res, std::isnan(row.residual) ? INFINITY : row.residual);
      if (!(row.residual <= 1e-10)) {
        std::snprintf(buf, sizeof buf, "%s grid %d residual %.3e", label(key.first, key.second).c_str(), row.grid,
                      row.residual);
        o.fail(buf);
      }
    }
  std::snprintf(buf, sizeof buf, "gauss n<=30 max rel error %.2e; %d systems, max residual %.2e", worst_quad, systems,
                worst_res);
  o.detail = buf;
  return o;
}

} // namespace

int main() {
  int failed = 0;
  failed += run(1, "dimension reproduction", dimensions);
  failed += run(2, "convergence orders", orders);
  failed += run(3, "error magnitudes", magnitudes);
  failed += run(4, "grid-1 exact value", grid_one);
  failed += run(5, "unisolvence certificates", certificates);
  failed += run(6, "C1 conformity", interfaces);
  failed += run(7, "Pk/Qk reproduction", reproduction);
  failed += run(8, "Galerkin exactness", galerkin);
  failed += run(9, "quadrature and solver units", units);
  std::printf("%d of 9 criteria passed\n", 9 - failed);
  return failed == 0 ? 0 : 1;
}
