#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <ostream>
#include <random>
#include <string>
#include <vector>

#include "assembly.hpp"
#include "mesh.hpp"
#include "ref_element.hpp"

namespace c1fem {

inline constexpr double kDualityTolerance = 1e-8;
inline constexpr double kReproductionTolerance = 1e-8;
inline constexpr double kEdgeTraceTolerance = 1e-8;
inline constexpr double kInterfaceTolerance = 1e-9;

struct CheckResult {
  std::string name;
  double measured = 0.0;
  double threshold = 0.0;
  bool pass = false;
  std::string note;
};

struct ElementCertificate {
  Flavor flavor = Flavor::BFS;
  int degree = 0;
  std::string label;
  std::vector<CheckResult> checks;

  bool pass() const {
    return !checks.empty() && std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.pass; });
  }
};

struct VerifySummary {
  std::vector<ElementCertificate> elements;

  bool pass() const {
    return std::all_of(elements.begin(), elements.end(), [](const ElementCertificate& e) { return e.pass(); });
  }
};

/// Random member of P_k (total degree) or Q_k (separate degree) with
/// coefficients uniform in [-1, 1].
inline Poly2D random_polynomial(SpaceLabel space, int k, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Poly2D p(k, k);
  for (int i = 0; i <= k; ++i)
    for (int j = 0; j <= k; ++j)
      if (space == SpaceLabel::Qk || i + j <= k)
        p.coeff(i, j) = u(rng);
  return p;
}

/// Largest |F_i(shape_j) - delta_ij|.
inline CheckResult check_duality(const ElementBasis& el) {
  const double e = duality_error(el);
  return {"duality", e, kDualityTolerance, e < kDualityTolerance, ""};
}

inline CheckResult check_unisolvence(const ElementBasis& el) {
  return {"unisolvence", el.cond, kUnisolvenceCondLimit, el.cond < kUnisolvenceCondLimit, "condition estimate"};
}

/// Interpolates `trials` random members of P_k (serendipity) or Q_k (BFS)
/// and compares at `points` random points; relative sup-norm error.
inline CheckResult check_reproduction(const ElementBasis& el, int trials = 20, int points = 50,
                                      std::uint64_t seed = 20240601) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> coord(0.0, 1.0);
  const SpaceLabel space = el.flavor() == Flavor::BFS ? SpaceLabel::Qk : SpaceLabel::Pk;
  double worst = 0.0;
  for (int t = 0; t < trials; ++t) {
    const Poly2D p = random_polynomial(space, el.degree(), rng);
    const auto c = local_interpolate(
        el, [&](double x, double y, DofKind kind) { return p.eval(x, y, dx_order(kind), dy_order(kind)); });
    double err = 0.0, ref = 0.0;
    for (int s = 0; s < points; ++s) {
      const double x = coord(rng), y = coord(rng);
      const double exact = p.eval(x, y);
      err = std::max(err, std::abs(evaluate_local(el, c, Rect{0.0, 0.0, 1.0, 1.0}, x, y) - exact));
      ref = std::max(ref, std::abs(exact));
    }
    worst = std::max(worst, ref > 0.0 ? err / ref : err);
  }
  return {"reproduction", worst, kReproductionTolerance, worst < kReproductionTolerance,
          std::string(space == SpaceLabel::Qk ? "Q_k" : "P_k") + ", " + std::to_string(trials) + " polynomials"};
}

/// True if DOF `d` sits on the closed edge `e` (its end vertices included).
inline bool dof_on_closed_edge(const DofFunctional& d, int e) {
  static constexpr int kEdgeVertices[4][2] = {{0, 1}, {1, 2}, {3, 2}, {0, 3}};
  if (d.entity.type == EntityType::Vertex)
    return d.entity.index == kEdgeVertices[e][0] || d.entity.index == kEdgeVertices[e][1];
  return d.entity.type == EntityType::Edge && d.entity.index == e;
}

/// Largest value or normal-derivative trace, on any edge, of a shape function
/// whose DOF is not on that closed edge.
inline CheckResult check_edge_traces(const ElementBasis& el, int samples = 33) {
  double worst = 0.0;
  for (int e = 0; e < 4; ++e) {
    const bool horizontal = (e % 2 == 0);
    const int ndx = horizontal ? 0 : 1, ndy = horizontal ? 1 : 0;
    for (int s = 0; s < samples; ++s) {
      const double t = static_cast<double>(s) / (samples - 1);
      const Point2 p = detail::edge_point(e, t);
      const auto v = shape_values(el, p.x, p.y);
      const auto dn = shape_values(el, p.x, p.y, ndx, ndy);
      for (std::size_t i = 0; i < el.size(); ++i) {
        if (dof_on_closed_edge(el.dofs[i], e))
          continue;
        worst = std::max({worst, static_cast<double>(std::abs(v[i])), static_cast<double>(std::abs(dn[i]))});
      }
    }
  }
  return {"edge-trace", worst, kEdgeTraceTolerance, worst < kEdgeTraceTolerance, ""};
}

/// C1 audit on an n x n mesh with `vectors` random global coefficient vectors;
/// jumps are relative to the largest coefficient.
inline CheckResult check_interface(const ElementBasis& el, int n = 2, int vectors = 10, int samples = 33,
                                   std::uint64_t seed = 7) {
  const MeshTopology mesh = build_mesh_n(n);
  const GlobalDofMap map = build_dof_map(mesh, el.degree(), el.flavor());
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  double worst = 0.0;
  std::vector<double> c(static_cast<std::size_t>(map.num_dofs));
  for (int v = 0; v < vectors; ++v) {
    double cmax = 0.0;
    for (auto& x : c) {
      x = u(rng);
      cmax = std::max(cmax, std::abs(x));
    }
    const InterfaceJumps j = c1_interface_audit(mesh, map, el, c, samples);
    worst = std::max(worst, std::max(j.value, j.normal_derivative) / cmax);
  }
  return {"c1-interface", worst, kInterfaceTolerance, worst < kInterfaceTolerance,
          std::to_string(n) + "x" + std::to_string(n) + " mesh"};
}

inline ElementCertificate certify(const ElementBasis& el, const std::string& label = "") {
  ElementCertificate cert;
  cert.flavor = el.flavor();
  cert.degree = el.degree();
  cert.label = label.empty() ? el.bubble_set : label;
  cert.checks.push_back(check_unisolvence(el));
  cert.checks.push_back(check_duality(el));
  cert.checks.push_back(check_reproduction(el));
  cert.checks.push_back(check_edge_traces(el));
  cert.checks.push_back(check_interface(el));
  return cert;
}

/// Certificate for a serendipity element with a caller-chosen enrichment. A
/// singular DOF matrix yields a single failed unisolvence check.
inline ElementCertificate certify_custom(int k, const std::vector<int>& bubbles, const std::string& label) {
  try {
    return certify(build_serendipity_element_with(k, bubbles, label), label);
  } catch (const UnisolvenceError& e) {
    ElementCertificate cert;
    cert.flavor = Flavor::Serendipity;
    cert.degree = k;
    cert.label = label;
    cert.checks.push_back({"unisolvence", e.condition(), kUnisolvenceCondLimit, false, "DOF matrix singular"});
    return cert;
  }
}

inline ElementCertificate certify(Flavor f, int k) {
  try {
    return certify(build_element(f, k));
  } catch (const UnisolvenceError& e) {
    ElementCertificate cert;
    cert.flavor = f;
    cert.degree = k;
    cert.checks.push_back({"unisolvence", e.condition(), kUnisolvenceCondLimit, false, "DOF matrix singular"});
    return cert;
  }
}

/// Certificates for every supported (flavor, k) with k in [k_first, k_last].
/// Serendipity starts at k = 4; degrees below a flavor's minimum are skipped.
inline VerifySummary verify(int k_first, int k_last, const std::vector<Flavor>& flavors) {
  if (k_first > k_last || k_last > kMaxPolyDegree || k_first < 3)
    throw InvalidArgument("verify: degree range must lie in [3, " + std::to_string(kMaxPolyDegree) + "]");
  VerifySummary summary;
  for (Flavor f : flavors)
    for (int k = k_first; k <= k_last; ++k) {
      if (f == Flavor::Serendipity && k < 4)
        continue;
      summary.elements.push_back(certify(f, k));
    }
  return summary;
}

inline void write_summary(std::ostream& os, const VerifySummary& s) {
  char buf[200];
  for (const auto& e : s.elements) {
    for (const auto& c : e.checks) {
      std::snprintf(buf, sizeof buf, "%-4s %-11s k=%-2d %-13s %.3e (limit %.1e)", c.pass ? "PASS" : "FAIL",
                    to_string(e.flavor).c_str(), e.degree, c.name.c_str(), c.measured, c.threshold);
      os << buf;
      if (!e.label.empty() && e.label != "none")
        os << "  [" << e.label << "]";
      if (!c.note.empty())
        os << "  " << c.note;
      os << "\n";
    }
  }
  const auto failed = std::count_if(s.elements.begin(), s.elements.end(), [](const auto& e) { return !e.pass(); });
  os << (s.pass() ? "verify: all " : "verify: ") << s.elements.size() - static_cast<std::size_t>(failed) << " of "
     << s.elements.size() << " elements certified\n";
}

} // namespace c1fem
