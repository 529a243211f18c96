#include <exception>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"

#include "c1fem/assembly.hpp"
#include "c1fem/errors.hpp"
#include "c1fem/ref_element.hpp"
#include "c1fem/study.hpp"
#include "c1fem/verify.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// "A..B" or a single "K".
std::pair<int, int> parse_range(const std::string& text, const char* what) {
  const auto dots = text.find("..");
  try {
    std::size_t used = 0;
    if (dots == std::string::npos) {
      const int v = std::stoi(text, &used);
      if (used != text.size())
        throw UsageError("");
      return {v, v};
    }
    const std::string lo = text.substr(0, dots), hi = text.substr(dots + 2);
    const int a = std::stoi(lo, &used);
    if (used != lo.size())
      throw UsageError("");
    const int b = std::stoi(hi, &used);
    if (used != hi.size())
      throw UsageError("");
    if (a > b)
      throw UsageError("");
    return {a, b};
  } catch (const std::exception&) {
    throw UsageError(std::string("invalid ") + what + " range '" + text + "', expected A..B");
  }
}

std::vector<int> parse_list(const std::string& text) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stoi(item, &used));
      if (used != item.size())
        throw UsageError("");
    } catch (const std::exception&) {
      throw UsageError("invalid bubble index list '" + text + "'");
    }
  }
  return out;
}

std::pair<int, int> default_grids(int k) {
  if (k <= 7)
    return {1, 5};
  if (k == 8)
    return {1, 4};
  return {1, 3};
}

const std::map<std::string, c1fem::Flavor> kFlavors{{"bfs", c1fem::Flavor::BFS},
                                                    {"serendipity", c1fem::Flavor::Serendipity}};

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"C1 rectangular elements for the biharmonic equation"};
  app.require_subcommand(1);

  auto* study = app.add_subcommand("study", "Convergence study on the manufactured plate solution");
  c1fem::StudyOptions opt;
  std::string grids, format = "table", out, solver = "cholesky";
  study->add_option("--element", opt.flavor, "Element family")
      ->required()
      ->transform(CLI::CheckedTransformer(kFlavors, CLI::ignore_case));
  study->add_option("--degree", opt.degree, "Polynomial degree k")->required();
  study->add_option("--grids", grids, "Grid levels A..B (level g has 2^(g-1) cells per side)");
  study->add_option("--quad", opt.quad, "Gauss points per direction for stiffness and load")
      ->check(CLI::PositiveNumber);
  study->add_option("--norm-quad", opt.norm_quad, "Gauss points per direction for the error norms")
      ->check(CLI::PositiveNumber);
  study->add_option("--solver", solver, "Linear solver")->check(CLI::IsMember({"cholesky", "pcg"}));
  study->add_option("--format", format, "Report format")->check(CLI::IsMember({"table", "csv", "json"}));
  study->add_option("--out", out, "Write the report to this file instead of stdout");

  auto* verify = app.add_subcommand("verify", "Element certificates");
  std::string degrees;
  std::vector<c1fem::Flavor> flavors;
  std::string bubbles;
  verify->add_option("--degrees", degrees, "Degrees A..B")->required();
  verify->add_option("--element", flavors, "Element families (default: both)")
      ->transform(CLI::CheckedTransformer(kFlavors, CLI::ignore_case));
  verify->add_option("--bubbles", bubbles, "Comma-separated BFS dual indices enriching the serendipity space");

  auto* dump = app.add_subcommand("dump-element", "Export shape-function monomial coefficients");
  int dump_degree = 0;
  c1fem::Flavor dump_flavor = c1fem::Flavor::BFS;
  std::string dump_out;
  dump->add_option("--degree", dump_degree, "Polynomial degree k")->required();
  dump->add_option("--element", dump_flavor, "Element family")
      ->required()
      ->transform(CLI::CheckedTransformer(kFlavors, CLI::ignore_case));
  dump->add_option("--out", dump_out, "Output file")->required();

  auto* matrix = app.add_subcommand("export-matrix", "Write the clamped stiffness matrix in coordinate format");
  int mat_degree = 0, mat_grid = 1, mat_quad = 0;
  c1fem::Flavor mat_flavor = c1fem::Flavor::BFS;
  std::string mat_out;
  matrix->add_option("--degree", mat_degree, "Polynomial degree k")->required();
  matrix->add_option("--element", mat_flavor, "Element family")
      ->required()
      ->transform(CLI::CheckedTransformer(kFlavors, CLI::ignore_case));
  matrix->add_option("--grid", mat_grid, "Grid level");
  matrix->add_option("--quad", mat_quad, "Gauss points per direction")->check(CLI::PositiveNumber);
  matrix->add_option("--out", mat_out, "Output file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (study->parsed()) {
      const auto [a, b] = grids.empty() ? default_grids(opt.degree) : parse_range(grids, "grid");
      opt.grid_first = a;
      opt.grid_last = b;
      opt.solver = solver == "pcg" ? c1fem::SolverKind::Pcg : c1fem::SolverKind::Cholesky;
      const auto fmt = format == "csv"    ? c1fem::ReportFormat::Csv
                       : format == "json" ? c1fem::ReportFormat::Json
                                          : c1fem::ReportFormat::Table;
      const auto report = c1fem::run_study(opt);
      if (out.empty())
        c1fem::emit_report(report, fmt, std::cout);
      else
        c1fem::emit_report(report, fmt, out);
      for (const auto& row : report.rows)
        if (!row.failure.empty()) {
          std::cerr << "grid " << row.grid << " failed: " << row.failure << "\n";
          return kExitFailure;
        }
      return kExitOk;
    }

    if (verify->parsed()) {
      const auto [a, b] = parse_range(degrees, "degree");
      if (flavors.empty())
        flavors = {c1fem::Flavor::BFS, c1fem::Flavor::Serendipity};
      c1fem::VerifySummary summary;
      if (!bubbles.empty()) {
        const auto ids = parse_list(bubbles);
        for (int k = a; k <= b; ++k)
          summary.elements.push_back(c1fem::certify_custom(k, ids, "custom"));
      } else {
        summary = c1fem::verify(a, b, flavors);
      }
      c1fem::write_summary(std::cout, summary);
      return summary.pass() ? kExitOk : kExitFailure;
    }

    if (dump->parsed()) {
      const auto el = c1fem::build_element(dump_flavor, dump_degree);
      std::ofstream os(dump_out);
      if (!os)
        throw std::runtime_error("cannot open " + dump_out + " for writing");
      c1fem::write_element(os, el);
      return os ? kExitOk : kExitFailure;
    }

    if (matrix->parsed()) {
      const auto el = c1fem::build_element(mat_flavor, mat_degree);
      const auto mesh = c1fem::build_mesh(mat_grid);
      const auto map = c1fem::build_dof_map(mesh, mat_degree, mat_flavor);
      const auto sys = c1fem::assemble(mesh, map, el, [](double, double) { return 0.0; },
                                       mat_quad > 0 ? mat_quad : mat_degree + 2);
      std::ofstream os(mat_out);
      if (!os)
        throw std::runtime_error("cannot open " + mat_out + " for writing");
      c1fem::write_coordinate_matrix(os, sys.matrix);
      return os ? kExitOk : kExitFailure;
    }
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const c1fem::InvalidArgument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFailure;
  }
  return kExitUsage;
}
