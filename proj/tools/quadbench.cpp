#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "curvquad/bench.hpp"
#include "curvquad/error.hpp"
#include "curvquad/simd/kernels.hpp"

namespace {

constexpr int exit_usage = 1;
constexpr int exit_solver = 2;
constexpr int exit_regression = 3;

std::vector<int> parse_ns(const std::string& list) {
  std::vector<int> ns;
  std::istringstream in(list);
  std::string item;
  while (std::getline(in, item, ',')) {
    std::size_t used = 0;
    const int n = std::stoi(item, &used);
    if (used != item.size()) throw curvquad::DomainError("bad n value '" + item + "'");
    ns.push_back(n);
  }
  return ns;
}

}  // namespace

int main(int argc, char** argv) {
  using namespace curvquad::bench;
  CLI::App app{"Convergence tables for boundary-reduced inner products on curved cells"};

  ExperimentSpec spec;
  std::string ns = "4,8,16,32,64";
  std::string cell_file;
  std::string format = "csv";
  std::string out_path;
  std::string manifest = CURVQUAD_GOLDEN_DEFAULT;
  std::string kernels = "auto";

  app.add_option("--experiment", spec.experiment, "area | square-basis | square-bubble | pacman | puzzle")
      ->required()
      ->check(CLI::IsMember(experiment_names()));
  app.add_option("--n", ns, "Comma-separated quadrature points per edge half, increasing");
  app.add_option("--sigma", spec.sigma, "Kress grading parameter");
  app.add_option("--cell-file", cell_file, "Cell for the area experiment (line/arc records)");
  app.add_option("--gmres-tol", spec.solver.gmres.tol, "GMRES relative residual target");
  app.add_option("--gmres-maxit", spec.solver.gmres.max_iter, "GMRES iteration cap");
  app.add_option("--jobs", spec.jobs, "Worker threads over n values");
  app.add_option("--format", format, "csv or md")->check(CLI::IsMember({"csv", "md"}));
  app.add_option("--out", out_path, "Output file (default stdout)");
  auto* check = app.add_option("--check", manifest, "Compare against a golden tolerance manifest")
                    ->expected(0, 1)
                    ->default_str(manifest);
  app.add_option("--kernels", kernels, "scalar | avx2 | auto")->check(CLI::IsMember({"scalar", "avx2", "auto"}));
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : exit_usage;
  }

  std::vector<ResultRow> rows;
  std::vector<GoldenEntry> golden;
  try {
    curvquad::simd::set_kernel_backend(kernels);
    spec.ns = parse_ns(ns);
    if (!cell_file.empty()) spec.cell_file = cell_file;
    if (check->count() > 0) golden = load_golden(manifest);
    rows = run_experiment(spec);
  } catch (const std::exception& e) {
    std::cerr << "quadbench: " << e.what() << '\n';
    return exit_usage;
  }

  std::ofstream file;
  if (!out_path.empty()) {
    file.open(out_path);
    if (!file) {
      std::cerr << "quadbench: cannot write " << out_path << '\n';
      return exit_usage;
    }
  }
  std::ostream& out = out_path.empty() ? std::cout : file;
  if (format == "md")
    write_markdown(out, rows);
  else
    write_csv(out, rows);

  int code = 0;
  for (const auto& r : rows) {
    if (r.status == "ok") continue;
    std::cerr << "quadbench: " << r.pair << ' ' << r.quantity << " n=" << r.n << ": " << r.status << '\n';
    code = exit_solver;
  }
  if (code != 0) return code;
  if (check->count() > 0) {
    const auto bad = check_golden(rows, golden);
    for (const auto& b : bad) std::cerr << "regression: " << b << '\n';
    if (!bad.empty()) return exit_regression;
  }
  return 0;
}
