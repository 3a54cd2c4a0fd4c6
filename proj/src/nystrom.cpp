#include "curvquad/nystrom.hpp"

#include <algorithm>
#include <cmath>
#include <list>
#include <mutex>
#include <numbers>
#include <sstream>

#include "curvquad/error.hpp"
#include "curvquad/simd/kernels.hpp"

namespace curvquad {

namespace {

constexpr double kPi = std::numbers::pi;

std::mutex stats_mutex;
SolveStats stats;

void record(const SolveReport& r, bool failed, double derived_defect) {
  std::lock_guard lock(stats_mutex);
  ++stats.solves;
  if (failed) ++stats.failures;
  stats.max_derived_defect = std::max(stats.max_derived_defect, derived_defect);
  stats.max_iterations = std::max(stats.max_iterations, r.iterations);
  stats.max_relative_residual = std::max(stats.max_relative_residual, r.relative_residual);
}

}  // namespace

double kernel_dGdn(Vec2 x, Vec2 y, Vec2 n_y, double diag_curvature) {
  const Vec2 d = x - y;
  const double r2 = dot(d, d);
  if (r2 == 0.0) return -diag_curvature / (4.0 * kPi);
  return dot(d, n_y) / (2.0 * kPi * r2);
}

DenseMatrix assemble_neumann_system(const BoundaryGrid& grid) {
  const std::size_t n = grid.size();
  const auto& x = grid.points();
  const auto& nrm = grid.normals();
  const auto& w = grid.weights();
  std::vector<double> px(n), py(n), wnx(n), wny(n);
  for (std::size_t j = 0; j < n; ++j) {
    px[j] = x[j].x;
    py[j] = x[j].y;
    wnx[j] = nrm[j].x * w[j] / (2.0 * kPi);
    wny[j] = nrm[j].y * w[j] / (2.0 * kPi);
  }
  const auto& k = simd::active_kernels();
  DenseMatrix a(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    double* row = a.row(i);
    k.double_layer_row(px[i], py[i], px.data(), py.data(), wnx.data(), wny.data(), row, n);
    double rowsum = 0.0;
    for (std::size_t j = 0; j < n; ++j) rowsum += row[j];
    row[i] -= rowsum;
    k.axpy(1.0, w.data(), row, n);
  }
  return a;
}

DenseMatrix assemble_single_layer(const BoundaryGrid& grid) {
  const std::size_t n = grid.size();
  const std::size_t m = n / 2;
  const double h = grid.h();
  // trigonometric weights for ln(4 sin^2((s - t)/2)), circulant in i - j
  std::vector<double> r(n);
  for (std::size_t d = 0; d < n; ++d) {
    const double dt = h * static_cast<double>(d);
    double s = 0.0;
    for (std::size_t l = 1; l < m; ++l) s += std::cos(static_cast<double>(l) * dt) / static_cast<double>(l);
    r[d] = -(2.0 * kPi / m) * s - (kPi / (static_cast<double>(m) * m)) * std::cos(static_cast<double>(m) * dt);
  }
  const auto& x = grid.points();
  const auto& dens = grid.dsdtau();
  DenseMatrix s(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (dens[j] == 0.0) continue;
      double rem;
      if (i == j) {
        rem = std::log(dens[j]);
      } else {
        const double dt = h * (static_cast<double>(i) - static_cast<double>(j));
        const double sn = std::sin(0.5 * dt);
        rem = std::log(norm(x[i] - x[j])) - 0.5 * std::log(4.0 * sn * sn);
        if (!std::isfinite(rem)) rem = 0.0;
      }
      const std::size_t d = (i + n - j) % n;
      s(i, j) = -(0.5 * r[d] + h * rem) * dens[j] / (2.0 * kPi);
    }
  }
  return s;
}

std::vector<double> single_layer_apply(const std::vector<double>& g, const BoundaryGrid& grid) {
  if (g.size() != grid.size()) throw DomainError("single_layer_apply: length does not match grid");
  return matvec(assemble_single_layer(grid), g);
}

TraceSamples single_layer_apply(const TraceSamples& g) {
  if (!g.grid) throw DomainError("single_layer_apply: samples have no grid");
  return TraceSamples(g.grid, single_layer_apply(g.values, *g.grid), TraceKind::dirichlet);
}

NeumannSolver::NeumannSolver(GridPtr grid, NeumannOptions opt)
    : grid_(std::move(grid)), opt_(opt), a_(assemble_neumann_system(*grid_)), s_(assemble_single_layer(*grid_)) {}

std::vector<double> NeumannSolver::solve(std::vector<double> g, SolveReport* report, DataOrigin origin) const {
  const BoundaryGrid& grid = *grid_;
  if (g.size() != grid.size()) throw DomainError("solve_neumann: length does not match grid");
  SolveReport rep;
  const double perimeter = grid.perimeter();
  // corner samples carry zero weight; keep them finite so the matvec stays clean
  const auto& w = grid.weights();
  for (std::size_t j = 0; j < g.size(); ++j)
    if (w[j] == 0.0 || !std::isfinite(g[j])) g[j] = 0.0;
  double gmax = 0.0;
  for (double v : g) gmax = std::max(gmax, std::abs(v));
  const double flux = integrate_boundary(g, grid);
  rep.compatibility_defect = flux;
  const double rel_defect = std::abs(flux) / (1.0 + gmax * perimeter);
  const double rel_tol = origin == DataOrigin::user ? opt_.compat_rel_tol : opt_.derived_compat_rel_tol;
  if (!(rel_defect <= rel_tol)) {
    std::ostringstream os;
    os << "Neumann data violates compatibility: |int g ds| = " << std::abs(flux) << " > "
       << rel_tol * (1.0 + gmax * perimeter);
    throw DomainError(os.str());
  }
  for (double& v : g) v -= flux / perimeter;

  const std::vector<double> rhs = matvec(s_, g);
  GmresResult res = gmres(a_, rhs, opt_.gmres);
  rep.iterations = res.iterations;
  rep.relative_residual = res.relative_residual;
  record(rep, !res.converged, origin == DataOrigin::derived ? rel_defect : 0.0);
  if (!res.converged) {
    std::ostringstream os;
    os << "GMRES did not converge in " << res.iterations << " iterations (relative residual "
       << res.relative_residual << ")";
    throw SolverError(os.str());
  }
  const double mean = boundary_mean(res.x, grid);
  for (double& v : res.x) v -= mean;
  if (report) *report = rep;
  return std::move(res.x);
}

std::shared_ptr<const NeumannSolver> shared_neumann_solver(const GridPtr& grid, const NeumannOptions& opt) {
  static std::mutex mutex;
  static std::list<std::shared_ptr<const NeumannSolver>> lru;
  constexpr std::size_t capacity = 3;
  {
    std::lock_guard lock(mutex);
    for (auto it = lru.begin(); it != lru.end(); ++it) {
      const auto& s = *it;
      if (s->grid()->id() == grid->id() && s->options().gmres.tol == opt.gmres.tol &&
          s->options().gmres.max_iter == opt.gmres.max_iter && s->options().compat_rel_tol == opt.compat_rel_tol &&
          s->options().derived_compat_rel_tol == opt.derived_compat_rel_tol) {
        lru.splice(lru.begin(), lru, it);
        return lru.front();
      }
    }
  }
  // assemble outside the lock; a concurrent duplicate is harmless
  auto solver = std::make_shared<const NeumannSolver>(grid, opt);
  std::lock_guard lock(mutex);
  lru.push_front(solver);
  if (lru.size() > capacity) lru.pop_back();
  return solver;
}

std::pair<TraceSamples, SolveReport> solve_neumann(const TraceSamples& g, const NeumannOptions& opt) {
  if (!g.grid) throw DomainError("solve_neumann: samples have no grid");
  if (g.kind != TraceKind::neumann) throw DomainError("solve_neumann: expected Neumann data");
  SolveReport rep;
  auto phi = shared_neumann_solver(g.grid, opt)->solve(g.values, &rep);
  return {TraceSamples(g.grid, std::move(phi), TraceKind::dirichlet), rep};
}

SolveStats solve_stats() {
  std::lock_guard lock(stats_mutex);
  return stats;
}

void reset_solve_stats() {
  std::lock_guard lock(stats_mutex);
  stats = SolveStats{};
}

}  // namespace curvquad
