#include "curvquad/boundary_grid.hpp"

#include <atomic>
#include <numbers>
#include <sstream>

#include "curvquad/error.hpp"
#include "curvquad/kress.hpp"

namespace curvquad {

namespace {
std::atomic<std::uint64_t> next_grid_id{1};
}

BoundaryGrid::BoundaryGrid(const Cell& cell, int n, int sigma)
    : cell_(cell), n_(n), sigma_(sigma), id_(next_grid_id.fetch_add(1)) {
  if (n < 2) throw DomainError("build_grid: n must be >= 2");
  if (sigma < 2) throw DomainError("build_grid: sigma must be >= 2");
  const std::size_t E = cell.num_edges();
  const std::size_t m = nodes_per_edge();
  const std::size_t N = E * m;
  h_ = 2.0 * std::numbers::pi / static_cast<double>(N);
  for (auto* v : {&tau_, &t_, &speed_, &curvature_, &dsdtau_, &weight_}) v->resize(N);
  x_.resize(N);
  tangent_.resize(N);
  normal_.resize(N);

  for (std::size_t e = 0; e < E; ++e) {
    const EdgeParam& edge = cell.edge(e);
    for (std::size_t k = 0; k < m; ++k) {
      const std::size_t j = e * m + k;
      // k == 0 sits exactly on the vertex; use the edge's own endpoint to avoid rounding.
      const double tau = k == 0 ? edge.a() : edge.a() + static_cast<double>(k) * h_;
      const double t = k == 0 ? edge.a() : kress_lambda(tau, edge.a(), edge.b(), sigma);
      const double lp = k == 0 ? 0.0 : kress_lambda_prime(tau, edge.a(), edge.b(), sigma);
      tau_[j] = tau;
      t_[j] = t;
      x_[j] = edge.point(t);
      speed_[j] = curvquad::speed(edge, t);
      tangent_[j] = unit_tangent(edge, t);
      normal_[j] = rot_cw(tangent_[j]);
      curvature_[j] = curvquad::curvature(edge, t);
      dsdtau_[j] = lp * speed_[j];
      weight_[j] = h_ * dsdtau_[j];
    }
  }
}

double BoundaryGrid::perimeter() const {
  double s = 0.0;
  for (double w : weight_) s += w;
  return s;
}

GridPtr build_grid(const Cell& cell, int n, int sigma) {
  const CellReport rep = validate_cell(cell);
  if (!rep.ok()) {
    std::ostringstream os;
    os << "build_grid: invalid cell '" << cell.name() << "':";
    for (const auto& v : rep.violations) os << ' ' << v << ';';
    throw GeometryError(os.str());
  }
  return std::make_shared<const BoundaryGrid>(cell, n, sigma);
}

TraceSamples::TraceSamples(GridPtr g, std::vector<double> v, TraceKind k)
    : grid(std::move(g)), values(std::move(v)), kind(k) {
  if (grid && values.size() != grid->size()) throw DomainError("TraceSamples: length does not match grid");
}

double integrate_boundary(const std::vector<double>& values, const BoundaryGrid& grid) {
  if (values.size() != grid.size()) throw DomainError("integrate_boundary: length does not match grid");
  const auto& w = grid.weights();
  double s = 0.0;
  for (std::size_t j = 0; j < values.size(); ++j) s += values[j] * w[j];
  return s;
}

double integrate_boundary(const TraceSamples& samples, const BoundaryGrid& grid) {
  if (samples.grid && samples.grid->id() != grid.id())
    throw DomainError("integrate_boundary: samples belong to a different grid");
  return integrate_boundary(samples.values, grid);
}

double boundary_mean(const std::vector<double>& values, const BoundaryGrid& grid) {
  return integrate_boundary(values, grid) / grid.perimeter();
}

}  // namespace curvquad
