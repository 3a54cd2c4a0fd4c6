#include "curvquad/poly_boundary.hpp"

#include "curvquad/error.hpp"

namespace curvquad {

double poly_volume_integral(const Poly2& p, const Cell& cell, const BoundaryGrid& grid) {
  if (grid.cell().num_edges() != cell.num_edges() || !(grid.cell().vertex(0) == cell.vertex(0)))
    throw DomainError("poly_volume_integral: grid was built on a different cell");
  if (p.is_zero()) return 0.0;
  // q = sum c_a/(2+|a|) (x-z)^a, then integrate q (x-z).n
  std::vector<Poly2::Term> scaled;
  scaled.reserve(p.terms().size());
  for (const auto& [k, c] : p.terms()) {
    const int order = index_to_mi(static_cast<std::int64_t>(k)).order();
    scaled.emplace_back(k, c / (2.0 + order));
  }
  const Poly2 q = Poly2::from_indexed(p.center(), std::move(scaled));
  const Vec2 z = p.center();
  const auto& x = grid.points();
  const auto& nrm = grid.normals();
  const auto& w = grid.weights();
  double s = 0.0;
  for (std::size_t j = 0; j < grid.size(); ++j) {
    if (w[j] == 0.0) continue;
    s += poly_eval(q, x[j]) * dot(x[j] - z, nrm[j]) * w[j];
  }
  return s;
}

double poly_trace(const Poly2& p, const EdgeParam& edge, double t) { return poly_eval(p, edge.point(t)); }

double poly_normal_derivative_trace(const Poly2& p, const EdgeParam& edge, double t) {
  const auto [gx, gy] = poly_grad(p);
  const Vec2 x = edge.point(t);
  const Vec2 n = unit_normal(edge, t);
  return poly_eval(gx, x) * n.x + poly_eval(gy, x) * n.y;
}

std::vector<double> sample_poly(const Poly2& p, const BoundaryGrid& grid) {
  std::vector<double> out(grid.size());
  const auto& x = grid.points();
  for (std::size_t j = 0; j < out.size(); ++j) out[j] = poly_eval(p, x[j]);
  return out;
}

std::vector<double> sample_poly_normal_derivative(const Poly2& p, const BoundaryGrid& grid) {
  const auto [gx, gy] = poly_grad(p);
  std::vector<double> out(grid.size());
  const auto& x = grid.points();
  const auto& n = grid.normals();
  for (std::size_t j = 0; j < out.size(); ++j) out[j] = poly_eval(gx, x[j]) * n[j].x + poly_eval(gy, x[j]) * n[j].y;
  return out;
}

}  // namespace curvquad
