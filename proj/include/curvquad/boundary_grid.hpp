#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "curvquad/cell.hpp"
#include "curvquad/vec2.hpp"

namespace curvquad {

/// Kress-graded nodes over the whole boundary.
///
/// Edge e contributes m = 2n nodes at tau_k = a_e + k h, k = 0..m-1, so the first node of
/// each edge is its starting vertex (weight 0) and every vertex appears once. The global tau
/// grid is uniform with spacing h = 2 pi / N.
class BoundaryGrid {
 public:
  BoundaryGrid(const Cell& cell, int n, int sigma);

  std::size_t size() const { return x_.size(); }
  int n() const { return n_; }
  int sigma() const { return sigma_; }
  double h() const { return h_; }
  std::size_t nodes_per_edge() const { return static_cast<std::size_t>(2 * n_); }
  const Cell& cell() const { return cell_; }
  /// Unique per constructed grid; traces carry it to detect mismatches.
  std::uint64_t id() const { return id_; }

  std::size_t edge_of(std::size_t j) const { return j / nodes_per_edge(); }
  /// Index of the first node of edge e (the vertex where it starts).
  std::size_t edge_begin(std::size_t e) const { return e * nodes_per_edge(); }

  const std::vector<double>& tau() const { return tau_; }
  const std::vector<double>& t() const { return t_; }
  const std::vector<Vec2>& points() const { return x_; }
  const std::vector<Vec2>& tangents() const { return tangent_; }
  const std::vector<Vec2>& normals() const { return normal_; }
  const std::vector<double>& speed() const { return speed_; }
  const std::vector<double>& curvature() const { return curvature_; }
  /// |dx/dtau| = lambda'(tau) |x'(t)|; zero at vertices.
  const std::vector<double>& dsdtau() const { return dsdtau_; }
  /// ds-weights h * dsdtau.
  const std::vector<double>& weights() const { return weight_; }

  double perimeter() const;

 private:
  Cell cell_;
  int n_;
  int sigma_;
  double h_;
  std::uint64_t id_;
  std::vector<double> tau_, t_, speed_, curvature_, dsdtau_, weight_;
  std::vector<Vec2> x_, tangent_, normal_;
};

using GridPtr = std::shared_ptr<const BoundaryGrid>;

/// Throws GeometryError if validate_cell reports violations, DomainError if n < 2 or sigma < 2.
GridPtr build_grid(const Cell& cell, int n, int sigma = 7);

enum class TraceKind { dirichlet, neumann, tangential_derivative };

/// Values of a scalar field at every node of a grid.
struct TraceSamples {
  GridPtr grid;
  std::vector<double> values;
  TraceKind kind = TraceKind::dirichlet;

  TraceSamples() = default;
  TraceSamples(GridPtr g, std::vector<double> v, TraceKind k = TraceKind::dirichlet);

  std::size_t size() const { return values.size(); }
  double operator[](std::size_t j) const { return values[j]; }
};

/// Sum of samples times ds-weights. Throws DomainError on length or grid mismatch.
double integrate_boundary(const TraceSamples& samples, const BoundaryGrid& grid);
double integrate_boundary(const std::vector<double>& values, const BoundaryGrid& grid);

/// Weighted mean over the boundary.
double boundary_mean(const std::vector<double>& values, const BoundaryGrid& grid);

}  // namespace curvquad
