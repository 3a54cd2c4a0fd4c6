#pragma once

#include <vector>

#include "curvquad/boundary_grid.hpp"
#include "curvquad/cell.hpp"
#include "curvquad/poly2.hpp"

namespace curvquad {

/// Integral of p over the cell, reduced to the boundary through homogeneity:
/// int_K (x-z)^a dx = 1/(2+|a|) int_dK (x-z)^a (x-z).n ds, z = p.center().
double poly_volume_integral(const Poly2& p, const Cell& cell, const BoundaryGrid& grid);

double poly_trace(const Poly2& p, const EdgeParam& edge, double t);
/// grad p . n along the edge.
double poly_normal_derivative_trace(const Poly2& p, const EdgeParam& edge, double t);

/// p and grad p . n at every grid node.
std::vector<double> sample_poly(const Poly2& p, const BoundaryGrid& grid);
std::vector<double> sample_poly_normal_derivative(const Poly2& p, const BoundaryGrid& grid);

}  // namespace curvquad
