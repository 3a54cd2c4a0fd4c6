#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "curvquad/multi_index.hpp"
#include "curvquad/poly2.hpp"

namespace curvquad {

/// One tabulated anti-Laplacian P_alpha: coefficients numerators[i]/denominator of the shifted
/// monomial with graded index indices[i], so that Laplacian(P_alpha) = (x - z)^alpha.
struct AntiLaplacianRow {
  MultiIndex alpha;
  std::vector<std::size_t> indices;
  std::vector<std::int64_t> numerators;
  std::int64_t denominator = 1;
};

/// Highest |alpha| covered by the stored table.
inline constexpr int kAntiLaplacianTableDegree = 10;

/// Rows for every |alpha| <= 10, in graded order (row k has mi_to_index(alpha) == k).
std::span<const AntiLaplacianRow> anti_laplacian_table();

/// Exact P_alpha from the closed-form construction (powers of |x-z|^2/4 times iterated
/// Laplacians of the monomial), centered at the origin.
RationalPoly2 anti_laplacian_monomial_exact(MultiIndex alpha);

/// Floating-point P_alpha: table lookup for |alpha| <= 10, closed form above.
Poly2 anti_laplacian_monomial(MultiIndex alpha, Vec2 center);

/// P with Laplacian(P) = p and deg P = deg p + 2 (zero for p = 0); linear in p.
Poly2 anti_laplacian_poly(const Poly2& p);

}  // namespace curvquad
