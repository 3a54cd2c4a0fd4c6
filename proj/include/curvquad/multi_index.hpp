#pragma once

#include <cstddef>
#include <cstdint>

namespace curvquad {

/// Exponent pair of the shifted monomial (x1-z1)^a1 (x2-z2)^a2.
struct MultiIndex {
  int a1 = 0;
  int a2 = 0;

  constexpr int order() const { return a1 + a2; }
  friend constexpr bool operator==(MultiIndex, MultiIndex) = default;
  friend constexpr MultiIndex operator+(MultiIndex a, MultiIndex b) {
    return {a.a1 + b.a1, a.a2 + b.a2};
  }
};

/// Position of a multiindex in the graded enumeration (0,0),(1,0),(0,1),(2,0),(1,1),...
/// Throws DomainError for negative entries.
std::size_t mi_to_index(MultiIndex alpha);

/// Inverse of mi_to_index. Throws DomainError for negative k.
MultiIndex index_to_mi(std::int64_t k);

/// Number of monomials of total degree <= degree, i.e. C(degree+2, 2).
constexpr std::size_t num_monomials(int degree) {
  return degree < 0 ? 0 : static_cast<std::size_t>(degree + 1) * static_cast<std::size_t>(degree + 2) / 2;
}

}  // namespace curvquad
