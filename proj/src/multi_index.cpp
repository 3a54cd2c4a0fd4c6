#include "curvquad/multi_index.hpp"

#include <cmath>

#include "curvquad/error.hpp"

namespace curvquad {

std::size_t mi_to_index(MultiIndex alpha) {
  if (alpha.a1 < 0 || alpha.a2 < 0) throw DomainError("mi_to_index: negative exponent");
  const auto n = static_cast<std::size_t>(alpha.order());
  return n * (n + 1) / 2 + static_cast<std::size_t>(alpha.a2);
}

MultiIndex index_to_mi(std::int64_t k) {
  if (k < 0) throw DomainError("index_to_mi: negative index");
  auto n = static_cast<std::int64_t>((std::sqrt(8.0 * static_cast<double>(k) + 1.0) - 1.0) / 2.0);
  // floating-point guard for large k
  while (n * (n + 1) / 2 > k) --n;
  while ((n + 1) * (n + 2) / 2 <= k) ++n;
  const std::int64_t base = n * (n + 1) / 2;
  return {static_cast<int>(n - k + base), static_cast<int>(k - base)};
}

}  // namespace curvquad
