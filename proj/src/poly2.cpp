#include "curvquad/poly2.hpp"

#include <cmath>
#include <vector>

namespace curvquad {

double poly_eval(const Poly2& p, Vec2 x) {
  if (p.is_zero()) return 0.0;
  const int deg = p.degree();
  const Vec2 d = x - p.center();
  std::vector<double> pu(static_cast<std::size_t>(deg) + 1, 1.0);
  std::vector<double> pv(static_cast<std::size_t>(deg) + 1, 1.0);
  for (int i = 1; i <= deg; ++i) {
    pu[i] = pu[i - 1] * d.x;
    pv[i] = pv[i - 1] * d.y;
  }
  double s = 0.0;
  for (const auto& [k, c] : p.terms()) {
    const MultiIndex a = index_to_mi(static_cast<std::int64_t>(k));
    s += c * pu[a.a1] * pv[a.a2];
  }
  return s;
}

Poly2 recenter(const Poly2& p, Vec2 new_center) {
  if (p.center() == new_center) return p;
  // (x - z)^a = ((x - w) + (w - z))^a with w the new center
  const Vec2 shift = new_center - p.center();
  const int deg = std::max(p.degree(), 0);
  std::vector<std::vector<double>> binom(static_cast<std::size_t>(deg) + 1);
  for (int n = 0; n <= deg; ++n) {
    binom[n].assign(static_cast<std::size_t>(n) + 1, 1.0);
    for (int k = 1; k < n; ++k) binom[n][k] = binom[n - 1][k - 1] + binom[n - 1][k];
  }
  std::vector<Poly2::Term> out;
  for (const auto& [k, c] : p.terms()) {
    const MultiIndex a = index_to_mi(static_cast<std::int64_t>(k));
    for (int i = 0; i <= a.a1; ++i) {
      const double cx = binom[a.a1][i] * std::pow(shift.x, a.a1 - i);
      if (cx == 0.0) continue;
      for (int j = 0; j <= a.a2; ++j) {
        const double cy = binom[a.a2][j] * std::pow(shift.y, a.a2 - j);
        if (cy == 0.0) continue;
        out.emplace_back(mi_to_index({i, j}), c * cx * cy);
      }
    }
  }
  return Poly2::from_indexed(new_center, std::move(out));
}

Poly2 to_double(const RationalPoly2& p) {
  std::vector<Poly2::Term> out;
  out.reserve(p.terms().size());
  for (const auto& [k, c] : p.terms()) out.emplace_back(k, c.to_double());
  return Poly2::from_indexed(p.center(), std::move(out));
}

double max_coeff_diff(const Poly2& p, const Poly2& q) {
  const Poly2 diff = p - recenter(q, p.center());
  double m = 0.0;
  for (const auto& t : diff.terms()) m = std::max(m, std::abs(t.second));
  return m;
}

}  // namespace curvquad
