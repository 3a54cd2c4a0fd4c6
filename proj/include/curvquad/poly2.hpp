#pragma once

#include <algorithm>
#include <cstddef>
#include <utility>
#include <vector>

#include "curvquad/error.hpp"
#include "curvquad/multi_index.hpp"
#include "curvquad/rational.hpp"
#include "curvquad/vec2.hpp"

namespace curvquad {

/// Sparse bivariate polynomial in shifted monomials (x - z)^alpha.
///
/// Terms are kept sorted by the graded index of mi_to_index with no duplicates and no
/// explicit zeros. The zero polynomial has no terms and degree -1. Arithmetic between two
/// polynomials requires equal centers.
template <class T>
class BasicPoly2 {
 public:
  using Term = std::pair<std::size_t, T>;

  BasicPoly2() = default;
  explicit BasicPoly2(Vec2 center) : center_(center) {}

  static BasicPoly2 constant(Vec2 center, T value) { return monomial(center, {0, 0}, value); }

  static BasicPoly2 monomial(Vec2 center, MultiIndex alpha, T coeff = T(1)) {
    BasicPoly2 p(center);
    if (!is_zero_value(coeff)) p.terms_.emplace_back(mi_to_index(alpha), coeff);
    return p;
  }

  /// Builds from unsorted (multiindex, coefficient) pairs; duplicates accumulate.
  static BasicPoly2 from_terms(Vec2 center, const std::vector<std::pair<MultiIndex, T>>& terms) {
    BasicPoly2 p(center);
    p.terms_.reserve(terms.size());
    for (const auto& [alpha, c] : terms) p.terms_.emplace_back(mi_to_index(alpha), c);
    p.normalize();
    return p;
  }

  /// Builds from unsorted (index, coefficient) pairs; duplicates accumulate.
  static BasicPoly2 from_indexed(Vec2 center, std::vector<Term> terms) {
    BasicPoly2 p(center);
    p.terms_ = std::move(terms);
    p.normalize();
    return p;
  }

  Vec2 center() const { return center_; }
  const std::vector<Term>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  int degree() const { return terms_.empty() ? -1 : index_to_mi(static_cast<std::int64_t>(terms_.back().first)).order(); }

  T coeff(MultiIndex alpha) const {
    const std::size_t k = mi_to_index(alpha);
    auto it = std::lower_bound(terms_.begin(), terms_.end(), k,
                               [](const Term& t, std::size_t key) { return t.first < key; });
    return (it != terms_.end() && it->first == k) ? it->second : T(0);
  }

  BasicPoly2& operator+=(const BasicPoly2& o) {
    if (o.is_zero()) return *this;
    if (is_zero()) {
      const Vec2 c = o.center_;
      *this = o;
      center_ = c;
      return *this;
    }
    require_same_center(o);
    std::vector<Term> merged;
    merged.reserve(terms_.size() + o.terms_.size());
    std::merge(terms_.begin(), terms_.end(), o.terms_.begin(), o.terms_.end(), std::back_inserter(merged),
               [](const Term& a, const Term& b) { return a.first < b.first; });
    terms_ = std::move(merged);
    collapse_sorted();
    return *this;
  }
  BasicPoly2& operator-=(const BasicPoly2& o) { return *this += o * T(-1); }
  BasicPoly2& operator*=(T s) {
    for (auto& t : terms_) t.second = t.second * s;
    std::erase_if(terms_, [](const Term& t) { return is_zero_value(t.second); });
    return *this;
  }

  friend BasicPoly2 operator+(BasicPoly2 a, const BasicPoly2& b) { return a += b; }
  friend BasicPoly2 operator-(BasicPoly2 a, const BasicPoly2& b) { return a -= b; }
  friend BasicPoly2 operator*(BasicPoly2 a, T s) { return a *= s; }
  friend BasicPoly2 operator*(T s, BasicPoly2 a) { return a *= s; }
  friend BasicPoly2 operator*(const BasicPoly2& a, const BasicPoly2& b) { return poly_mul(a, b); }

  /// Sparse double loop over the nonzero terms, accumulating into the index of alpha+beta.
  friend BasicPoly2 poly_mul(const BasicPoly2& p, const BasicPoly2& q) {
    if (p.is_zero() || q.is_zero()) return BasicPoly2(p.is_zero() ? q.center_ : p.center_);
    p.require_same_center(q);
    std::vector<Term> out;
    out.reserve(p.terms_.size() * q.terms_.size());
    for (const auto& [ka, ca] : p.terms_) {
      const MultiIndex a = index_to_mi(static_cast<std::int64_t>(ka));
      for (const auto& [kb, cb] : q.terms_) {
        const MultiIndex b = index_to_mi(static_cast<std::int64_t>(kb));
        out.emplace_back(mi_to_index(a + b), ca * cb);
      }
    }
    return from_indexed(p.center_, std::move(out));
  }

  friend std::pair<BasicPoly2, BasicPoly2> poly_grad(const BasicPoly2& p) {
    std::vector<Term> gx;
    std::vector<Term> gy;
    for (const auto& [k, c] : p.terms_) {
      const MultiIndex a = index_to_mi(static_cast<std::int64_t>(k));
      if (a.a1 > 0) gx.emplace_back(mi_to_index({a.a1 - 1, a.a2}), c * T(a.a1));
      if (a.a2 > 0) gy.emplace_back(mi_to_index({a.a1, a.a2 - 1}), c * T(a.a2));
    }
    return {from_indexed(p.center_, std::move(gx)), from_indexed(p.center_, std::move(gy))};
  }

  friend BasicPoly2 poly_laplacian(const BasicPoly2& p) {
    std::vector<Term> out;
    for (const auto& [k, c] : p.terms_) {
      const MultiIndex a = index_to_mi(static_cast<std::int64_t>(k));
      if (a.a1 > 1) out.emplace_back(mi_to_index({a.a1 - 2, a.a2}), c * T(a.a1 * (a.a1 - 1)));
      if (a.a2 > 1) out.emplace_back(mi_to_index({a.a1, a.a2 - 2}), c * T(a.a2 * (a.a2 - 1)));
    }
    return from_indexed(p.center_, std::move(out));
  }

  friend bool operator==(const BasicPoly2& a, const BasicPoly2& b) {
    return a.center_ == b.center_ && a.terms_ == b.terms_;
  }

 private:
  static bool is_zero_value(const T& v) { return v == T(0); }

  void require_same_center(const BasicPoly2& o) const {
    if (!(center_ == o.center_)) throw DomainError("Poly2: operands have different centers");
  }

  void normalize() {
    std::stable_sort(terms_.begin(), terms_.end(), [](const Term& a, const Term& b) { return a.first < b.first; });
    collapse_sorted();
  }

  void collapse_sorted() {
    std::vector<Term> out;
    out.reserve(terms_.size());
    for (const auto& t : terms_) {
      if (!out.empty() && out.back().first == t.first) {
        out.back().second = out.back().second + t.second;
      } else {
        out.push_back(t);
      }
    }
    std::erase_if(out, [](const Term& t) { return is_zero_value(t.second); });
    terms_ = std::move(out);
  }

  Vec2 center_{};
  std::vector<Term> terms_;
};

using Poly2 = BasicPoly2<double>;
using RationalPoly2 = BasicPoly2<Rational>;

/// Pointwise value p(x).
double poly_eval(const Poly2& p, Vec2 x);

/// Re-expands p about a new center (binomial shift). Exact up to rounding.
Poly2 recenter(const Poly2& p, Vec2 new_center);

/// Converts exact coefficients to floating point.
Poly2 to_double(const RationalPoly2& p);

/// Maximum |coefficient| of p - q after recentering q onto p's center.
double max_coeff_diff(const Poly2& p, const Poly2& q);

}  // namespace curvquad
