#include "curvquad/anti_laplacian.hpp"

#include <array>

namespace curvquad {

namespace {

// Non-zero coefficients of P_alpha for |alpha| <= 10 as integer numerators over a common
// denominator. Row (5,1) carries (15, 7, -7, 1)/672, the value that satisfies
// Laplacian(P_alpha) = (x - z)^alpha exactly.
const std::vector<AntiLaplacianRow>& table_rows() {
  static const std::vector<AntiLaplacianRow> rows = {
      {{0, 0}, {3, 5}, {1, 1}, 4},
      {{1, 0}, {6, 8}, {1, 1}, 8},
      {{0, 1}, {7, 9}, {1, 1}, 8},
      {{2, 0}, {10, 12, 14}, {7, 6, -1}, 96},
      {{1, 1}, {11, 13}, {1, 1}, 12},
      {{0, 2}, {10, 12, 14}, {-1, 6, 7}, 96},
      {{3, 0}, {15, 17, 19}, {3, 2, -1}, 64},
      {{2, 1}, {16, 18, 20}, {11, 10, -1}, 192},
      {{1, 2}, {15, 17, 19}, {-1, 10, 11}, 192},
      {{0, 3}, {16, 18, 20}, {-1, 2, 3}, 64},
      {{4, 0}, {21, 23, 25, 27}, {31, 15, -15, 1}, 960},
      {{3, 1}, {22, 24, 26}, {13, 10, -3}, 320},
      {{2, 2}, {21, 23, 25, 27}, {-1, 15, 15, -1}, 360},
      {{1, 3}, {22, 24, 26}, {-3, 10, 13}, 320},
      {{0, 4}, {21, 23, 25, 27}, {1, -15, 15, 31}, 960},
      {{5, 0}, {28, 30, 32, 34}, {9, 3, -5, 1}, 384},
      {{4, 1}, {29, 31, 33, 35}, {57, 35, -21, 1}, 1920},
      {{3, 2}, {28, 30, 32, 34}, {-3, 63, 55, -11}, 1920},
      {{2, 3}, {29, 31, 33, 35}, {-11, 55, 63, -3}, 1920},
      {{1, 4}, {28, 30, 32, 34}, {1, -21, 35, 57}, 1920},
      {{0, 5}, {29, 31, 33, 35}, {1, -5, 3, 9}, 384},
      {{6, 0}, {36, 38, 40, 42, 44}, {127, 28, -70, 28, -1}, 7168},
      {{5, 1}, {37, 39, 41, 43}, {15, 7, -7, 1}, 672},
      {{4, 2}, {36, 38, 40, 42, 44}, {-99, 2772, 2030, -812, 29}, 107520},
      {{3, 3}, {37, 39, 41, 43}, {-1, 7, 7, -1}, 280},
      {{2, 4}, {36, 38, 40, 42, 44}, {29, -812, 2030, 2772, -99}, 107520},
      {{1, 5}, {37, 39, 41, 43}, {1, -7, 7, 15}, 672},
      {{0, 6}, {36, 38, 40, 42, 44}, {-1, 28, -70, 28, 127}, 7168},
      {{7, 0}, {45, 47, 49, 51, 53}, {85, 12, -42, 28, -3}, 6144},
      {{6, 1}, {46, 48, 50, 52, 54}, {247, 84, -126, 36, -1}, 14336},
      {{5, 2}, {45, 47, 49, 51, 53}, {-73, 2628, 1554, -1036, 111}, 129024},
      {{4, 3}, {46, 48, 50, 52, 54}, {-489, 4564, 3906, -1116, 31}, 215040},
      {{3, 4}, {45, 47, 49, 51, 53}, {31, -1116, 3906, 4564, -489}, 215040},
      {{2, 5}, {46, 48, 50, 52, 54}, {111, -1036, 1554, 2628, -73}, 129024},
      {{1, 6}, {45, 47, 49, 51, 53}, {-1, 36, -126, 84, 247}, 14336},
      {{0, 7}, {46, 48, 50, 52, 54}, {-3, 28, -42, 12, 85}, 6144},
      {{8, 0}, {55, 57, 59, 61, 63, 65}, {511, 45, -210, 210, -45, 1}, 46080},
      {{7, 1}, {56, 58, 60, 62, 64}, {251, 60, -126, 60, -5}, 18432},
      {{6, 2}, {55, 57, 59, 61, 63, 65}, {-233, 10485, 4830, -4830, 1035, -23}, 645120},
      {{5, 3}, {56, 58, 60, 62, 64}, {-191, 2292, 1638, -780, 65}, 129024},
      {{4, 4}, {55, 57, 59, 61, 63, 65}, {1, -45, 210, 210, -45, 1}, 12600},
      {{3, 5}, {56, 58, 60, 62, 64}, {65, -780, 1638, 2292, -191}, 129024},
      {{2, 6}, {55, 57, 59, 61, 63, 65}, {-23, 1035, -4830, 4830, 10485, -233}, 645120},
      {{1, 7}, {56, 58, 60, 62, 64}, {-5, 60, -126, 60, 251}, 18432},
      {{0, 8}, {55, 57, 59, 61, 63, 65}, {1, -45, 210, -210, 45, 511}, 46080},
      {{9, 0}, {66, 68, 70, 72, 74, 76}, {93, 5, -30, 42, -15, 1}, 10240},
      {{8, 1}, {67, 69, 71, 73, 75, 77}, {1013, 165, -462, 330, -55, 1}, 92160},
      {{7, 2}, {66, 68, 70, 72, 74, 76}, {-11, 605, 210, -294, 105, -7}, 46080},
      {{6, 3}, {67, 69, 71, 73, 75, 77}, {-53, 795, 462, -330, 55, -1}, 53760},
      {{5, 4}, {66, 68, 70, 72, 74, 76}, {29, -1595, 9570, 8106, -2895, 193}, 645120},
      {{4, 5}, {67, 69, 71, 73, 75, 77}, {193, -2895, 8106, 9570, -1595, 29}, 645120},
      {{3, 6}, {66, 68, 70, 72, 74, 76}, {-1, 55, -330, 462, 795, -53}, 53760},
      {{2, 7}, {67, 69, 71, 73, 75, 77}, {-7, 105, -294, 210, 605, -11}, 46080},
      {{1, 8}, {66, 68, 70, 72, 74, 76}, {1, -55, 330, -462, 165, 1013}, 92160},
      {{0, 9}, {67, 69, 71, 73, 75, 77}, {1, -15, 42, -30, 5, 93}, 10240},
      {{10, 0}, {78, 80, 82, 84, 86, 88, 90}, {2047, 66, -495, 924, -495, 66, -1}, 270336},
      {{9, 1}, {79, 81, 83, 85, 87, 89}, {509, 55, -198, 198, -55, 3}, 56320},
      {{8, 2}, {78, 80, 82, 84, 86, 88, 90}, {-1981, 130746, 33165, -61908, 33165, -4422, 67}, 12165120},
      {{7, 3}, {79, 81, 83, 85, 87, 89}, {-681, 12485, 5742, -5742, 1595, -87}, 1013760},
      {{6, 4}, {78, 80, 82, 84, 86, 88, 90}, {743, -49038, 367785, 259644, -139095, 18546, -281}, 28385280},
      {{5, 5}, {79, 81, 83, 85, 87, 89}, {3, -55, 198, 198, -55, 3}, 16632},
      {{4, 6}, {78, 80, 82, 84, 86, 88, 90}, {-281, 18546, -139095, 259644, 367785, -49038, 743}, 28385280},
      {{3, 7}, {79, 81, 83, 85, 87, 89}, {-87, 1595, -5742, 5742, 12485, -681}, 1013760},
      {{2, 8}, {78, 80, 82, 84, 86, 88, 90}, {67, -4422, 33165, -61908, 33165, 130746, -1981}, 12165120},
      {{1, 9}, {79, 81, 83, 85, 87, 89}, {3, -55, 198, -198, 55, 509}, 56320},
      {{0, 10}, {78, 80, 82, 84, 86, 88, 90}, {-1, 66, -495, 924, -495, 66, 2047}, 270336},
  };
  return rows;
}

std::int64_t factorial(int n) {
  std::int64_t f = 1;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

}  // namespace

std::span<const AntiLaplacianRow> anti_laplacian_table() { return table_rows(); }

RationalPoly2 anti_laplacian_monomial_exact(MultiIndex alpha) {
  const Vec2 origin{};
  const int n = alpha.order();
  // |x|^2 / 4
  const RationalPoly2 quarter_r2 =
      RationalPoly2::from_terms(origin, {{{2, 0}, Rational(1, 4)}, {{0, 2}, Rational(1, 4)}});
  RationalPoly2 sum(origin);
  RationalPoly2 lap_k = RationalPoly2::monomial(origin, alpha, Rational(1));
  RationalPoly2 r2_pow = RationalPoly2::constant(origin, Rational(1));
  for (int k = 0; k <= n / 2; ++k) {
    const Rational c((k % 2 == 0 ? 1 : -1) * factorial(n - k), factorial(k + 1));
    sum += (r2_pow * lap_k) * c;
    lap_k = poly_laplacian(lap_k);
    r2_pow = r2_pow * quarter_r2;
  }
  return (quarter_r2 * sum) * Rational(1, factorial(n + 1));
}

Poly2 anti_laplacian_monomial(MultiIndex alpha, Vec2 center) {
  if (alpha.order() <= kAntiLaplacianTableDegree) {
    const AntiLaplacianRow& row = table_rows()[mi_to_index(alpha)];
    std::vector<Poly2::Term> terms;
    terms.reserve(row.indices.size());
    const auto den = static_cast<double>(row.denominator);
    for (std::size_t i = 0; i < row.indices.size(); ++i)
      terms.emplace_back(row.indices[i], static_cast<double>(row.numerators[i]) / den);
    return Poly2::from_indexed(center, std::move(terms));
  }
  // Closed form in floating point: factorials overflow 64-bit rationals past |alpha| ~ 18.
  const int n = alpha.order();
  const Poly2 quarter_r2 = Poly2::from_terms(center, {{{2, 0}, 0.25}, {{0, 2}, 0.25}});
  Poly2 sum(center);
  Poly2 lap_k = Poly2::monomial(center, alpha, 1.0);
  Poly2 r2_pow = Poly2::constant(center, 1.0);
  double fact_n1 = 1.0;
  for (int i = 2; i <= n + 1; ++i) fact_n1 *= i;
  for (int k = 0; k <= n / 2; ++k) {
    double ratio = 1.0;  // (n-k)!/(k+1)!
    for (int i = 2; i <= n - k; ++i) ratio *= i;
    for (int i = 2; i <= k + 1; ++i) ratio /= i;
    sum += (r2_pow * lap_k) * ((k % 2 == 0 ? 1.0 : -1.0) * ratio / fact_n1);
    lap_k = poly_laplacian(lap_k);
    r2_pow = r2_pow * quarter_r2;
  }
  return quarter_r2 * sum;
}

Poly2 anti_laplacian_poly(const Poly2& p) {
  Poly2 out(p.center());
  for (const auto& [k, c] : p.terms())
    out += anti_laplacian_monomial(index_to_mi(static_cast<std::int64_t>(k)), p.center()) * c;
  return out;
}

}  // namespace curvquad
