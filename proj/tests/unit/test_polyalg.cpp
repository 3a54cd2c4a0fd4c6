#include <cmath>
#include <random>

#include "curvquad/anti_laplacian.hpp"
#include "curvquad/boundary_grid.hpp"
#include "curvquad/error.hpp"
#include "curvquad/multi_index.hpp"
#include "curvquad/poly2.hpp"
#include "curvquad/poly_boundary.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace curvquad;

namespace {

Poly2 random_poly(std::mt19937& rng, int degree, Vec2 center) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<Poly2::Term> t;
  for (std::size_t k = 0; k < num_monomials(degree); ++k) t.emplace_back(k, u(rng));
  return Poly2::from_indexed(center, t);
}

RationalPoly2 row_poly(const AntiLaplacianRow& row) {
  std::vector<RationalPoly2::Term> t;
  for (std::size_t i = 0; i < row.indices.size(); ++i)
    t.emplace_back(row.indices[i], Rational(row.numerators[i], row.denominator));
  return RationalPoly2::from_indexed({0, 0}, t);
}

}  // namespace

TEST_CASE("multiindex enumeration") {
  CHECK(mi_to_index({0, 0}) == 0);
  CHECK(mi_to_index({2, 3}) == 18);
  CHECK(mi_to_index({0, 9}) == 54);
  CHECK(index_to_mi(24) == MultiIndex{3, 3});
  CHECK(index_to_mi(0) == MultiIndex{0, 0});
  CHECK(index_to_mi(44) == MultiIndex{0, 8});
  CHECK_THROWS_AS(index_to_mi(-1), DomainError);
  CHECK_THROWS_AS(mi_to_index({-1, 2}), DomainError);

  for (std::int64_t k = 0; k < 500; ++k) CHECK(mi_to_index(index_to_mi(k)) == static_cast<std::size_t>(k));
  for (int n = 0; n <= 30; ++n)
    for (int a2 = 0; a2 <= n; ++a2) CHECK(index_to_mi(static_cast<std::int64_t>(mi_to_index({n - a2, a2}))) == MultiIndex{n - a2, a2});
  CHECK(num_monomials(10) == 66);
}

TEST_CASE("sparse product") {
  const Vec2 z{0.3, -0.2};
  std::mt19937 rng(7);
  const Poly2 q = random_poly(rng, 3, z);
  CHECK(poly_mul(Poly2::constant(z, 1.0), q) == q);

  const Poly2 xy = poly_mul(Poly2::monomial(z, {1, 0}), Poly2::monomial(z, {0, 1}));
  REQUIRE(xy.terms().size() == 1);
  CHECK(xy.coeff({1, 1}) == 1.0);

  // dense convolution over exponent grids
  for (int trial = 0; trial < 5; ++trial) {
    const Poly2 a = random_poly(rng, 3, z);
    const Poly2 b = random_poly(rng, 3, z);
    double dense[7][7] = {};
    for (int i1 = 0; i1 <= 3; ++i1)
      for (int i2 = 0; i1 + i2 <= 3; ++i2)
        for (int j1 = 0; j1 <= 3; ++j1)
          for (int j2 = 0; j1 + j2 <= 3; ++j2) dense[i1 + j1][i2 + j2] += a.coeff({i1, i2}) * b.coeff({j1, j2});
    const Poly2 c = poly_mul(a, b);
    CHECK(c.degree() == 6);
    for (int e1 = 0; e1 <= 6; ++e1)
      for (int e2 = 0; e1 + e2 <= 6; ++e2) CHECK(c.coeff({e1, e2}) == doctest::Approx(dense[e1][e2]).epsilon(1e-14));
  }
  CHECK_THROWS_AS(poly_mul(Poly2::constant({0, 0}, 1.0), Poly2::constant({1, 0}, 1.0)), DomainError);
}

TEST_CASE("zero polynomial conventions") {
  const Poly2 zero({0.5, 0.5});
  CHECK(zero.is_zero());
  CHECK(zero.degree() == -1);
  CHECK(Poly2::constant({0, 0}, 0.0).is_zero());
  const Poly2 p = Poly2::monomial({0, 0}, {1, 2}, 3.0);
  CHECK((p - p).is_zero());
  CHECK(anti_laplacian_poly(zero).is_zero());
}

TEST_CASE("gradient") {
  const Vec2 z{0, 0};
  const auto [cx, cy] = poly_grad(Poly2::constant(z, 4.0));
  CHECK(cx.is_zero());
  CHECK(cy.is_zero());

  const auto [gx, gy] = poly_grad(Poly2::monomial(z, {2, 3}));
  CHECK(gx == Poly2::monomial(z, {1, 3}, 2.0));
  CHECK(gy == Poly2::monomial(z, {2, 2}, 3.0));

  std::mt19937 rng(11);
  const Poly2 p = random_poly(rng, 5, {0.4, 0.6});
  const auto [px, py] = poly_grad(p);
  for (const Vec2 x : {Vec2{0.1, 0.2}, Vec2{0.7, 0.3}, Vec2{0.5, 0.9}}) {
    const double fdx = oracle::central_diff([&](double s) { return poly_eval(p, {s, x.y}); }, x.x);
    const double fdy = oracle::central_diff([&](double s) { return poly_eval(p, {x.x, s}); }, x.y);
    CHECK(std::abs(poly_eval(px, x) - fdx) < 1e-8);
    CHECK(std::abs(poly_eval(py, x) - fdy) < 1e-8);
  }
}

TEST_CASE("laplacian") {
  const Vec2 z{0.2, 0.1};
  const Poly2 r2 = Poly2::from_terms(z, {{{2, 0}, 0.25}, {{0, 2}, 0.25}});
  CHECK(poly_laplacian(r2) == Poly2::constant(z, 1.0));
  CHECK(poly_laplacian(Poly2::monomial(z, {1, 1}, 2.0)).is_zero());
}

TEST_CASE("anti-Laplacian table rows") {
  const auto table = anti_laplacian_table();
  REQUIRE(table.size() == num_monomials(kAntiLaplacianTableDegree));
  for (std::size_t k = 0; k < table.size(); ++k) {
    const AntiLaplacianRow& row = table[k];
    CAPTURE(k);
    CHECK(mi_to_index(row.alpha) == k);
    const RationalPoly2 p = row_poly(row);
    CHECK(poly_laplacian(p) == RationalPoly2::monomial({0, 0}, row.alpha, Rational(1)));
    CHECK(p == anti_laplacian_monomial_exact(row.alpha));
    CHECK(p.degree() == row.alpha.order() + 2);
    std::int64_t alt = 0;
    for (std::size_t i = 0; i < row.numerators.size(); ++i) alt += (i % 2 == 0 ? 1 : -1) * row.numerators[i];
    CHECK(alt == 0);
  }
}

TEST_CASE("anti-Laplacian examples") {
  const Vec2 z{0, 0};
  const Poly2 p0 = anti_laplacian_poly(Poly2::constant(z, 1.0));
  CHECK(p0 == Poly2::from_indexed(z, {{3, 0.25}, {5, 0.25}}));

  const Poly2 p23 = anti_laplacian_monomial({2, 3}, z);
  const std::vector<std::pair<std::size_t, double>> expect23 = {
      {29, -11.0 / 1920}, {31, 55.0 / 1920}, {33, 63.0 / 1920}, {35, -3.0 / 1920}};
  REQUIRE(p23.terms().size() == expect23.size());
  for (std::size_t i = 0; i < expect23.size(); ++i) {
    CHECK(p23.terms()[i].first == expect23[i].first);
    CHECK(p23.terms()[i].second == doctest::Approx(expect23[i].second).epsilon(1e-15));
  }

  const Poly2 p55 = anti_laplacian_monomial({5, 5}, z);
  const int num55[] = {3, -55, 198, 198, -55, 3};
  REQUIRE(p55.terms().size() == 6);
  for (std::size_t i = 0; i < 6; ++i) {
    CHECK(p55.terms()[i].first == 79 + 2 * i);
    CHECK(p55.terms()[i].second == doctest::Approx(num55[i] / 16632.0).epsilon(1e-15));
  }
}

TEST_CASE("anti-Laplacian exactness and linearity in floating point") {
  std::mt19937 rng(3);
  for (int deg = 0; deg <= 12; ++deg) {
    const Poly2 p = random_poly(rng, deg, {0.5, 0.25});
    const Poly2 P = anti_laplacian_poly(p);
    CHECK(P.degree() == deg + 2);
    const Poly2 back = poly_laplacian(P);
    double scale = 0.0;
    for (const auto& [k, c] : p.terms()) scale = std::max(scale, std::abs(c));
    CHECK(max_coeff_diff(back, p) <= 1e-13 * scale);
  }
  const Poly2 p = random_poly(rng, 7, {0, 0});
  const Poly2 q = random_poly(rng, 11, {0, 0});
  const double a = 0.7, b = -1.3;
  const Poly2 lhs = anti_laplacian_poly(a * p + b * q);
  const Poly2 rhs = a * anti_laplacian_poly(p) + b * anti_laplacian_poly(q);
  CHECK(max_coeff_diff(lhs, rhs) < 1e-15);
}

TEST_CASE("closed form above the table") {
  for (const MultiIndex alpha : {MultiIndex{11, 0}, MultiIndex{6, 7}, MultiIndex{0, 14}}) {
    const Poly2 P = anti_laplacian_monomial(alpha, {0, 0});
    CHECK(max_coeff_diff(poly_laplacian(P), Poly2::monomial({0, 0}, alpha)) < 1e-14);
  }
}

TEST_CASE("recenter preserves values") {
  std::mt19937 rng(5);
  const Poly2 p = random_poly(rng, 6, {0.1, 0.2});
  const Poly2 q = recenter(p, {0.8, -0.3});
  for (const Vec2 x : {Vec2{0, 0}, Vec2{0.5, 0.5}, Vec2{1.2, -0.7}})
    CHECK(poly_eval(q, x) == doctest::Approx(poly_eval(p, x)).epsilon(1e-12));
}

TEST_CASE("volume integrals on the unit square") {
  const Cell sq = build_square();
  const GridPtr g = build_grid(sq, 32);
  const Vec2 z = sq.shift_point();
  CHECK(std::abs(poly_volume_integral(Poly2::constant(z, 1.0), sq, *g) - 1.0) <= 1e-9);
  CHECK(std::abs(poly_volume_integral(Poly2::monomial(z, {1, 1}), sq, *g)) <= 1e-12);
  const Poly2 x2y2 = recenter(Poly2::monomial({0, 0}, {2, 2}), z);
  CHECK(std::abs(poly_volume_integral(x2y2, sq, *g) - 1.0 / 9.0) <= 1e-12);

  double worst = 0.0;
  for (int n = 0; n <= 10; ++n) {
    for (int a2 = 0; a2 <= n; ++a2) {
      const MultiIndex a{n - a2, a2};
      const double ref = oracle::integrate_unit_square(
          [&](double x, double y) { return std::pow(x - z.x, a.a1) * std::pow(y - z.y, a.a2); });
      worst = std::max(worst, std::abs(poly_volume_integral(Poly2::monomial(z, a), sq, *g) - ref));
    }
  }
  CHECK(worst <= 1e-12);
}

TEST_CASE("traces along edges") {
  const Cell circle = build_circle();
  const Poly2 p = Poly2::from_terms({0, 0}, {{{2, 0}, 0.25}, {{0, 2}, 0.25}});
  const EdgeParam& e = circle.edge(0);
  for (double u : {0.1, 0.5, 0.9}) {
    const double t = e.a() + u * (e.b() - e.a());
    CHECK(poly_trace(Poly2::constant({0, 0}, 1.0), e, t) == 1.0);
    CHECK(poly_normal_derivative_trace(p, e, t) == doctest::Approx(0.5).epsilon(1e-14));
  }
  std::mt19937 rng(9);
  const Poly2 q = random_poly(rng, 4, {0.5, 0.5});
  const Cell puzzle = build_puzzle();
  for (std::size_t i = 0; i < puzzle.num_edges(); ++i) {
    const EdgeParam& edge = puzzle.edge(i);
    const double t = 0.5 * (edge.a() + edge.b());
    const Vec2 x = edge.point(t);
    const Vec2 n = unit_normal(edge, t);
    const double fd = oracle::central_diff([&](double s) { return poly_eval(q, x + s * n); }, 0.0);
    CHECK(std::abs(poly_normal_derivative_trace(q, edge, t) - fd) < 1e-8);
  }
}
