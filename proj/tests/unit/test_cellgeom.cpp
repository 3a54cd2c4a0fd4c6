#include <cmath>
#include <numbers>
#include <sstream>

#include "curvquad/cell.hpp"
#include "curvquad/error.hpp"
#include "doctest.h"

using namespace curvquad;

namespace {

constexpr double pi = std::numbers::pi;

// Closure: the chain of edge displacements sums to zero.
double closure_sum(const Cell& c) {
  Vec2 s{0, 0};
  for (const auto& e : c.edges()) s += e.end() - e.start();
  return norm(s);
}

double interior_angle(const Cell& c, std::size_t v) {
  const std::size_t E = c.num_edges();
  const EdgeParam& in = c.edge((v + E - 1) % E);
  const EdgeParam& out = c.edge(v);
  const Vec2 t_in = unit_tangent(in, in.b());
  const Vec2 t_out = unit_tangent(out, out.a());
  // turning angle, positive to the left
  return pi - std::atan2(cross(t_in, t_out), dot(t_in, t_out));
}

}  // namespace

TEST_CASE("frame on a circle") {
  const Cell c = build_circle();
  const EdgeParam& e = c.edge(0);
  const Vec2 n = unit_normal(e, e.a());
  CHECK(n.x == doctest::Approx(1.0));
  CHECK(std::abs(n.y) < 1e-15);
  const ArcShape arc{{0.2, -0.1}, 0.35, 0.0, 2.0};
  const EdgeParam small(arc, 0.0, 1.0);
  for (double t : {0.0, 0.3, 1.0}) CHECK(curvature(small, t) == doctest::Approx(1.0 / 0.35).epsilon(1e-13));
  const EdgeParam line(LineShape{{0, 0}, {2, 1}}, 0.0, 1.0);
  CHECK(curvature(line, 0.4) == 0.0);
}

TEST_CASE("degenerate edge") {
  const EdgeParam e(LineShape{{1, 1}, {1, 1}}, 0.0, 1.0);
  CHECK_THROWS_AS(speed(e, 0.5), GeometryError);
}

TEST_CASE("built-in cells are valid") {
  const double mu = 4.0 / 7.0;
  struct Case {
    Cell cell;
    double area;
  };
  const Case cases[] = {{build_square(), 1.0}, {build_circle(), pi}, {build_pacman(mu), pi / (2.0 * mu)},
                        {build_puzzle(), 1.0}};
  for (const auto& [cell, area] : cases) {
    CAPTURE(cell.name());
    const CellReport rep = validate_cell(cell);
    CHECK(rep.ok());
    CHECK(rep.signed_area == doctest::Approx(area).epsilon(1e-10));
    CHECK(closure_sum(cell) < 1e-12);
    CHECK(rep.closure_defect < 1e-12);
    for (const auto& e : cell.edges()) {
      for (int k = 0; k <= 8; ++k) {
        const double t = e.a() + (e.b() - e.a()) * k / 8.0;
        const Vec2 n = unit_normal(e, t);
        CHECK(std::abs(dot(n, unit_tangent(e, t))) < 1e-14);
        CHECK(std::abs(norm(n) - 1.0) < 1e-14);
      }
    }
  }
}

TEST_CASE("reversed square is rejected") {
  const Cell rev({LineShape{{0, 0}, {0, 1}}, LineShape{{0, 1}, {1, 1}}, LineShape{{1, 1}, {1, 0}},
                  LineShape{{1, 0}, {0, 0}}});
  const CellReport rep = validate_cell(rev);
  CHECK_FALSE(rep.ok());
  CHECK(rep.signed_area < 0.0);
}

TEST_CASE("open chain is rejected") {
  const Cell open({LineShape{{0, 0}, {1, 0}}, LineShape{{1, 0}, {1, 1}}, LineShape{{1, 1}, {0, 0.9}}, LineShape{{0, 1}, {0, 0}}},
                  Vec2{0.5, 0.5});
  CHECK_FALSE(validate_cell(open).ok());
}

TEST_CASE("pac-man") {
  const Cell c = build_pacman(4.0 / 7.0);
  CHECK(c.num_edges() == 3);
  CHECK(c.edge(1).is_arc());
  CHECK(c.shift_point() == Vec2{0, 0});
  CHECK(interior_angle(c, 0) == doctest::Approx(7.0 * pi / 4.0));
  CHECK_THROWS_AS(build_pacman(0.5), DomainError);
  CHECK_THROWS_AS(build_pacman(1.0), DomainError);
}

TEST_CASE("puzzle piece") {
  const double r = 0.22, b = 0.17;
  const Cell c = build_puzzle(r, b);
  CHECK(c.num_edges() == 12);
  int arcs = 0;
  for (const auto& e : c.edges()) arcs += e.is_arc();
  CHECK(arcs == 4);
  const double straight = 0.5 - std::sqrt(r * r - b * b);
  CHECK(straight == doctest::Approx(0.3604).epsilon(1e-4));
  CHECK(norm(c.vertex(1) - c.vertex(0)) == doctest::Approx(straight));
  // tab vertices on the right edge
  const double tab = 1.5 * pi + std::asin(b / r);
  CHECK(interior_angle(c, 4) == doctest::Approx(tab).epsilon(1e-12));
  CHECK(interior_angle(c, 5) == doctest::Approx(tab).epsilon(1e-12));
  CHECK(tab == doctest::Approx(pi / 0.5614).epsilon(1e-4));
  CHECK_THROWS_AS(build_puzzle(0.2, 0.2), DomainError);
  CHECK_THROWS_AS(build_puzzle(0.2, 0.0), DomainError);
}

TEST_CASE("barycenter") {
  const Vec2 b = boundary_barycenter(build_square());
  CHECK(b.x == doctest::Approx(0.5).epsilon(1e-13));
  CHECK(b.y == doctest::Approx(0.5).epsilon(1e-13));
  const Vec2 p = boundary_barycenter(build_puzzle());
  CHECK(p.x == doctest::Approx(0.5).epsilon(1e-10));
  CHECK(p.y == doctest::Approx(0.5).epsilon(1e-10));
}

TEST_CASE("cell file") {
  std::istringstream in(
      "# unit square\n"
      "line 0 0 1 0\n"
      "line 1 0 1 1\n"
      "line 1 1 0 1   # top\n"
      "line 0 1 0 0\n");
  const Cell c = parse_cell(in);
  CHECK(c.num_edges() == 4);
  CHECK(validate_cell(c).ok());
  CHECK(c.shift_point().x == doctest::Approx(0.5));

  std::istringstream arcs("arc 0 0 1 0 3.141592653589793\narc 0 0 1 3.141592653589793 6.283185307179586\n");
  CHECK(validate_cell(parse_cell(arcs)).signed_area == doctest::Approx(pi).epsilon(1e-10));

  std::istringstream bad("line 0 0 1\n");
  CHECK_THROWS_AS(parse_cell(bad), DomainError);
  std::istringstream unknown("spline 0 0 1 1\n");
  CHECK_THROWS_AS(parse_cell(unknown), DomainError);
}
