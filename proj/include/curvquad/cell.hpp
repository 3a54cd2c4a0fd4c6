#pragma once

#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "curvquad/vec2.hpp"

namespace curvquad {

/// Straight segment from p0 to p1.
struct LineShape {
  Vec2 p0;
  Vec2 p1;
};

/// Circular arc; counter-clockwise about `center` when theta1 > theta0, clockwise otherwise.
struct ArcShape {
  Vec2 center;
  double radius = 1.0;
  double theta0 = 0.0;
  double theta1 = 0.0;
};

/// Arbitrary smooth curve on u in [0, 1] with analytic first and second derivatives (in u).
struct CurveShape {
  std::function<Vec2(double)> x;
  std::function<Vec2(double)> dx;
  std::function<Vec2(double)> ddx;
};

using EdgeShape = std::variant<LineShape, ArcShape, CurveShape>;

/// A smooth edge parameterized over [a, b] of the global boundary parameter.
class EdgeParam {
 public:
  EdgeParam(EdgeShape shape, double a, double b);

  double a() const { return a_; }
  double b() const { return b_; }
  const EdgeShape& shape() const { return shape_; }
  bool is_line() const { return std::holds_alternative<LineShape>(shape_); }
  bool is_arc() const { return std::holds_alternative<ArcShape>(shape_); }

  Vec2 point(double t) const;
  Vec2 d1(double t) const;
  Vec2 d2(double t) const;
  Vec2 start() const { return point(a_); }
  Vec2 end() const { return point(b_); }

 private:
  EdgeShape shape_;
  double a_;
  double b_;
};

/// |x'(t)|; throws GeometryError below 1e-14.
double speed(const EdgeParam& e, double t);
/// x'/|x'|, the counter-clockwise tangent.
Vec2 unit_tangent(const EdgeParam& e, double t);
/// Tangent rotated by -pi/2 (outward for a counter-clockwise boundary).
Vec2 unit_normal(const EdgeParam& e, double t);
/// Signed curvature, positive when turning left.
double curvature(const EdgeParam& e, double t);

/// Curvilinear polygon: a closed counter-clockwise chain of smooth edges.
///
/// Edge i occupies [2 pi i / E, 2 pi (i+1) / E] of the global parameter so the whole
/// boundary is one 2 pi-periodic interval. Vertex i is the start of edge i.
class Cell {
 public:
  /// shift_point defaults to the barycenter.
  explicit Cell(std::vector<EdgeShape> shapes, std::optional<Vec2> shift_point = std::nullopt,
                std::string name = "custom");

  const std::vector<EdgeParam>& edges() const { return edges_; }
  std::size_t num_edges() const { return edges_.size(); }
  const EdgeParam& edge(std::size_t i) const { return edges_.at(i); }
  Vec2 vertex(std::size_t i) const { return edges_.at(i).start(); }
  Vec2 shift_point() const { return shift_; }
  const std::string& name() const { return name_; }

 private:
  std::vector<EdgeParam> edges_;
  Vec2 shift_;
  std::string name_;
};

struct CellReport {
  std::vector<std::string> violations;
  double signed_area = 0.0;
  double closure_defect = 0.0;
  double perimeter = 0.0;

  bool ok() const { return violations.empty(); }
};

/// Checks closure, edge regularity, cusps and counter-clockwise orientation (signed area
/// from the boundary). Never throws for geometric defects.
CellReport validate_cell(const Cell& cell);

/// Area-weighted centroid computed from boundary integrals.
Vec2 boundary_barycenter(const Cell& cell);

Cell build_square();
/// Unit circle as two half-circle arcs with vertices at (1,0) and (-1,0).
Cell build_circle();
/// Sector {0 < r < 1, 0 < theta < pi/mu}; requires 1/2 < mu < 1. Shift point is the apex.
Cell build_pacman(double mu);
/// Unit square with blanks on bottom/top and tabs on right/left; requires 0 < b < r < 1/2.
Cell build_puzzle(double r = 0.22, double b = 0.17);

/// Built-in cell by name: square, circle, pacman, puzzle.
Cell builtin_cell(const std::string& name);

/// Parses records `line x0 y0 x1 y1` / `arc cx cy r theta0 theta1`, one per line in
/// counter-clockwise order; '#' starts a comment.
Cell parse_cell(std::istream& in, const std::string& name = "custom");
Cell load_cell_file(const std::string& path);

}  // namespace curvquad
