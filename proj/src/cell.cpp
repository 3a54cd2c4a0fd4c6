#include "curvquad/cell.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include "curvquad/error.hpp"
#include "curvquad/kress.hpp"

namespace curvquad {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};

struct ShapeEval {
  Vec2 x, dx, ddx;  // derivatives with respect to u in [0, 1]
};

ShapeEval eval_shape(const EdgeShape& shape, double u) {
  return std::visit(
      Overloaded{[u](const LineShape& s) {
                   const Vec2 d = s.p1 - s.p0;
                   return ShapeEval{s.p0 + u * d, d, {0.0, 0.0}};
                 },
                 [u](const ArcShape& s) {
                   const double span = s.theta1 - s.theta0;
                   const double th = s.theta0 + u * span;
                   const Vec2 radial{std::cos(th), std::sin(th)};
                   const Vec2 perp{-std::sin(th), std::cos(th)};
                   return ShapeEval{s.center + s.radius * radial, s.radius * span * perp,
                                    -s.radius * span * span * radial};
                 },
                 [u](const CurveShape& s) { return ShapeEval{s.x(u), s.dx(u), s.ddx(u)}; }},
      shape);
}

}  // namespace

EdgeParam::EdgeParam(EdgeShape shape, double a, double b) : shape_(std::move(shape)), a_(a), b_(b) {
  if (!(b > a)) throw DomainError("EdgeParam: empty parameter interval");
  if (const auto* c = std::get_if<CurveShape>(&shape_); c && (!c->x || !c->dx || !c->ddx))
    throw DomainError("EdgeParam: curve needs x, dx and ddx");
}

Vec2 EdgeParam::point(double t) const { return eval_shape(shape_, (t - a_) / (b_ - a_)).x; }

Vec2 EdgeParam::d1(double t) const { return eval_shape(shape_, (t - a_) / (b_ - a_)).dx / (b_ - a_); }

Vec2 EdgeParam::d2(double t) const {
  const double len = b_ - a_;
  return eval_shape(shape_, (t - a_) / len).ddx / (len * len);
}

double speed(const EdgeParam& e, double t) {
  const double s = norm(e.d1(t));
  if (s < 1e-14) throw GeometryError("edge parameterization is degenerate (|x'| < 1e-14)");
  return s;
}

Vec2 unit_tangent(const EdgeParam& e, double t) { return e.d1(t) / speed(e, t); }

Vec2 unit_normal(const EdgeParam& e, double t) { return rot_cw(unit_tangent(e, t)); }

double curvature(const EdgeParam& e, double t) {
  const Vec2 d1 = e.d1(t);
  const double s = speed(e, t);
  return cross(d1, e.d2(t)) / (s * s * s);
}

Cell::Cell(std::vector<EdgeShape> shapes, std::optional<Vec2> shift_point, std::string name)
    : name_(std::move(name)) {
  if (shapes.empty()) throw DomainError("Cell: no edges");
  const double len = kTwoPi / static_cast<double>(shapes.size());
  edges_.reserve(shapes.size());
  for (std::size_t i = 0; i < shapes.size(); ++i)
    edges_.emplace_back(std::move(shapes[i]), len * static_cast<double>(i), len * static_cast<double>(i + 1));
  shift_ = shift_point ? *shift_point : boundary_barycenter(*this);
}

namespace {

// Fixed Kress rule used for geometric moments (independent of any user grid).
struct Moments {
  double area = 0.0;
  double mx = 0.0;
  double my = 0.0;
  double perimeter = 0.0;
};

Moments boundary_moments(const std::vector<EdgeParam>& edges) {
  constexpr int m = 128;
  constexpr int sigma = 7;
  Moments mom;
  for (const auto& e : edges) {
    const double h = (e.b() - e.a()) / m;
    for (int k = 1; k < m; ++k) {
      const double tau = e.a() + k * h;
      const double t = kress_lambda(tau, e.a(), e.b(), sigma);
      const double w = h * kress_lambda_prime(tau, e.a(), e.b(), sigma);
      const Vec2 x = e.point(t);
      const Vec2 d = e.d1(t);
      // outward normal times |x'|
      const Vec2 nds = rot_cw(d);
      const double xn = dot(x, nds) * w;
      mom.area += 0.5 * xn;
      mom.mx += x.x * xn / 3.0;
      mom.my += x.y * xn / 3.0;
      mom.perimeter += norm(d) * w;
    }
  }
  return mom;
}

}  // namespace

Vec2 boundary_barycenter(const Cell& cell) {
  const Moments m = boundary_moments(cell.edges());
  if (std::abs(m.area) < 1e-300) throw GeometryError("cell has zero area");
  return {m.mx / m.area, m.my / m.area};
}

CellReport validate_cell(const Cell& cell) {
  CellReport rep;
  const auto& edges = cell.edges();
  const std::size_t E = edges.size();
  double scale = 0.0;
  for (const auto& e : edges) scale = std::max({scale, norm(e.start()), norm(e.end())});
  scale = std::max(scale, 1.0);

  for (std::size_t i = 0; i < E; ++i) {
    const double gap = norm(edges[i].end() - edges[(i + 1) % E].start());
    rep.closure_defect = std::max(rep.closure_defect, gap);
    if (gap > 1e-12 * scale) {
      std::ostringstream os;
      os << "edge " << i << " does not end where edge " << (i + 1) % E << " begins (gap " << gap << ")";
      rep.violations.push_back(os.str());
    }
  }
  for (std::size_t i = 0; i < E; ++i) {
    const auto& e = edges[i];
    bool degenerate = false;
    for (int k = 0; k <= 16 && !degenerate; ++k) {
      const double t = e.a() + (e.b() - e.a()) * k / 16.0;
      degenerate = norm(e.d1(t)) < 1e-14;
    }
    if (degenerate) rep.violations.push_back("edge " + std::to_string(i) + " has a degenerate parameterization");
  }
  if (rep.violations.empty()) {
    for (std::size_t i = 0; i < E; ++i) {
      const Vec2 t_in = unit_tangent(edges[i], edges[i].b());
      const Vec2 t_out = unit_tangent(edges[(i + 1) % E], edges[(i + 1) % E].a());
      if (dot(t_in, t_out) < -1.0 + 1e-12 && std::abs(cross(t_in, t_out)) < 1e-6)
        rep.violations.push_back("cusp at vertex " + std::to_string((i + 1) % E));
    }
  }
  const Moments m = boundary_moments(edges);
  rep.signed_area = m.area;
  rep.perimeter = m.perimeter;
  if (!(m.area > 0.0)) rep.violations.push_back("boundary is not counter-clockwise (signed area <= 0)");
  return rep;
}

Cell build_square() {
  const Vec2 z0{0, 0}, z1{1, 0}, z2{1, 1}, z3{0, 1};
  return Cell({LineShape{z0, z1}, LineShape{z1, z2}, LineShape{z2, z3}, LineShape{z3, z0}}, Vec2{0.5, 0.5},
              "square");
}

Cell build_circle() {
  const double pi = std::numbers::pi;
  return Cell({ArcShape{{0, 0}, 1.0, 0.0, pi}, ArcShape{{0, 0}, 1.0, pi, 2.0 * pi}}, Vec2{0.0, 0.0}, "circle");
}

Cell build_pacman(double mu) {
  if (!(mu > 0.5 && mu < 1.0)) throw DomainError("build_pacman: need 1/2 < mu < 1");
  const double angle = std::numbers::pi / mu;
  const Vec2 tip{std::cos(angle), std::sin(angle)};
  return Cell({LineShape{{0, 0}, {1, 0}}, ArcShape{{0, 0}, 1.0, 0.0, angle}, LineShape{tip, {0, 0}}}, Vec2{0.0, 0.0},
              "pacman");
}

Cell build_puzzle(double r, double b) {
  if (!(b > 0.0 && b < r)) throw DomainError("build_puzzle: need 0 < b < r");
  const double half_chord = std::sqrt(r * r - b * b);
  if (!(half_chord < 0.5)) throw DomainError("build_puzzle: arcs do not fit on the unit square");
  const double s = 0.5 - half_chord;  // straight-edge length
  const Vec2 z[12] = {{0, 0}, {s, 0}, {1 - s, 0}, {1, 0}, {1, s}, {1, 1 - s},
                      {1, 1}, {1 - s, 1}, {s, 1}, {0, 1}, {0, 1 - s}, {0, s}};
  auto arc = [r](Vec2 c, Vec2 p, Vec2 q, bool ccw) {
    double t0 = std::atan2(p.y - c.y, p.x - c.x);
    double t1 = std::atan2(q.y - c.y, q.x - c.x);
    if (ccw && t1 < t0) t1 += kTwoPi;
    if (!ccw && t1 > t0) t1 -= kTwoPi;
    return ArcShape{c, r, t0, t1};
  };
  // blanks (bottom, top) bend into the square clockwise; tabs (right, left) bulge out
  std::vector<EdgeShape> shapes = {
      LineShape{z[0], z[1]},  arc({0.5, b}, z[1], z[2], false),      LineShape{z[2], z[3]},
      LineShape{z[3], z[4]},  arc({1 + b, 0.5}, z[4], z[5], true),   LineShape{z[5], z[6]},
      LineShape{z[6], z[7]},  arc({0.5, 1 - b}, z[7], z[8], false),  LineShape{z[8], z[9]},
      LineShape{z[9], z[10]}, arc({-b, 0.5}, z[10], z[11], true),    LineShape{z[11], z[0]},
  };
  return Cell(std::move(shapes), Vec2{0.5, 0.5}, "puzzle");
}

Cell builtin_cell(const std::string& name) {
  if (name == "square") return build_square();
  if (name == "circle") return build_circle();
  if (name == "pacman") return build_pacman(4.0 / 7.0);
  if (name == "puzzle") return build_puzzle();
  throw DomainError("unknown built-in cell '" + name + "'");
}

Cell parse_cell(std::istream& in, const std::string& name) {
  std::vector<EdgeShape> shapes;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string kind;
    if (!(ls >> kind)) continue;
    auto fail = [&](const std::string& what) {
      throw DomainError("cell file line " + std::to_string(lineno) + ": " + what);
    };
    if (kind == "line") {
      LineShape s;
      if (!(ls >> s.p0.x >> s.p0.y >> s.p1.x >> s.p1.y)) fail("expected 'line x0 y0 x1 y1'");
      shapes.emplace_back(s);
    } else if (kind == "arc") {
      ArcShape s;
      if (!(ls >> s.center.x >> s.center.y >> s.radius >> s.theta0 >> s.theta1)) fail("expected 'arc cx cy r theta0 theta1'");
      if (!(s.radius > 0.0)) fail("arc radius must be positive");
      shapes.emplace_back(s);
    } else {
      fail("unknown record '" + kind + "'");
    }
    std::string extra;
    if (ls >> extra) fail("trailing tokens");
  }
  if (shapes.empty()) throw DomainError("cell file has no edges");
  return Cell(std::move(shapes), std::nullopt, name);
}

Cell load_cell_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DomainError("cannot open cell file '" + path + "'");
  return parse_cell(in, path);
}

}  // namespace curvquad
