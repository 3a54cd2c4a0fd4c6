#include "curvquad/vmspace.hpp"

#include <atomic>
#include <cmath>
#include <future>
#include <numbers>
#include <sstream>

#include "curvquad/anti_laplacian.hpp"
#include "curvquad/error.hpp"
#include "curvquad/poly_boundary.hpp"

namespace curvquad {

namespace {

std::atomic<std::uint64_t> next_function_id{1};

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};

bool trace_is_zero(const EdgeTrace& t) {
  if (std::holds_alternative<ZeroTrace>(t)) return true;
  if (const auto* p = std::get_if<Poly2>(&t)) return p->is_zero();
  return false;
}

double eval_trace(const EdgeTrace& t, std::size_t edge, Vec2 x) {
  return std::visit(Overloaded{[](const ZeroTrace&) { return 0.0; },
                               [x](const Poly2& p) { return poly_eval(p, x); },
                               [edge, x](const TraceSampler& s) { return s(edge, x); }},
                    t);
}

/// c + g . (x - z)
Poly2 affine(Vec2 z, double c, Vec2 g) {
  return Poly2::from_terms(z, {{{0, 0}, c}, {{1, 0}, g.x}, {{0, 1}, g.y}});
}

struct ChordTriangle {
  Poly2 lambda_a, lambda_b, lambda_c;
};

// Barycentric coordinates of A, B and the apex C of the equilateral triangle erected on the
// chord AB.
ChordTriangle chord_triangle(const EdgeParam& e, Vec2 z, ApexSide side) {
  const Vec2 a = e.start();
  const Vec2 b = e.end();
  const double sgn = side == ApexSide::outward ? 1.0 : -1.0;
  const Vec2 c = 0.5 * (a + b) + (sgn * std::sqrt(3.0) / 2.0) * rot_cw(b - a);
  const double det = cross(b - a, c - a);
  auto bary = [&](Vec2 p, Vec2 q) {
    // lambda with lambda(p) = lambda(q) = 0 and value 1 at the remaining corner
    return affine(z, cross(p - z, q - z) / det, Vec2{p.y - q.y, q.x - p.x} / det);
  };
  return {bary(b, c), bary(c, a), bary(a, b)};
}

Poly2 centered(const Poly2& p, Vec2 z) { return p.is_zero() ? Poly2(z) : recenter(p, z); }

std::vector<double> zeros_like(const BoundaryGrid& grid) { return std::vector<double>(grid.size(), 0.0); }

double weighted_sum(const std::vector<double>& a, const std::vector<double>& b, const BoundaryGrid& grid) {
  const auto& w = grid.weights();
  double s = 0.0;
  for (std::size_t j = 0; j < w.size(); ++j) s += w[j] * a[j] * b[j];
  return s;
}

}  // namespace

VmFunction::VmFunction(const Cell& cell, int m, Poly2 laplacian, std::vector<EdgeTrace> traces, std::string label)
    : m_(m),
      p_(centered(laplacian, cell.shift_point())),
      traces_(std::move(traces)),
      center_(cell.shift_point()),
      id_(next_function_id++),
      label_(std::move(label)) {
  const std::size_t ne = cell.num_edges();
  if (traces_.size() != ne) throw DomainError("VmFunction: need one trace per edge");
  zero_trace_ = true;
  sampled_ = false;
  for (const auto& t : traces_) {
    zero_trace_ = zero_trace_ && trace_is_zero(t);
    sampled_ = sampled_ || std::holds_alternative<TraceSampler>(t);
  }
  for (std::size_t i = 0; i < ne; ++i) vertices_.push_back(cell.vertex(i));
  for (std::size_t i = 0; i < ne; ++i) {
    const std::size_t prev = (i + ne - 1) % ne;
    const double left = eval_trace(traces_[prev], prev, cell.edge(prev).end());
    const double right = eval_trace(traces_[i], i, cell.vertex(i));
    if (std::abs(left - right) > 1e-10 * (1.0 + std::max(std::abs(left), std::abs(right)))) {
      std::ostringstream os;
      os << "VmFunction " << label_ << ": trace is discontinuous at vertex " << i << " (" << left << " vs "
         << right << ")";
      throw DomainError(os.str());
    }
  }
}

double VmFunction::trace_at(std::size_t edge, Vec2 x) const { return eval_trace(traces_.at(edge), edge, x); }

void VmFunction::require_same_cell(const BoundaryGrid& grid) const {
  const Cell& c = grid.cell();
  bool same = c.num_edges() == vertices_.size();
  for (std::size_t i = 0; same && i < vertices_.size(); ++i) same = norm(c.vertex(i) - vertices_[i]) <= 1e-12;
  if (!same) throw DomainError("VmFunction " + label_ + ": grid was built on a different cell");
}

std::vector<double> VmFunction::sample_trace(const BoundaryGrid& grid) const {
  require_same_cell(grid);
  std::vector<double> out(grid.size(), 0.0);
  if (zero_trace_) return out;
  const auto& x = grid.points();
  for (std::size_t j = 0; j < out.size(); ++j) {
    const std::size_t e = grid.edge_of(j);
    out[j] = eval_trace(traces_[e], e, x[j]);
  }
  return out;
}

VmFunction combine(const Cell& cell, const std::vector<std::pair<double, VmFunction>>& terms, std::string label) {
  const std::size_t ne = cell.num_edges();
  const Vec2 z = cell.shift_point();
  Poly2 p(z);
  int m = 0;
  std::vector<EdgeTrace> traces(ne, ZeroTrace{});
  for (const auto& [c, v] : terms) {
    if (v.traces().size() != ne) throw DomainError("combine: function lives on another cell");
    m = std::max(m, v.m());
    p += c * v.laplacian();
    for (std::size_t e = 0; e < ne; ++e) {
      const EdgeTrace& t = v.traces()[e];
      if (trace_is_zero(t) || c == 0.0) continue;
      EdgeTrace& acc = traces[e];
      const auto* tp = std::get_if<Poly2>(&t);
      if (tp && std::holds_alternative<ZeroTrace>(acc)) {
        acc = c * centered(*tp, z);
      } else if (tp && std::holds_alternative<Poly2>(acc)) {
        std::get<Poly2>(acc) += c * centered(*tp, z);
      } else {
        acc = TraceSampler([a = acc, t, c](std::size_t edge, Vec2 x) {
          return eval_trace(a, edge, x) + c * eval_trace(t, edge, x);
        });
      }
    }
  }
  return VmFunction(cell, m, p, std::move(traces), std::move(label));
}

VmFunction boundary_part(const Cell& cell, const VmFunction& v) {
  return VmFunction(cell, v.m(), Poly2(cell.shift_point()), v.traces(), v.label() + "[bd]");
}

VmFunction interior_part(const Cell& cell, const VmFunction& v) {
  return VmFunction(cell, v.m(), v.laplacian(), std::vector<EdgeTrace>(cell.num_edges(), ZeroTrace{}),
                    v.label() + "[int]");
}

VmFunction make_vertex_fn(const Cell& cell, std::size_t j, ApexSide side) {
  const std::size_t ne = cell.num_edges();
  if (j >= ne) throw DomainError("make_vertex_fn: vertex index out of range");
  const Vec2 z = cell.shift_point();
  std::vector<EdgeTrace> traces(ne, ZeroTrace{});
  traces[j] = chord_triangle(cell.edge(j), z, side).lambda_a;
  const std::size_t prev = (j + ne - 1) % ne;
  traces[prev] = chord_triangle(cell.edge(prev), z, side).lambda_b;
  return VmFunction(cell, 1, Poly2(z), std::move(traces), "v" + std::to_string(j));
}

VmFunction make_edge_fn_product(const Cell& cell, std::size_t j, ApexSide side) {
  const std::size_t ne = cell.num_edges();
  if (j >= ne) throw DomainError("make_edge_fn_product: index out of range");
  const VmFunction a = make_vertex_fn(cell, j, side);
  const VmFunction b = make_vertex_fn(cell, (j + 1) % ne, side);
  std::vector<EdgeTrace> traces(ne, ZeroTrace{});
  for (std::size_t e = 0; e < ne; ++e) {
    if (trace_is_zero(a.traces()[e]) || trace_is_zero(b.traces()[e])) continue;
    traces[e] = std::get<Poly2>(a.traces()[e]) * std::get<Poly2>(b.traces()[e]);
  }
  return VmFunction(cell, 2, Poly2(cell.shift_point()), std::move(traces), "w" + std::to_string(j));
}

VmFunction make_arc_linear_fn(const Cell& cell, std::size_t edge, ApexSide side) {
  if (edge >= cell.num_edges()) throw DomainError("make_arc_linear_fn: edge index out of range");
  if (!cell.edge(edge).is_arc()) throw DomainError("make_arc_linear_fn: edge " + std::to_string(edge) + " is not an arc");
  std::vector<EdgeTrace> traces(cell.num_edges(), ZeroTrace{});
  traces[edge] = chord_triangle(cell.edge(edge), cell.shift_point(), side).lambda_c;
  return VmFunction(cell, 1, Poly2(cell.shift_point()), std::move(traces), "u[e" + std::to_string(edge) + "]");
}

VmFunction make_bubble(const Cell& cell, const Poly2& p) {
  return VmFunction(cell, std::max(p.degree(), 0) + 2, p, std::vector<EdgeTrace>(cell.num_edges(), ZeroTrace{}),
                    "bubble");
}

VmFunction make_bubble(const Cell& cell) { return make_bubble(cell, Poly2::constant(cell.shift_point(), -1.0)); }

VmFunction make_poly_trace_fn(const Cell& cell, const Poly2& u, std::string label) {
  const Poly2 uz = centered(u, cell.shift_point());
  return VmFunction(cell, std::max(uz.degree(), 0), Poly2(cell.shift_point()),
                    std::vector<EdgeTrace>(cell.num_edges(), uz), std::move(label));
}

VmFunction make_poly_fn(const Cell& cell, const Poly2& u, std::string label) {
  const Poly2 uz = centered(u, cell.shift_point());
  return VmFunction(cell, std::max(uz.degree(), 0), poly_laplacian(uz), std::vector<EdgeTrace>(cell.num_edges(), uz),
                    std::move(label));
}

VmFunction make_sampled_fn(const Cell& cell, TraceSampler f, std::string label) {
  return VmFunction(cell, 1, Poly2(cell.shift_point()), std::vector<EdgeTrace>(cell.num_edges(), std::move(f)),
                    std::move(label));
}

VmFunction make_pacman_singular(const Cell& cell, double nu) {
  if (!(nu > 0.0)) throw DomainError("make_pacman_singular: nu must be positive");
  auto f = [nu](std::size_t, Vec2 x) {
    const double r = norm(x);
    if (r == 0.0) return 0.0;
    double th = std::atan2(x.y, x.x);
    // points on the first ray may come out as -0 or -1e-17
    if (th < -1e-12) th += 2.0 * std::numbers::pi;
    th = std::max(th, 0.0);
    return std::pow(r, nu) * std::sin(nu * th);
  };
  std::ostringstream label;
  label << "r^" << nu << " sin";
  return make_sampled_fn(cell, f, label.str());
}

VmFunction make_pacman_bubble(const Cell& cell, double mu) {
  const Vec2 o{0.0, 0.0};
  const double c = std::cos(std::numbers::pi / mu);
  const double s = std::sin(std::numbers::pi / mu);
  const Poly2 radial = Poly2::from_terms(o, {{{0, 0}, 1.0}, {{2, 0}, -1.0}, {{0, 2}, -1.0}});
  const Poly2 angular = Poly2::from_terms(o, {{{0, 2}, c}, {{1, 1}, -s}});
  const Poly2 v3 = radial * angular;
  return VmFunction(cell, 6, poly_laplacian(v3), std::vector<EdgeTrace>(cell.num_edges(), ZeroTrace{}),
                    "pacman-bubble");
}

std::vector<double> FunctionPack::fmP() const {
  std::vector<double> out(f.size());
  for (std::size_t j = 0; j < out.size(); ++j) out[j] = f[j] - P_trace[j];
  return out;
}

std::vector<double> FunctionPack::dn_fmP() const {
  std::vector<double> out(f.size());
  for (std::size_t j = 0; j < out.size(); ++j) out[j] = dtn_f[j] + dtn_mP[j];
  return out;
}

std::vector<double> FunctionPack::dn_interior() const {
  std::vector<double> out(f.size());
  for (std::size_t j = 0; j < out.size(); ++j) out[j] = dtn_mP[j] + P_dn[j];
  return out;
}

struct QuadratureContext::Entry {
  std::once_flag pack_once;
  std::once_flag anti_once;
  FunctionPack pack;
  HarmonicAntiLaplacian anti;
};

QuadratureContext::QuadratureContext(GridPtr grid, NeumannOptions opt, bool concurrent)
    : grid_(std::move(grid)), solver_(shared_neumann_solver(grid_, opt)), concurrent_(concurrent) {}

QuadratureContext::Entry& QuadratureContext::entry(const VmFunction& v) const {
  v.require_same_cell(*grid_);
  std::lock_guard lock(mutex_);
  auto& slot = cache_[v.id()];
  if (!slot) slot = std::make_shared<Entry>();
  return *slot;
}

const FunctionPack& QuadratureContext::pack(const VmFunction& v) const {
  Entry& e = entry(v);
  std::call_once(e.pack_once, [&] {
    const BoundaryGrid& g = *grid_;
    FunctionPack pk;
    pk.P = anti_laplacian_poly(v.laplacian());
    pk.Pstar = anti_laplacian_poly(pk.P);
    pk.f = v.sample_trace(g);
    pk.P_trace = sample_poly(pk.P, g);
    pk.P_dn = sample_poly_normal_derivative(pk.P, g);
    pk.Pstar_trace = sample_poly(pk.Pstar, g);
    pk.Pstar_dn = sample_poly_normal_derivative(pk.Pstar, g);

    auto conj_f = [&] { return v.has_zero_trace() ? zeros_like(g) : harmonic_conjugate(pk.f, *solver_); };
    auto conj_mP = [&] {
      if (v.is_harmonic()) return zeros_like(g);
      std::vector<double> mp = pk.P_trace;
      for (double& x : mp) x = -x;
      return harmonic_conjugate(mp, *solver_);
    };
    std::vector<double> hf, hp;
    if (concurrent_ && !v.has_zero_trace() && !v.is_harmonic()) {
      auto fut = std::async(std::launch::async, conj_mP);
      hf = conj_f();
      hp = fut.get();
    } else {
      hf = conj_f();
      hp = conj_mP();
    }
    pk.dt_f = v.has_zero_trace() ? zeros_like(g) : tangential_derivative(pk.f, g);
    pk.dtn_f = tangential_derivative(hf, g);
    pk.dtn_mP = tangential_derivative(hp, g);
    pk.phihat.resize(g.size());
    for (std::size_t j = 0; j < g.size(); ++j) pk.phihat[j] = hf[j] + hp[j];
    pk.conj_f = std::move(hf);
    e.pack = std::move(pk);
  });
  return e.pack;
}

const HarmonicAntiLaplacian& QuadratureContext::harmonic_anti_laplacian(const VmFunction& v) const {
  const FunctionPack& pk = pack(v);
  Entry& e = entry(v);
  std::call_once(e.anti_once, [&] {
    e.anti = anti_laplacian_harmonic(pk.fmP(), pk.phihat, *solver_, grid_->cell().shift_point(), concurrent_);
  });
  return e.anti;
}

bool canonical_first(const VmFunction& v, const VmFunction& w) {
  // zero traces, then polynomial traces, then sampled ones
  auto rank = [](const VmFunction& u) { return u.has_zero_trace() ? 0 : u.has_sampled_trace() ? 2 : 1; };
  if (rank(v) != rank(w)) return rank(v) < rank(w);
  return v.id() <= w.id();
}

double h1_product(const VmFunction& v, const VmFunction& w, const QuadratureContext& ctx) {
  // harmonic functions are H1-orthogonal to zero-trace functions
  if ((v.is_harmonic() && w.has_zero_trace()) || (v.has_zero_trace() && w.is_harmonic())) return 0.0;
  if (!canonical_first(v, w)) return h1_product(w, v, ctx);
  const BoundaryGrid& g = *ctx.grid();
  const FunctionPack& pv = ctx.pack(v);
  const FunctionPack& pw = ctx.pack(w);
  double s = 0.0;
  // int f dg/dn = -int df/dt conj(g): one spectral derivative instead of two
  if (!v.has_zero_trace() && !w.has_zero_trace()) s -= weighted_sum(pv.dt_f, pw.conj_f, g);
  if (!v.is_harmonic() && !w.is_harmonic()) {
    s += weighted_sum(pv.dn_interior(), pw.P_trace, g);
    s -= poly_volume_integral(v.laplacian() * pw.P, g.cell(), g);
  }
  return s;
}

double h1_product(const VmFunction& v, const VmFunction& w, const GridPtr& grid) {
  if ((v.is_harmonic() && w.has_zero_trace()) || (v.has_zero_trace() && w.is_harmonic())) return 0.0;
  return h1_product(v, w, QuadratureContext(grid));
}

double l2_product(const VmFunction& v, const VmFunction& w, const QuadratureContext& ctx) {
  // Phi is built from the first argument; singular sampled data are better left to the DtN side
  if (!canonical_first(v, w)) return l2_product(w, v, ctx);
  const BoundaryGrid& g = *ctx.grid();
  const FunctionPack& pv = ctx.pack(v);
  const FunctionPack& pw = ctx.pack(w);
  const HarmonicAntiLaplacian& phi = ctx.harmonic_anti_laplacian(v);
  const std::vector<double> fmp = pv.fmP();
  const std::vector<double> gmq = pw.fmP();
  const std::vector<double> dv = pv.dn_fmP();
  const std::vector<double> dw = pw.dn_fmP();
  // int Q* d(v - P)/dn = -int dQ*/dt conj(v - P) puts the derivative on exact samples; the
  // conjugate of a singular sampled trace is less accurate than its derivative, so keep those
  auto star_term = [&](const FunctionPack& star, const VmFunction& u, const FunctionPack& pu,
                       const std::vector<double>& du) {
    if (u.has_sampled_trace()) return -weighted_sum(star.Pstar_trace, du, g);
    return weighted_sum(tangential_derivative(star.Pstar_trace, g), pu.phihat, g);
  };
  double s = weighted_sum(phi.dPhi_dn, gmq, g) - weighted_sum(phi.Phi, dw, g);
  if (!w.is_harmonic()) s += weighted_sum(pw.Pstar_dn, fmp, g) + star_term(pw, v, pv, dv);
  if (!v.is_harmonic()) {
    s += weighted_sum(pv.Pstar_dn, gmq, g) + star_term(pv, w, pw, dw);
    if (!w.is_harmonic()) s += poly_volume_integral(pv.P * pw.P, g.cell(), g);
  }
  return s;
}

double l2_product(const VmFunction& v, const VmFunction& w, const GridPtr& grid) {
  return l2_product(v, w, QuadratureContext(grid));
}

double l2_product(const VmFunction& v, const Poly2& r, const QuadratureContext& ctx) {
  const BoundaryGrid& g = *ctx.grid();
  const FunctionPack& pv = ctx.pack(v);
  const Poly2 R = anti_laplacian_poly(centered(r, g.cell().shift_point()));
  const std::vector<double> rt = sample_poly(R, g);
  const std::vector<double> rdn = sample_poly_normal_derivative(R, g);
  double s = weighted_sum(pv.fmP(), rdn, g) - weighted_sum(rt, pv.dn_fmP(), g);
  if (!v.is_harmonic()) s += poly_volume_integral(pv.P * centered(r, g.cell().shift_point()), g.cell(), g);
  return s;
}

LocalMatrix assemble_local_matrix(const std::vector<VmFunction>& basis, const QuadratureContext& ctx,
                                  ProductKind kind) {
  LocalMatrix out;
  out.kind = kind;
  out.size = basis.size();
  out.entries.assign(out.size * out.size, 0.0);
  for (const auto& v : basis) out.labels.push_back(v.label());
  for (std::size_t i = 0; i < out.size; ++i)
    for (std::size_t j = 0; j < out.size; ++j)
      out.entries[i * out.size + j] = kind == ProductKind::mass ? l2_product(basis[i], basis[j], ctx)
                                                                : h1_product(basis[i], basis[j], ctx);
  for (std::size_t i = 0; i < out.size; ++i)
    for (std::size_t j = i + 1; j < out.size; ++j) {
      double& a = out.entries[i * out.size + j];
      double& b = out.entries[j * out.size + i];
      out.raw_asymmetry = std::max(out.raw_asymmetry, std::abs(a - b) / (1.0 + std::abs(a)));
      a = b = 0.5 * (a + b);
    }
  return out;
}

}  // namespace curvquad
