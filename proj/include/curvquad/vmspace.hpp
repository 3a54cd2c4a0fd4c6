#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <variant>
#include <vector>

#include "curvquad/boundary_grid.hpp"
#include "curvquad/cell.hpp"
#include "curvquad/harmonic.hpp"
#include "curvquad/nystrom.hpp"
#include "curvquad/poly2.hpp"

namespace curvquad {

struct ZeroTrace {};
/// Closed-form Dirichlet data on one edge: (edge index, point) -> value.
using TraceSampler = std::function<double(std::size_t, Vec2)>;
using EdgeTrace = std::variant<ZeroTrace, Poly2, TraceSampler>;

/// A member of V_m(K), given by its Laplacian p and its Dirichlet trace edge by edge.
///
/// Copies share the identity used for caching boundary data, so a VmFunction must not be
/// mutated after construction (it has no mutators).
class VmFunction {
 public:
  /// Throws DomainError if the number of traces differs from the number of edges or the
  /// traces disagree at a vertex. p is re-expanded about the cell's shift point.
  VmFunction(const Cell& cell, int m, Poly2 laplacian, std::vector<EdgeTrace> traces, std::string label = {});

  int m() const { return m_; }
  const Poly2& laplacian() const { return p_; }
  const std::vector<EdgeTrace>& traces() const { return traces_; }
  bool is_harmonic() const { return p_.is_zero(); }
  bool has_zero_trace() const { return zero_trace_; }
  /// Some edge carries a closed-form sampler instead of a polynomial.
  bool has_sampled_trace() const { return sampled_; }
  std::uint64_t id() const { return id_; }
  const std::string& label() const { return label_; }
  const std::vector<Vec2>& vertices() const { return vertices_; }
  Vec2 center() const { return center_; }

  double trace_at(std::size_t edge, Vec2 x) const;
  /// Dirichlet trace at every grid node. Throws DomainError if the grid is on another cell.
  std::vector<double> sample_trace(const BoundaryGrid& grid) const;
  void require_same_cell(const BoundaryGrid& grid) const;

 private:
  int m_;
  Poly2 p_;
  std::vector<EdgeTrace> traces_;
  std::vector<Vec2> vertices_;
  Vec2 center_;
  bool zero_trace_;
  bool sampled_;
  std::uint64_t id_;
  std::string label_;
};

/// sum c_i v_i, with fresh identity. All terms must live on the same cell.
VmFunction combine(const Cell& cell, const std::vector<std::pair<double, VmFunction>>& terms, std::string label = {});

/// Harmonic part (trace of v, zero Laplacian) and zero-trace part (Laplacian of v).
VmFunction boundary_part(const Cell& cell, const VmFunction& v);
VmFunction interior_part(const Cell& cell, const VmFunction& v);

/// Side of the chord AB on which the apex C of the equilateral triangle A, B, C is placed.
/// With `outward`, lambda_C is positive on arcs bulging out of the cell (tabs) and negative on
/// arcs bulging in (blanks); `inward` flips both signs and changes lambda_A, lambda_B on arcs.
enum class ApexSide { outward, inward };

/// Harmonic, linear on every edge, v(z_i) = delta_ij. On an edge from A to B the linear
/// functions are the barycentric coordinates of the triangle A, B, C (on straight edges this
/// is plain linear interpolation, whatever the side).
VmFunction make_vertex_fn(const Cell& cell, std::size_t j, ApexSide side = ApexSide::outward);
/// Harmonic with trace v_j v_{j+1}.
VmFunction make_edge_fn_product(const Cell& cell, std::size_t j, ApexSide side = ApexSide::outward);
/// Harmonic, trace lambda_C on the given arc and zero elsewhere. Throws DomainError for a
/// non-arc edge.
VmFunction make_arc_linear_fn(const Cell& cell, std::size_t edge, ApexSide side = ApexSide::outward);
/// Zero trace, Laplacian p.
VmFunction make_bubble(const Cell& cell, const Poly2& p);
/// Zero trace, Laplacian -1.
VmFunction make_bubble(const Cell& cell);
/// Harmonic with the trace of a polynomial u on every edge; add a Laplacian to get u itself.
VmFunction make_poly_trace_fn(const Cell& cell, const Poly2& u, std::string label = {});
/// The polynomial u as a member of V_m(K): trace u and Laplacian of u.
VmFunction make_poly_fn(const Cell& cell, const Poly2& u, std::string label = {});
/// Harmonic with an arbitrary closed-form trace.
VmFunction make_sampled_fn(const Cell& cell, TraceSampler f, std::string label = {});

/// r^nu sin(nu theta), theta in [0, 2 pi), about the origin.
VmFunction make_pacman_singular(const Cell& cell, double nu);
/// (1 - r^2) r^2 sin(theta) sin(theta - pi/mu): zero trace on the sector of angle pi/mu.
VmFunction make_pacman_bubble(const Cell& cell, double mu);

/// Boundary data of one function on one grid, computed once and shared across pairs.
struct FunctionPack {
  Poly2 P;
  Poly2 Pstar;
  std::vector<double> f;
  std::vector<double> P_trace;
  std::vector<double> P_dn;
  std::vector<double> Pstar_trace;
  std::vector<double> Pstar_dn;
  /// Tangential derivative of f and the zero-mean conjugate of the harmonic function with trace f.
  std::vector<double> dt_f;
  std::vector<double> conj_f;
  /// d/dn of the harmonic function with trace f.
  std::vector<double> dtn_f;
  /// d/dn of the harmonic function with trace -P.
  std::vector<double> dtn_mP;
  /// Conjugate of f - P.
  std::vector<double> phihat;

  std::vector<double> fmP() const;
  /// d(v - P)/dn.
  std::vector<double> dn_fmP() const;
  /// d(v_K)/dn of the zero-trace part.
  std::vector<double> dn_interior() const;
};

enum class ProductKind { mass, stiffness };

/// Grid, Neumann solver and the per-function caches for one cell discretization.
/// Safe to use from several threads; concurrent population of a cache entry computes it once.
class QuadratureContext {
 public:
  explicit QuadratureContext(GridPtr grid, NeumannOptions opt = {}, bool concurrent = false);

  const GridPtr& grid() const { return grid_; }
  const NeumannSolver& solver() const { return *solver_; }

  const FunctionPack& pack(const VmFunction& v) const;
  /// Anti-Laplacian of the harmonic function v - P.
  const HarmonicAntiLaplacian& harmonic_anti_laplacian(const VmFunction& v) const;

 private:
  struct Entry;
  Entry& entry(const VmFunction& v) const;

  GridPtr grid_;
  std::shared_ptr<const NeumannSolver> solver_;
  bool concurrent_;
  mutable std::mutex mutex_;
  mutable std::map<std::uint64_t, std::shared_ptr<Entry>> cache_;
};

/// Both products are evaluated with the arguments in a canonical order (zero traces, then
/// polynomial traces, then sampled ones, then creation order), so they are exactly symmetric.
bool canonical_first(const VmFunction& v, const VmFunction& w);

/// int_K grad v . grad w dx. Pairs of a harmonic function and a zero-trace function return
/// 0.0 without touching the grid.
double h1_product(const VmFunction& v, const VmFunction& w, const QuadratureContext& ctx);
double h1_product(const VmFunction& v, const VmFunction& w, const GridPtr& grid);

/// int_K v w dx.
double l2_product(const VmFunction& v, const VmFunction& w, const QuadratureContext& ctx);
double l2_product(const VmFunction& v, const VmFunction& w, const GridPtr& grid);
/// int_K v r dx for a polynomial r.
double l2_product(const VmFunction& v, const Poly2& r, const QuadratureContext& ctx);

struct LocalMatrix {
  std::vector<std::string> labels;
  ProductKind kind = ProductKind::mass;
  std::size_t size = 0;
  std::vector<double> entries;
  /// max |a_ij - a_ji| / (1 + |a_ij|) before symmetrizing.
  double raw_asymmetry = 0.0;

  double operator()(std::size_t i, std::size_t j) const { return entries[i * size + j]; }
};

/// Computes every ordered pair, then symmetrizes.
LocalMatrix assemble_local_matrix(const std::vector<VmFunction>& basis, const QuadratureContext& ctx,
                                  ProductKind kind);

}  // namespace curvquad
