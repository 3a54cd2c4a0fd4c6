#pragma once

#include <memory>
#include <utility>
#include <vector>

#include "curvquad/boundary_grid.hpp"
#include "curvquad/gmres.hpp"
#include "curvquad/vec2.hpp"

namespace curvquad {

/// Normal derivative (in y) of G(x,y) = -ln|x-y| / (2 pi). For x == y returns the smooth-arc
/// limit -kappa / (4 pi).
double kernel_dGdn(Vec2 x, Vec2 y, Vec2 n_y, double diag_curvature);

/// int_dK G(x_i, y) g(y) ds(y) at every node.
std::vector<double> single_layer_apply(const std::vector<double>& g, const BoundaryGrid& grid);
TraceSamples single_layer_apply(const TraceSamples& g);

struct SolveReport {
  int iterations = 0;
  double relative_residual = 0.0;
  /// int g ds before it was projected out.
  double compatibility_defect = 0.0;
};

struct NeumannOptions {
  GmresOptions gmres;
  /// |int g ds| above compat_rel_tol * (1 + ||g||_inf |dK|) is an error.
  double compat_rel_tol = 1e-8;
  /// Same test for data derived inside the library (conjugate and anti-Laplacian solves),
  /// whose defect is discretization error of an earlier step rather than a modelling error.
  double derived_compat_rel_tol = 1e-1;
};

enum class DataOrigin { user, derived };

/// Interior Neumann problem on one grid: given g = d(phi)/dn, returns the zero-mean trace of phi.
///
/// Collocates  int dG/dn(y) (phi(y) - phi(x)) ds(y) + int phi ds = int G g ds  at every node. The
/// subtracted phi(x) makes the integrand vanish at the collocation point, including at corners,
/// and the added mean term removes the constant null space. Matrices are assembled once.
class NeumannSolver {
 public:
  explicit NeumannSolver(GridPtr grid, NeumannOptions opt = {});

  /// Throws DomainError on a compatibility violation, SolverError if GMRES does not converge.
  std::vector<double> solve(std::vector<double> g, SolveReport* report = nullptr,
                            DataOrigin origin = DataOrigin::user) const;

  const GridPtr& grid() const { return grid_; }
  const NeumannOptions& options() const { return opt_; }
  const DenseMatrix& system_matrix() const { return a_; }
  const DenseMatrix& single_layer_matrix() const { return s_; }

 private:
  GridPtr grid_;
  NeumannOptions opt_;
  DenseMatrix a_;
  DenseMatrix s_;
};

DenseMatrix assemble_single_layer(const BoundaryGrid& grid);
DenseMatrix assemble_neumann_system(const BoundaryGrid& grid);

/// Solver shared between callers of the same grid and options (small LRU cache).
std::shared_ptr<const NeumannSolver> shared_neumann_solver(const GridPtr& grid, const NeumannOptions& opt = {});

std::pair<TraceSamples, SolveReport> solve_neumann(const TraceSamples& g, const NeumannOptions& opt = {});

/// Process-wide record of every Neumann solve.
struct SolveStats {
  long solves = 0;
  long failures = 0;
  int max_iterations = 0;
  double max_relative_residual = 0.0;
  /// max of |int g ds| / (1 + ||g||_inf |dK|) over derived data
  double max_derived_defect = 0.0;
};
SolveStats solve_stats();
void reset_solve_stats();

}  // namespace curvquad
