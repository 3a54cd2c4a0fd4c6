#include "curvquad/harmonic.hpp"

#include <fftw3.h>

#include <complex>
#include <future>
#include <map>
#include <mutex>

#include "curvquad/error.hpp"

namespace curvquad {

namespace {

// FFTW planning is not thread-safe; plans are created once per length under a lock and then
// executed through the new-array interface, which is.
struct PlanPair {
  fftw_plan forward;
  fftw_plan backward;
};

class PlanCache {
 public:
  ~PlanCache() {
    for (auto& [n, p] : plans_) {
      fftw_destroy_plan(p.forward);
      fftw_destroy_plan(p.backward);
    }
  }

  PlanPair get(int n) {
    std::lock_guard lock(mutex_);
    if (auto it = plans_.find(n); it != plans_.end()) return it->second;
    double* in = fftw_alloc_real(static_cast<std::size_t>(n));
    fftw_complex* out = fftw_alloc_complex(static_cast<std::size_t>(n / 2 + 1));
    PlanPair p{fftw_plan_dft_r2c_1d(n, in, out, FFTW_ESTIMATE), fftw_plan_dft_c2r_1d(n, out, in, FFTW_ESTIMATE)};
    fftw_free(in);
    fftw_free(out);
    return plans_.emplace(n, p).first->second;
  }

 private:
  std::mutex mutex_;
  std::map<int, PlanPair> plans_;
};

PlanCache& plan_cache() {
  static PlanCache cache;
  return cache;
}

std::vector<double> d_dtau(const std::vector<double>& f) {
  const int n = static_cast<int>(f.size());
  const PlanPair plans = plan_cache().get(n);
  double* buf = fftw_alloc_real(static_cast<std::size_t>(n));
  fftw_complex* spec = fftw_alloc_complex(static_cast<std::size_t>(n / 2 + 1));
  std::copy(f.begin(), f.end(), buf);
  fftw_execute_dft_r2c(plans.forward, buf, spec);
  for (int k = 0; k <= n / 2; ++k) {
    const bool nyquist = n % 2 == 0 && k == n / 2;
    const double re = spec[k][0];
    const double im = spec[k][1];
    // multiply by i k / n (c2r is unnormalized)
    const double s = nyquist ? 0.0 : static_cast<double>(k) / n;
    spec[k][0] = -im * s;
    spec[k][1] = re * s;
  }
  fftw_execute_dft_c2r(plans.backward, spec, buf);
  std::vector<double> out(buf, buf + n);
  fftw_free(buf);
  fftw_free(spec);
  return out;
}

void check_length(const std::vector<double>& f, const BoundaryGrid& grid, const char* who) {
  if (f.size() != grid.size()) throw DomainError(std::string(who) + ": length does not match grid");
}

}  // namespace

std::vector<double> tangential_derivative(const std::vector<double>& f, const BoundaryGrid& grid) {
  check_length(f, grid, "tangential_derivative");
  std::vector<double> d = d_dtau(f);
  const auto& dens = grid.dsdtau();
  for (std::size_t j = 0; j < d.size(); ++j) d[j] = dens[j] > 0.0 ? d[j] / dens[j] : 0.0;
  return d;
}

TraceSamples tangential_derivative(const TraceSamples& f) {
  if (!f.grid) throw DomainError("tangential_derivative: samples have no grid");
  return TraceSamples(f.grid, tangential_derivative(f.values, *f.grid), TraceKind::tangential_derivative);
}

std::vector<double> harmonic_conjugate(const std::vector<double>& f, const NeumannSolver& solver) {
  std::vector<double> g = tangential_derivative(f, *solver.grid());
  for (double& v : g) v = -v;
  return solver.solve(std::move(g), nullptr, DataOrigin::derived);
}

TraceSamples harmonic_conjugate(const TraceSamples& f, const NeumannOptions& opt) {
  if (!f.grid) throw DomainError("harmonic_conjugate: samples have no grid");
  if (f.kind != TraceKind::dirichlet) throw DomainError("harmonic_conjugate: expected Dirichlet data");
  return TraceSamples(f.grid, harmonic_conjugate(f.values, *shared_neumann_solver(f.grid, opt)), TraceKind::dirichlet);
}

std::vector<double> dirichlet_to_neumann(const std::vector<double>& f, const NeumannSolver& solver) {
  return tangential_derivative(harmonic_conjugate(f, solver), *solver.grid());
}

TraceSamples dirichlet_to_neumann(const TraceSamples& f, const NeumannOptions& opt) {
  if (!f.grid) throw DomainError("dirichlet_to_neumann: samples have no grid");
  if (f.kind != TraceKind::dirichlet) throw DomainError("dirichlet_to_neumann: expected Dirichlet data");
  return TraceSamples(f.grid, dirichlet_to_neumann(f.values, *shared_neumann_solver(f.grid, opt)), TraceKind::neumann);
}

HarmonicAntiLaplacian anti_laplacian_harmonic(const std::vector<double>& f, const std::vector<double>& phihat,
                                              const NeumannSolver& solver, Vec2 center, bool concurrent) {
  const BoundaryGrid& grid = *solver.grid();
  check_length(f, grid, "anti_laplacian_harmonic");
  check_length(phihat, grid, "anti_laplacian_harmonic");
  const std::size_t n = grid.size();
  const auto& x = grid.points();
  const auto& nrm = grid.normals();

  HarmonicAntiLaplacian out;
  out.center = center;
  out.phi = f;
  out.phihat = phihat;
  std::vector<double> g_rho(n), g_rhohat(n);
  for (std::size_t j = 0; j < n; ++j) {
    g_rho[j] = f[j] * nrm[j].x - phihat[j] * nrm[j].y;
    g_rhohat[j] = phihat[j] * nrm[j].x + f[j] * nrm[j].y;
  }
  if (concurrent) {
    auto fut = std::async(std::launch::async, [&] { return solver.solve(g_rhohat, nullptr, DataOrigin::derived); });
    out.rho = solver.solve(std::move(g_rho), nullptr, DataOrigin::derived);
    out.rhohat = fut.get();
  } else {
    out.rho = solver.solve(std::move(g_rho), nullptr, DataOrigin::derived);
    out.rhohat = solver.solve(std::move(g_rhohat), nullptr, DataOrigin::derived);
  }

  out.Phi.resize(n);
  out.dPhi_dn.resize(n);
  for (std::size_t j = 0; j < n; ++j) {
    const Vec2 d = x[j] - center;
    out.Phi[j] = 0.25 * (d.x * out.rho[j] + d.y * out.rhohat[j]);
    const double gx = out.rho[j] + d.x * f[j] + d.y * phihat[j];
    const double gy = out.rhohat[j] - d.x * phihat[j] + d.y * f[j];
    out.dPhi_dn[j] = 0.25 * (gx * nrm[j].x + gy * nrm[j].y);
  }
  return out;
}

HarmonicAntiLaplacian anti_laplacian_harmonic(const std::vector<double>& f, const NeumannSolver& solver,
                                              Vec2 center, bool concurrent) {
  return anti_laplacian_harmonic(f, harmonic_conjugate(f, solver), solver, center, concurrent);
}

HarmonicAntiLaplacian anti_laplacian_harmonic(const TraceSamples& f, const NeumannOptions& opt) {
  if (!f.grid) throw DomainError("anti_laplacian_harmonic: samples have no grid");
  return anti_laplacian_harmonic(f.values, *shared_neumann_solver(f.grid, opt), f.grid->cell().shift_point());
}

}  // namespace curvquad
