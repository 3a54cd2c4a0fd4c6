#pragma once

#include <vector>

#include "curvquad/boundary_grid.hpp"
#include "curvquad/nystrom.hpp"
#include "curvquad/vec2.hpp"

namespace curvquad {

/// d/dtau by trigonometric interpolation in the global 2 pi-periodic parameter (Nyquist mode
/// dropped), divided by ds/dtau. Zero at vertices, where ds/dtau = 0.
std::vector<double> tangential_derivative(const std::vector<double>& f, const BoundaryGrid& grid);
TraceSamples tangential_derivative(const TraceSamples& f);

/// Zero-mean trace of a harmonic conjugate: solves d(phihat)/dn = -d(phi)/dt.
std::vector<double> harmonic_conjugate(const std::vector<double>& f, const NeumannSolver& solver);
TraceSamples harmonic_conjugate(const TraceSamples& f, const NeumannOptions& opt = {});

/// d(phi)/dn = d(phihat)/dt.
std::vector<double> dirichlet_to_neumann(const std::vector<double>& f, const NeumannSolver& solver);
TraceSamples dirichlet_to_neumann(const TraceSamples& f, const NeumannOptions& opt = {});

/// Boundary data of Phi with Laplacian(Phi) = phi for harmonic phi:
/// Phi = ((x-z)_1 rho + (x-z)_2 rhohat) / 4 where rho, rhohat are harmonic conjugates with
/// d(rho)/dn = (phi, -phihat).n and d(rhohat)/dn = (phihat, phi).n.
struct HarmonicAntiLaplacian {
  Vec2 center;
  std::vector<double> phi;
  std::vector<double> phihat;
  std::vector<double> rho;
  std::vector<double> rhohat;
  std::vector<double> Phi;
  std::vector<double> dPhi_dn;
};

/// Runs the two independent rho/rhohat solves on separate threads when `concurrent`.
HarmonicAntiLaplacian anti_laplacian_harmonic(const std::vector<double>& f, const std::vector<double>& phihat,
                                              const NeumannSolver& solver, Vec2 center, bool concurrent = false);
HarmonicAntiLaplacian anti_laplacian_harmonic(const std::vector<double>& f, const NeumannSolver& solver,
                                              Vec2 center, bool concurrent = false);
/// Centered at the cell's shift point.
HarmonicAntiLaplacian anti_laplacian_harmonic(const TraceSamples& f, const NeumannOptions& opt = {});

}  // namespace curvquad
