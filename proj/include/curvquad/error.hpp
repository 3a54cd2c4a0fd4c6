#pragma once

#include <stdexcept>
#include <string>

namespace curvquad {

/// Base for all library errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid argument or violated precondition (bad index, parameter out of domain, mismatched grids).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Geometry that fails validation (open chain, wrong orientation, degenerate edge).
class GeometryError : public Error {
 public:
  using Error::Error;
};

/// Iterative solve failure or incompatible Neumann data.
class SolverError : public Error {
 public:
  using Error::Error;
};

}  // namespace curvquad
