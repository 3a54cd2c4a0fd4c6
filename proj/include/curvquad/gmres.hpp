#pragma once

#include <cstddef>
#include <vector>

namespace curvquad {

/// Row-major dense matrix.
struct DenseMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> data;

  DenseMatrix() = default;
  DenseMatrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, 0.0) {}

  double& operator()(std::size_t i, std::size_t j) { return data[i * cols + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data[i * cols + j]; }
  double* row(std::size_t i) { return data.data() + i * cols; }
  const double* row(std::size_t i) const { return data.data() + i * cols; }
};

std::vector<double> matvec(const DenseMatrix& a, const std::vector<double>& x);

struct GmresOptions {
  double tol = 1e-13;  // relative residual
  int max_iter = 300;
};

struct GmresResult {
  std::vector<double> x;
  int iterations = 0;
  /// ||b - A x|| / ||b|| recomputed from the returned x.
  double relative_residual = 0.0;
  bool converged = false;
};

/// Unrestarted GMRES with modified Gram-Schmidt and Givens rotations, zero initial guess.
GmresResult gmres(const DenseMatrix& a, const std::vector<double>& b, const GmresOptions& opt = {});

}  // namespace curvquad
