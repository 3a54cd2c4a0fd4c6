#include "curvquad/simd/kernels.hpp"

namespace curvquad::simd {

namespace {

void double_layer_row(double xi, double yi, const double* px, const double* py, const double* wnx,
                      const double* wny, double* out, std::size_t n) {
  for (std::size_t j = 0; j < n; ++j) {
    const double dx = xi - px[j];
    const double dy = yi - py[j];
    const double r2 = dx * dx + dy * dy;
    out[j] = r2 == 0.0 ? 0.0 : (dx * wnx[j] + dy * wny[j]) / r2;
  }
}

double dot(const double* a, const double* b, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i];
  return s;
}

void matvec(const double* a, const double* x, double* y, std::size_t rows, std::size_t cols) {
  for (std::size_t i = 0; i < rows; ++i) y[i] = dot(a + i * cols, x, cols);
}

void axpy(double alpha, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

constexpr KernelTable table{"scalar", double_layer_row, matvec, dot, axpy};

}  // namespace

const KernelTable& scalar_kernels() { return table; }

}  // namespace curvquad::simd
