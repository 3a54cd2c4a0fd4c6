#pragma once

#include <cstddef>
#include <string_view>

namespace curvquad::simd {

/// Hot loops of the Nystrom assembly and GMRES. Every backend computes the same
/// quantities; only summation order (and fused multiply-add) may differ.
struct KernelTable {
  const char* name;

  /// out[j] = ((xi - px[j]) * wnx[j] + (yi - py[j]) * wny[j]) / |(xi,yi) - p_j|^2, and 0 where
  /// the distance vanishes.
  void (*double_layer_row)(double xi, double yi, const double* px, const double* py, const double* wnx,
                           const double* wny, double* out, std::size_t n);
  /// y = A x for row-major A (rows x cols).
  void (*matvec)(const double* a, const double* x, double* y, std::size_t rows, std::size_t cols);
  double (*dot)(const double* a, const double* b, std::size_t n);
  /// y += alpha x
  void (*axpy)(double alpha, const double* x, double* y, std::size_t n);
};

const KernelTable& scalar_kernels();
/// nullptr when the AVX2 translation unit was not built.
const KernelTable* avx2_kernels();
bool cpu_supports_avx2();

/// Backend in use. Chosen on first call: CURVQUAD_KERNELS=scalar|avx2|auto, default auto
/// (AVX2 when compiled in and supported by the CPU).
const KernelTable& active_kernels();
/// "scalar", "avx2" or "auto". Throws DomainError if the request cannot be honoured.
void set_kernel_backend(std::string_view name);

}  // namespace curvquad::simd
