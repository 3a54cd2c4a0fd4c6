// Built with -mavx2 -mfma -ffp-contract=off; only reached after a CPU check.
#include <immintrin.h>

#include "curvquad/simd/kernels.hpp"

namespace curvquad::simd {

namespace {

void double_layer_row(double xi, double yi, const double* px, const double* py, const double* wnx,
                      const double* wny, double* out, std::size_t n) {
  const __m256d vx = _mm256_set1_pd(xi);
  const __m256d vy = _mm256_set1_pd(yi);
  const __m256d zero = _mm256_setzero_pd();
  std::size_t j = 0;
  for (; j + 4 <= n; j += 4) {
    const __m256d dx = _mm256_sub_pd(vx, _mm256_loadu_pd(px + j));
    const __m256d dy = _mm256_sub_pd(vy, _mm256_loadu_pd(py + j));
    const __m256d r2 = _mm256_add_pd(_mm256_mul_pd(dx, dx), _mm256_mul_pd(dy, dy));
    const __m256d num =
        _mm256_add_pd(_mm256_mul_pd(dx, _mm256_loadu_pd(wnx + j)), _mm256_mul_pd(dy, _mm256_loadu_pd(wny + j)));
    const __m256d coincident = _mm256_cmp_pd(r2, zero, _CMP_EQ_OQ);
    // divide by 1 where r2 == 0, then mask to 0
    const __m256d safe = _mm256_blendv_pd(r2, _mm256_set1_pd(1.0), coincident);
    _mm256_storeu_pd(out + j, _mm256_blendv_pd(_mm256_div_pd(num, safe), zero, coincident));
  }
  for (; j < n; ++j) {
    const double dx = xi - px[j];
    const double dy = yi - py[j];
    const double r2 = dx * dx + dy * dy;
    out[j] = r2 == 0.0 ? 0.0 : (dx * wnx[j] + dy * wny[j]) / r2;
  }
}

double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

double dot(const double* a, const double* b, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
    acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i + 4), _mm256_loadu_pd(b + i + 4), acc1);
  }
  for (; i + 4 <= n; i += 4) acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
  double s = hsum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) s += a[i] * b[i];
  return s;
}

void matvec(const double* a, const double* x, double* y, std::size_t rows, std::size_t cols) {
  for (std::size_t i = 0; i < rows; ++i) y[i] = dot(a + i * cols, x, cols);
}

void axpy(double alpha, const double* x, double* y, std::size_t n) {
  const __m256d va = _mm256_set1_pd(alpha);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    _mm256_storeu_pd(y + i, _mm256_fmadd_pd(va, _mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i)));
  for (; i < n; ++i) y[i] += alpha * x[i];
}

constexpr KernelTable table{"avx2", double_layer_row, matvec, dot, axpy};

}  // namespace

const KernelTable* avx2_kernels() { return &table; }

}  // namespace curvquad::simd
