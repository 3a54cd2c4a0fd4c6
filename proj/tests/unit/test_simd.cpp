#include <cmath>
#include <random>
#include <vector>

#include "curvquad/simd/kernels.hpp"
#include "doctest.h"

using namespace curvquad::simd;

namespace {

std::vector<double> random_vec(std::mt19937& rng, std::size_t n) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> v(n);
  for (double& x : v) x = u(rng);
  return v;
}

}  // namespace

TEST_CASE("backend selection") {
  CHECK(std::string(scalar_kernels().name) == "scalar");
  const KernelTable& active = active_kernels();
  if (avx2_kernels() != nullptr && cpu_supports_avx2()) {
    set_kernel_backend("avx2");
    CHECK(std::string(active_kernels().name) == "avx2");
  }
  set_kernel_backend("scalar");
  CHECK(std::string(active_kernels().name) == "scalar");
  CHECK_THROWS(set_kernel_backend("sse9"));
  set_kernel_backend(active.name);
}

TEST_CASE("avx2 kernels match the scalar reference") {
  const KernelTable* v = avx2_kernels();
  if (v == nullptr || !cpu_supports_avx2()) {
    MESSAGE("AVX2 unavailable; equivalence not exercised");
    return;
  }
  const KernelTable& s = scalar_kernels();
  std::mt19937 rng(42);
  // odd sizes exercise the scalar tails
  for (std::size_t n : {1u, 3u, 4u, 7u, 8u, 13u, 64u, 257u}) {
    CAPTURE(n);
    auto px = random_vec(rng, n), py = random_vec(rng, n), wx = random_vec(rng, n), wy = random_vec(rng, n);
    // coincident point must give 0, not NaN
    const double xi = px[n / 2], yi = py[n / 2];
    std::vector<double> a(n), b(n);
    s.double_layer_row(xi, yi, px.data(), py.data(), wx.data(), wy.data(), a.data(), n);
    v->double_layer_row(xi, yi, px.data(), py.data(), wx.data(), wy.data(), b.data(), n);
    CHECK(a[n / 2] == 0.0);
    CHECK(b[n / 2] == 0.0);
    for (std::size_t j = 0; j < n; ++j) CHECK(a[j] == b[j]);  // no contraction: bitwise equal

    double sum_abs = 0.0;
    for (std::size_t j = 0; j < n; ++j) sum_abs += std::abs(px[j] * py[j]);
    CHECK(std::abs(s.dot(px.data(), py.data(), n) - v->dot(px.data(), py.data(), n)) <= 1e-15 * sum_abs + 1e-300);

    auto y1 = random_vec(rng, n);
    auto y2 = y1;
    s.axpy(0.37, px.data(), y1.data(), n);
    v->axpy(0.37, px.data(), y2.data(), n);
    for (std::size_t j = 0; j < n; ++j) CHECK(std::abs(y1[j] - y2[j]) <= 1e-15);

    const std::size_t rows = n + 2;
    auto mat = random_vec(rng, rows * n);
    std::vector<double> r1(rows), r2(rows);
    s.matvec(mat.data(), px.data(), r1.data(), rows, n);
    v->matvec(mat.data(), px.data(), r2.data(), rows, n);
    for (std::size_t i = 0; i < rows; ++i) CHECK(std::abs(r1[i] - r2[i]) <= 1e-14 * static_cast<double>(n));
  }
}
