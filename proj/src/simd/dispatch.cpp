#include <atomic>
#include <cstdlib>
#include <string>

#include "curvquad/error.hpp"
#include "curvquad/simd/kernels.hpp"

namespace curvquad::simd {

#ifndef CURVQUAD_HAVE_AVX2
const KernelTable* avx2_kernels() { return nullptr; }
#endif

bool cpu_supports_avx2() {
#if defined(__x86_64__) || defined(__i386__)
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

namespace {

const KernelTable* resolve(std::string_view name) {
  if (name == "scalar") return &scalar_kernels();
  if (name == "avx2") {
    if (avx2_kernels() == nullptr) throw DomainError("AVX2 kernels were not compiled in");
    if (!cpu_supports_avx2()) throw DomainError("CPU does not support AVX2/FMA");
    return avx2_kernels();
  }
  if (name == "auto" || name.empty())
    return (avx2_kernels() != nullptr && cpu_supports_avx2()) ? avx2_kernels() : &scalar_kernels();
  throw DomainError("unknown kernel backend '" + std::string(name) + "'");
}

std::atomic<const KernelTable*> active{nullptr};

}  // namespace

const KernelTable& active_kernels() {
  const KernelTable* k = active.load(std::memory_order_acquire);
  if (k == nullptr) {
    const char* env = std::getenv("CURVQUAD_KERNELS");
    const KernelTable* chosen = resolve(env ? env : "auto");
    active.compare_exchange_strong(k, chosen, std::memory_order_acq_rel);
    k = active.load(std::memory_order_acquire);
  }
  return *k;
}

void set_kernel_backend(std::string_view name) { active.store(resolve(name), std::memory_order_release); }

}  // namespace curvquad::simd
