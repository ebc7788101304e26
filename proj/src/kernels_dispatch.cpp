#include "costid/kernels.hpp"

#include <cstdlib>
#include <stdexcept>

namespace costid::kern {
namespace {

const Kernels* g_active = nullptr;

const Kernels* pick(const std::string& name) {
  if (name == "scalar") return &scalar_kernels();
#if defined(__x86_64__) || defined(_M_X64)
  if (name == "avx2") {
    if (!cpu_has_avx2()) throw std::invalid_argument("kernels: CPU lacks AVX2/FMA");
    return &avx2_kernels();
  }
#endif
#if defined(__aarch64__)
  if (name == "neon") return &neon_kernels();
#endif
  if (name == "auto") {
#if defined(__x86_64__) || defined(_M_X64)
    if (cpu_has_avx2()) return &avx2_kernels();
#endif
#if defined(__aarch64__)
    return &neon_kernels();
#endif
    return &scalar_kernels();
  }
  throw std::invalid_argument("kernels: unknown or unsupported backend '" + name + "'");
}

}  // namespace

bool cpu_has_avx2() {
#if defined(__x86_64__) || defined(_M_X64)
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

const Kernels& active() {
  if (!g_active) {
    const char* env = std::getenv("COSTID_KERNELS");
    g_active = pick(env && *env ? env : "auto");
  }
  return *g_active;
}

void force_backend(const std::string& name) { g_active = pick(name); }

}  // namespace costid::kern
