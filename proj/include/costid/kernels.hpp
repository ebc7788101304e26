#pragma once

// ───────────────────────── SIMD KERNEL LAYER ─────────────────────────
// Scalar reference implementations plus AVX2 (x86-64) and NEON (aarch64)
// variants of the numeric inner loops everything else is built from.
// The active backend is chosen once at runtime from CPU capabilities and
// can be overridden with the COSTID_KERNELS environment variable
// ("scalar", "avx2", "neon", "auto") or force_backend() in tests.

#include <cstddef>
#include <cstdint>
#include <string>

namespace costid::kern {

struct Kernels {
  // sum_i x[i]*y[i]
  double (*dot)(const double* x, const double* y, std::size_t n);
  // y[i] += a*x[i]
  void (*axpy)(double* y, double a, const double* x, std::size_t n);
  // x[i] *= a
  void (*scale)(double* x, double a, std::size_t n);
  // sum_i x[i]
  double (*sum)(const double* x, std::size_t n);
  // x[i] -= a
  void (*sub_scalar)(double* x, double a, std::size_t n);
  // plane rotation on two rows: (x, y) <- (c*x - s*y, s*x + c*y)
  void (*rot)(double* x, double* y, double c, double s, std::size_t n);
  // dst[i] = src[idx[i]]
  void (*gather)(double* dst, const double* src, const std::int32_t* idx,
                 std::size_t n);
  const char* name;
};

// Backend tables (always compiled where the ISA allows; never call a SIMD
// table on a CPU without the feature — use active() for dispatched access).
const Kernels& scalar_kernels();
#if defined(__x86_64__) || defined(_M_X64)
const Kernels& avx2_kernels();
#endif
#if defined(__aarch64__)
const Kernels& neon_kernels();
#endif

bool cpu_has_avx2();

// Runtime-dispatched backend (env override applied on first call).
const Kernels& active();

// Force a backend by name ("scalar" | "avx2" | "neon" | "auto"); throws
// std::invalid_argument for unknown or unsupported names. Intended for the
// equivalence tests; not thread-safe against concurrent active() users.
void force_backend(const std::string& name);

}  // namespace costid::kern
