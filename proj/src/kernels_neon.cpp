#include "costid/kernels.hpp"

// NEON kernels (aarch64; NEON is baseline there, no runtime check needed).

#if defined(__aarch64__)

#include <arm_neon.h>

namespace costid::kern {
namespace {

double dot_neon(const double* x, const double* y, std::size_t n) {
  float64x2_t acc0 = vdupq_n_f64(0.0);
  float64x2_t acc1 = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    acc0 = vfmaq_f64(acc0, vld1q_f64(x + i), vld1q_f64(y + i));
    acc1 = vfmaq_f64(acc1, vld1q_f64(x + i + 2), vld1q_f64(y + i + 2));
  }
  double acc = vaddvq_f64(acc0) + vaddvq_f64(acc1);
  for (; i < n; ++i) acc += x[i] * y[i];
  return acc;
}

void axpy_neon(double* y, double a, const double* x, std::size_t n) {
  const float64x2_t av = vdupq_n_f64(a);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    vst1q_f64(y + i, vfmaq_f64(vld1q_f64(y + i), av, vld1q_f64(x + i)));
  }
  for (; i < n; ++i) y[i] += a * x[i];
}

void scale_neon(double* x, double a, std::size_t n) {
  const float64x2_t av = vdupq_n_f64(a);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) vst1q_f64(x + i, vmulq_f64(av, vld1q_f64(x + i)));
  for (; i < n; ++i) x[i] *= a;
}

double sum_neon(const double* x, std::size_t n) {
  float64x2_t acc = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) acc = vaddq_f64(acc, vld1q_f64(x + i));
  double s = vaddvq_f64(acc);
  for (; i < n; ++i) s += x[i];
  return s;
}

void sub_scalar_neon(double* x, double a, std::size_t n) {
  const float64x2_t av = vdupq_n_f64(a);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) vst1q_f64(x + i, vsubq_f64(vld1q_f64(x + i), av));
  for (; i < n; ++i) x[i] -= a;
}

void rot_neon(double* x, double* y, double c, double s, std::size_t n) {
  const float64x2_t cv = vdupq_n_f64(c);
  const float64x2_t sv = vdupq_n_f64(s);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const float64x2_t xv = vld1q_f64(x + i);
    const float64x2_t yv = vld1q_f64(y + i);
    vst1q_f64(x + i, vfmsq_f64(vmulq_f64(cv, xv), sv, yv));
    vst1q_f64(y + i, vfmaq_f64(vmulq_f64(cv, yv), sv, xv));
  }
  for (; i < n; ++i) {
    const double xi = x[i];
    const double yi = y[i];
    x[i] = c * xi - s * yi;
    y[i] = s * xi + c * yi;
  }
}

void gather_neon(double* dst, const double* src, const std::int32_t* idx,
                 std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) dst[i] = src[idx[i]];
}

}  // namespace

const Kernels& neon_kernels() {
  static const Kernels k = {dot_neon,  axpy_neon,       scale_neon,
                            sum_neon,  sub_scalar_neon, rot_neon,
                            gather_neon, "neon"};
  return k;
}

}  // namespace costid::kern

#endif  // aarch64
