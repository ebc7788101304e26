#include "costid/kernels.hpp"

// Scalar reference kernels. These define the semantics the SIMD variants
// are tested against; keep them dead simple.

namespace costid::kern {
namespace {

double dot_scalar(const double* x, const double* y, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += x[i] * y[i];
  return acc;
}

void axpy_scalar(double* y, double a, const double* x, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

void scale_scalar(double* x, double a, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) x[i] *= a;
}

double sum_scalar(const double* x, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += x[i];
  return acc;
}

void sub_scalar_scalar(double* x, double a, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) x[i] -= a;
}

void rot_scalar(double* x, double* y, double c, double s, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    const double xi = x[i];
    const double yi = y[i];
    x[i] = c * xi - s * yi;
    y[i] = s * xi + c * yi;
  }
}

void gather_scalar(double* dst, const double* src, const std::int32_t* idx,
                   std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) dst[i] = src[idx[i]];
}

}  // namespace

const Kernels& scalar_kernels() {
  static const Kernels k = {dot_scalar,  axpy_scalar,       scale_scalar,
                            sum_scalar,  sub_scalar_scalar, rot_scalar,
                            gather_scalar, "scalar"};
  return k;
}

}  // namespace costid::kern
