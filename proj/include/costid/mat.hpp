#pragma once

// Dense row-major double matrix and the symmetric eigensolver used by the
// whitening and spectrum stages. Deliberately small: the pipeline needs
// symmetric eigendecomposition, row access, and little else.

#include <cstddef>
#include <vector>

namespace costid {

struct Mat {
  int rows = 0;
  int cols = 0;
  std::vector<double> a;  // row-major, rows*cols

  Mat() = default;
  Mat(int r, int c) : rows(r), cols(c), a(static_cast<std::size_t>(r) * c, 0.0) {}

  double* row(int i) { return a.data() + static_cast<std::size_t>(i) * cols; }
  const double* row(int i) const {
    return a.data() + static_cast<std::size_t>(i) * cols;
  }
  double& operator()(int i, int j) {
    return a[static_cast<std::size_t>(i) * cols + j];
  }
  double operator()(int i, int j) const {
    return a[static_cast<std::size_t>(i) * cols + j];
  }

  static Mat identity(int n) {
    Mat m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }
};

// Eigendecomposition of a symmetric matrix: Householder tridiagonalization
// followed by implicit-shift QL. On return `eigenvalues` is sorted
// descending and row j of `eigenvectors_rows` is the unit eigenvector for
// eigenvalues[j] (row layout keeps the QL rotations and downstream chunk
// slicing contiguous). The input must be symmetric; only the caller-facing
// spectrum() validates symmetry. Throws std::runtime_error if QL fails to
// converge (50 iterations per eigenvalue).
void sym_eigen(const Mat& A, std::vector<double>& eigenvalues,
               Mat& eigenvectors_rows);

}  // namespace costid
