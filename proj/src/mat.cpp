#include "costid/mat.hpp"

#include <cfloat>
#include <cmath>
#include <algorithm>
#include <numeric>
#include <stdexcept>

#include "costid/kernels.hpp"

namespace costid {
namespace {

// Householder reduction of the full symmetric matrix A (modified in place)
// to tridiagonal form (d, e). Reflector i is left in A.row(i)[0..i-1] with
// its scale factor in h[i]; e[i] holds the subdiagonal entry T(i, i-1).
// Works on full rows rather than the lower triangle so that every inner
// loop is a contiguous dot/axpy.
void householder_tridiag(Mat& A, std::vector<double>& d, std::vector<double>& e,
                         std::vector<double>& h) {
  const auto& K = kern::active();
  const int n = A.rows;
  std::vector<double> p(n), q(n);
  for (int i = n - 1; i >= 2; --i) {
    const int l = i - 1;
    double* ui = A.row(i);
    double scale = 0.0;
    for (int k = 0; k <= l; ++k) scale += std::fabs(ui[k]);
    if (scale == 0.0) {  // row already reduced
      e[i] = ui[l];
      h[i] = 0.0;
      continue;
    }
    K.scale(ui, 1.0 / scale, l + 1);
    double hh = K.dot(ui, ui, l + 1);
    const double f = ui[l];
    const double g = (f >= 0.0) ? -std::sqrt(hh) : std::sqrt(hh);
    e[i] = scale * g;
    hh -= f * g;  // hh = u'u / 2
    ui[l] = f - g;
    for (int j = 0; j <= l; ++j) p[j] = K.dot(A.row(j), ui, l + 1) / hh;
    const double kk = K.dot(p.data(), ui, l + 1) / (2.0 * hh);
    for (int j = 0; j <= l; ++j) q[j] = p[j] - kk * ui[j];
    for (int j = 0; j <= l; ++j) {  // A -= q u' + u q' on the leading block
      K.axpy(A.row(j), -q[j], ui, l + 1);
      K.axpy(A.row(j), -ui[j], q.data(), l + 1);
    }
    h[i] = hh;
  }
  if (n >= 2) e[1] = A(1, 0);
  e[0] = 0.0;
  for (int i = 0; i < n; ++i) d[i] = A(i, i);
}

// Accumulate the orthogonal reduction basis as ROWS of W (W = H_2 ... H_{n-1}
// applied to the identity by right-multiplication; reflector supports make
// rows >= i invariant under H_i).
void accumulate_basis(const Mat& A, const std::vector<double>& h, Mat& W) {
  const auto& K = kern::active();
  const int n = A.rows;
  W = Mat::identity(n);
  for (int i = 2; i < n; ++i) {
    if (h[i] == 0.0) continue;
    const double* ui = A.row(i);
    for (int r = 0; r < i; ++r) {
      const double gma = K.dot(W.row(r), ui, i) / h[i];
      K.axpy(W.row(r), -gma, ui, i);
    }
  }
}

// Implicit-shift QL on the tridiagonal (d, e); every Givens rotation is
// applied to the corresponding pair of rows of W, so rows of W end up as
// the eigenvectors.
void ql_implicit(std::vector<double>& d, std::vector<double>& e, Mat& W) {
  const auto& K = kern::active();
  const int n = static_cast<int>(d.size());
  for (int i = 1; i < n; ++i) e[i - 1] = e[i];
  e[n - 1] = 0.0;
  for (int l = 0; l < n; ++l) {
    int iter = 0;
    int m;
    do {
      for (m = l; m < n - 1; ++m) {  // split point: negligible off-diagonal
        const double dd = std::fabs(d[m]) + std::fabs(d[m + 1]);
        if (std::fabs(e[m]) <= DBL_EPSILON * dd) break;
      }
      if (m != l) {
        if (iter++ == 50)
          throw std::runtime_error("sym_eigen: QL failed to converge");
        double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
        double r = std::hypot(g, 1.0);
        g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
        double s = 1.0, c = 1.0, p = 0.0;
        bool underflow = false;
        for (int i = m - 1; i >= l; --i) {
          double f = s * e[i];
          const double b = c * e[i];
          r = std::hypot(f, g);
          e[i + 1] = r;
          if (r == 0.0) {  // recover from underflow: skip this sweep
            d[i + 1] -= p;
            e[m] = 0.0;
            underflow = true;
            break;
          }
          s = f / r;
          c = g / r;
          g = d[i + 1] - p;
          r = (d[i] - g) * s + 2.0 * c * b;
          p = s * r;
          d[i + 1] = g + p;
          g = c * r - b;
          K.rot(W.row(i), W.row(i + 1), c, s, W.cols);
        }
        if (underflow) continue;
        d[l] -= p;
        e[l] = g;
        e[m] = 0.0;
      }
    } while (m != l);
  }
}

}  // namespace

void sym_eigen(const Mat& A, std::vector<double>& eigenvalues,
               Mat& eigenvectors_rows) {
  if (A.rows != A.cols) throw std::invalid_argument("sym_eigen: matrix not square");
  const int n = A.rows;
  if (n == 0) {
    eigenvalues.clear();
    eigenvectors_rows = Mat(0, 0);
    return;
  }
  Mat work = A;
  std::vector<double> d(n), e(n, 0.0), h(n, 0.0);
  if (n == 1) {
    d[0] = work(0, 0);
  } else {
    householder_tridiag(work, d, e, h);
  }
  Mat W;
  accumulate_basis(work, h, W);
  if (n > 1) ql_implicit(d, e, W);

  // Descending sort; stable in the decomposition's own order for ties.
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&d](int a, int b) { return d[a] > d[b]; });
  eigenvalues.resize(n);
  eigenvectors_rows = Mat(n, n);
  for (int j = 0; j < n; ++j) {
    eigenvalues[j] = d[order[j]];
    std::copy_n(W.row(order[j]), n, eigenvectors_rows.row(j));
  }
}

}  // namespace costid
