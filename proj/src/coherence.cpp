#include "costid/coherence.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "costid/kernels.hpp"

namespace costid {
namespace {

// Stack the K sets into one (sum I_k) x N matrix and center each row.
Mat stack_centered(const MultiSetSample& s) {
  const auto& K = kern::active();
  Mat y(s.total_dim(), s.N);
  int r = 0;
  for (const Mat& x : s.sets) {
    for (int i = 0; i < x.rows; ++i, ++r) {
      double* dst = y.row(r);
      std::copy_n(x.row(i), x.cols, dst);
      const double mean = K.sum(dst, x.cols) / x.cols;
      K.sub_scalar(dst, mean, x.cols);
    }
  }
  return y;
}

// Symmetric inverse square root of one covariance block.
Mat inverse_sqrt_block(const Mat& Rk, double ridge, int set_index) {
  Mat A = Rk;
  if (ridge > 0.0)
    for (int i = 0; i < A.rows; ++i) A(i, i) += ridge;
  std::vector<double> lam;
  Mat V;  // rows = eigenvectors
  sym_eigen(A, lam, V);
  const double lam_max = lam.empty() ? 0.0 : lam.front();
  const double floor = 1e-12 * lam_max;
  std::vector<double> inv_sqrt(lam.size());
  for (std::size_t i = 0; i < lam.size(); ++i) {
    double l = lam[i];
    if (l < floor || lam_max <= 0.0) {
      if (ridge == 0.0)
        throw SingularCovarianceError(
            "coherence: covariance of set " + std::to_string(set_index + 1) +
            " is singular (eigenvalue " + std::to_string(l) +
            " below floor); increase N or use a ridge");
      l = floor;  // ridge was requested: clamp instead of failing
    }
    inv_sqrt[i] = 1.0 / std::sqrt(l);
  }
  // W = V' diag(1/sqrt(lam)) V, accumulated row-wise.
  const auto& K = kern::active();
  const int n = A.rows;
  Mat W(n, n);
  for (std::size_t i = 0; i < lam.size(); ++i) {
    const double* v = V.row(static_cast<int>(i));
    for (int r = 0; r < n; ++r) K.axpy(W.row(r), inv_sqrt[i] * v[r], v, n);
  }
  return W;
}

}  // namespace

CovarianceEstimates sample_covariances(const MultiSetSample& s) {
  validate_sample(s);
  const auto& K = kern::active();
  const Mat y = stack_centered(s);
  const int t = y.rows;
  CovarianceEstimates cov;
  cov.dims = s.dims();
  cov.R = Mat(t, t);
  const double inv_n = 1.0 / s.N;
  for (int i = 0; i < t; ++i) {
    for (int j = 0; j <= i; ++j) {
      const double v = K.dot(y.row(i), y.row(j), y.cols) * inv_n;
      cov.R(i, j) = v;
      cov.R(j, i) = v;
    }
  }
  // Copy out the diagonal blocks.
  int off = 0;
  for (int d : cov.dims) {
    Mat blk(d, d);
    for (int i = 0; i < d; ++i)
      std::copy_n(cov.R.row(off + i) + off, d, blk.row(i));
    cov.R_blocks.push_back(std::move(blk));
    off += d;
  }
  return cov;
}

Mat coherence_matrix(const CovarianceEstimates& cov, double ridge) {
  if (ridge < 0.0) throw std::invalid_argument("coherence: ridge must be >= 0");
  const auto& K = kern::active();
  const int nsets = static_cast<int>(cov.dims.size());
  std::vector<Mat> W(nsets);
  for (int k = 0; k < nsets; ++k)
    W[k] = inverse_sqrt_block(cov.R_blocks[k], ridge, k);

  std::vector<int> offset(nsets + 1, 0);
  for (int k = 0; k < nsets; ++k) offset[k + 1] = offset[k] + cov.dims[k];
  const int t = offset[nsets];

  // C[k,k'] = W_k R[k,k'] W_k', built via two row-major products.
  Mat C(t, t);
  Mat tmp;
  for (int k = 0; k < nsets; ++k) {
    const int dk = cov.dims[k];
    for (int kp = 0; kp <= k; ++kp) {
      const int dp = cov.dims[kp];
      tmp = Mat(dk, dp);  // tmp = W_k * R_block(k, kp)
      for (int i = 0; i < dk; ++i)
        for (int l = 0; l < dk; ++l)
          K.axpy(tmp.row(i), W[k](i, l), cov.R.row(offset[k] + l) + offset[kp], dp);
      for (int i = 0; i < dk; ++i) {  // C_block = tmp * W_kp (W symmetric)
        double* crow = C.row(offset[k] + i) + offset[kp];
        for (int l = 0; l < dp; ++l) K.axpy(crow, tmp(i, l), W[kp].row(l), dp);
      }
      if (kp < k) {  // mirror into the upper block triangle
        for (int i = 0; i < dk; ++i)
          for (int jj = 0; jj < dp; ++jj)
            C(offset[kp] + jj, offset[k] + i) = C(offset[k] + i, offset[kp] + jj);
      }
    }
  }
  // Symmetrize exactly: (C + C') / 2 irons out fp asymmetry in the
  // diagonal blocks (the mirrored cross blocks are already exact).
  for (int i = 0; i < t; ++i)
    for (int j = 0; j < i; ++j) {
      const double v = 0.5 * (C(i, j) + C(j, i));
      C(i, j) = v;
      C(j, i) = v;
    }
  return C;
}

CoherenceSpectrum spectrum(const Mat& C, const std::vector<int>& set_dims,
                           int J) {
  if (C.rows != C.cols) throw std::invalid_argument("spectrum: matrix not square");
  int t = 0, min_dim = C.rows;
  for (int d : set_dims) {
    t += d;
    min_dim = std::min(min_dim, d);
  }
  if (t != C.rows)
    throw std::invalid_argument("spectrum: set dimensions do not sum to matrix size");
  if (J == 0) J = min_dim;
  if (J < 1 || J > min_dim)
    throw std::invalid_argument("spectrum: J must be in [1, min_k I_k]");
  double asym = 0.0;
  for (int i = 0; i < t; ++i)
    for (int j = 0; j < i; ++j)
      asym = std::max(asym, std::fabs(C(i, j) - C(j, i)));
  if (asym > 1e-6)
    throw std::invalid_argument("spectrum: input not symmetric (asymmetry " +
                                std::to_string(asym) + ")");

  CoherenceSpectrum sp;
  sp.dims = set_dims;
  sp.J = J;
  sym_eigen(C, sp.eigenvalues, sp.eigvec_rows);

  // Deterministic signs: largest-magnitude entry positive, first index
  // breaking magnitude ties.
  const auto& K = kern::active();
  for (int j = 0; j < t; ++j) {
    double* v = sp.eigvec_rows.row(j);
    int best = 0;
    for (int i = 1; i < t; ++i)
      if (std::fabs(v[i]) > std::fabs(v[best])) best = i;
    if (v[best] < 0.0) K.scale(v, -1.0, t);
  }

  const int nsets = static_cast<int>(set_dims.size());
  sp.chunk_norms = Mat(J, nsets);
  for (int j = 0; j < J; ++j) {
    const double* v = sp.eigvec_rows.row(j);
    int off = 0;
    for (int k = 0; k < nsets; ++k) {
      sp.chunk_norms(j, k) = K.dot(v + off, v + off, set_dims[k]);
      off += set_dims[k];
    }
  }
  return sp;
}

CoherenceSpectrum coherence_spectrum(const MultiSetSample& s, int J,
                                     double ridge) {
  const CovarianceEstimates cov = sample_covariances(s);
  return spectrum(coherence_matrix(cov, ridge), cov.dims, J);
}

}  // namespace costid
