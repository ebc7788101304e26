#pragma once

// Composite coherence matrix estimation and its eigenstructure: per-set
// covariances, blockwise whitening, sorted spectrum, chunk norms.

#include <stdexcept>
#include <vector>

#include "costid/mat.hpp"
#include "costid/model.hpp"

namespace costid {

struct SingularCovarianceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct CovarianceEstimates {
  Mat R;                      // (sum I_k)^2 stacked sample covariance
  std::vector<Mat> R_blocks;  // per-set covariances R_k (the blocks of R_D)
  std::vector<int> dims;      // I_k
};

// R = (1/N) sum_n z_n z_n' over stacked, per-row mean-centered columns.
CovarianceEstimates sample_covariances(const MultiSetSample& s);

// C = R_D^{-1/2} R R_D^{-1/2}, computed blockwise with per-set symmetric
// inverse square roots (eigendecomposition, eigenvalue floor 1e-12 * largest
// block eigenvalue). Throws SingularCovarianceError when a block eigenvalue
// falls below the floor and ridge == 0; with ridge > 0 the block is
// regularized as R_k + ridge*I and floored eigenvalues are clamped.
Mat coherence_matrix(const CovarianceEstimates& cov, double ridge = 0.0);

struct CoherenceSpectrum {
  std::vector<double> eigenvalues;  // all sum(I_k), descending
  Mat eigvec_rows;                  // row j = eigenvector j
  Mat chunk_norms;                  // J x K, c_k^{(j)} = ||chunk||^2
  std::vector<int> dims;            // I_k (chunk lengths)
  int J = 0;                        // retained leading eigenpairs
};

// Full symmetric eigendecomposition of C with descending eigenvalues,
// deterministic signs (largest-magnitude entry positive, first index wins
// ties), and chunk norms for the leading J eigenvectors. J = 0 selects the
// default min_k I_k. Throws std::invalid_argument on asymmetry > 1e-6 or
// J > min_k I_k.
CoherenceSpectrum spectrum(const Mat& C, const std::vector<int>& set_dims,
                           int J = 0);

// Convenience chain: validate -> covariances -> coherence -> spectrum.
CoherenceSpectrum coherence_spectrum(const MultiSetSample& s, int J = 0,
                                     double ridge = 0.0);

}  // namespace costid
