#include "costid/bootstrap.hpp"

#include <algorithm>
#include <stdexcept>

#include "costid/kernels.hpp"
#include "costid/parallel.hpp"
#include "costid/rng.hpp"

namespace costid {

BootstrapNull bootstrap_chunk_norms(const MultiSetSample& s, int J, int B,
                                    std::uint64_t seed, double ridge,
                                    int workers) {
  validate_sample(s);
  if (B < 50) throw std::invalid_argument("bootstrap: need B >= 50 resamples");
  int min_dim = s.sets.front().rows;
  for (const Mat& x : s.sets) min_dim = std::min(min_dim, x.rows);
  if (J == 0) J = min_dim;
  if (J < 1 || J > min_dim)
    throw std::invalid_argument("bootstrap: J must be in [1, min_k I_k]");

  const int K = s.K();
  const int N = s.N;
  BootstrapNull null;
  null.B = B;
  null.J = J;
  null.K = K;
  null.boot_norms.assign(static_cast<std::size_t>(B) * J * K, 0.0);
  null.boot_eigenvalues = Mat(B, J);

  parallel_for(B, workers, [&](int b) {
    rng::Stream st(rng::derive(seed, {static_cast<std::uint64_t>(b)}));
    std::vector<std::int32_t> idx(N);
    MultiSetSample rs;
    rs.N = N;
    rs.sets.assign(s.sets.begin(), s.sets.end());  // shapes; data overwritten
    const auto& kn = kern::active();
    for (int attempt = 0;; ++attempt) {
      for (int n = 0; n < N; ++n)
        idx[n] = static_cast<std::int32_t>(st.below(static_cast<std::uint64_t>(N)));
      for (int k = 0; k < K; ++k) {
        const Mat& src = s.sets[k];
        Mat& dst = rs.sets[k];
        for (int i = 0; i < src.rows; ++i)
          kn.gather(dst.row(i), src.row(i), idx.data(), N);
      }
      try {
        const CoherenceSpectrum sp = coherence_spectrum(rs, J, ridge);
        for (int j = 0; j < J; ++j) {
          null.boot_eigenvalues(b, j) = sp.eigenvalues[j];
          for (int k = 0; k < K; ++k)
            null.boot_norms[(static_cast<std::size_t>(b) * J + j) * K + k] =
                sp.chunk_norms(j, k);
        }
        return;
      } catch (const SingularCovarianceError&) {
        if (attempt >= 10) throw;  // keep drawing from the same substream
      }
    }
  });

  null.boot_means = Mat(J, K);
  for (int j = 0; j < J; ++j)
    for (int k = 0; k < K; ++k) {
      double acc = 0.0;
      for (int b = 0; b < B; ++b) acc += null.norm(b, j, k);
      null.boot_means(j, k) = acc / B;
    }
  null.null_stats.resize(static_cast<std::size_t>(J) * K);
  for (int j = 0; j < J; ++j)
    for (int k = 0; k < K; ++k) {
      std::vector<double>& v = null.null_stats[static_cast<std::size_t>(j) * K + k];
      v.resize(B);
      const double mu = null.boot_means(j, k);
      for (int b = 0; b < B; ++b) v[b] = null.norm(b, j, k) - mu;
      std::sort(v.begin(), v.end());
    }
  return null;
}

Mat test_statistics(const CoherenceSpectrum& spec, const BootstrapNull& null) {
  if (spec.J != null.J || static_cast<int>(spec.dims.size()) != null.K)
    throw std::invalid_argument("test_statistics: spectrum/null shape mismatch");
  Mat T(null.J, null.K);
  const double equal_share = 1.0 / null.K;
  for (int j = 0; j < null.J; ++j)
    for (int k = 0; k < null.K; ++k) {
      const double mu = std::min(null.boot_means(j, k), equal_share);
      T(j, k) = spec.chunk_norms(j, k) - mu;
    }
  return T;
}

PValueMatrix p_values(const Mat& T, const BootstrapNull& null) {
  if (T.rows != null.J || T.cols != null.K)
    throw std::invalid_argument("p_values: statistic/null shape mismatch");
  PValueMatrix out;
  out.p = Mat(null.J, null.K);
  out.raw = Mat(null.J, null.K);
  for (int j = 0; j < null.J; ++j)
    for (int k = 0; k < null.K; ++k) {
      const std::vector<double>& v = null.stats(j, k);
      const auto it = std::lower_bound(v.begin(), v.end(), T(j, k));
      const long count_ge = static_cast<long>(v.end() - it);
      out.p(j, k) = static_cast<double>(1 + count_ge) / (null.B + 1);
      out.raw(j, k) = static_cast<double>(count_ge) / null.B;
    }
  return out;
}

}  // namespace costid
