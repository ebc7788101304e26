#include "costid/baseline_ts.hpp"

#include <stdexcept>

namespace costid {

int ts_step1(const CoherenceSpectrum& spec, const BootstrapNull& null,
             double alpha_fa1) {
  if (null.boot_eigenvalues.cols < null.J)
    throw std::invalid_argument("ts_step1: null lacks resampled eigenvalues");
  const int J = null.J;
  const int B = null.B;
  for (int d = 0; d < J; ++d) {
    const double lam = spec.eigenvalues[d];  // lambda_{d+1}, 0-based d
    double mean = 0.0;
    for (int b = 0; b < B; ++b) mean += null.boot_eigenvalues(b, d);
    mean /= B;
    int count_ge = 0;
    for (int b = 0; b < B; ++b)
      if (null.boot_eigenvalues(b, d) - mean + 1.0 >= lam) ++count_ge;
    const double p = static_cast<double>(1 + count_ge) / (B + 1);
    if (p >= alpha_fa1) return d;  // first acceptance: D_hat = d
  }
  return J;
}

ActivationMatrix ts_step2(const CoherenceSpectrum& spec,
                          const BootstrapNull& null, int D_hat,
                          double alpha_fa2) {
  if (D_hat < 0 || D_hat > null.J)
    throw std::invalid_argument("ts_step2: D_hat must be in [0, J]");
  const PValueMatrix p = p_values(test_statistics(spec, null), null);
  ActivationMatrix m(null.J, null.K);
  for (int j = 0; j < D_hat; ++j)
    for (int k = 0; k < null.K; ++k)
      if (p.p(j, k) < alpha_fa2) m.at(j, k) = 1;
  return m;
}

}  // namespace costid
