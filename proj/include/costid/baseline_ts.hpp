#pragma once

// Two-step baseline: Step I sequentially tests eigenvalues to estimate the
// number of correlated components D; Step II thresholds per-atom chunk-norm
// p-values at a fixed false-alarm level for rows up to D-hat.

#include "costid/bootstrap.hpp"
#include "costid/coherence.hpp"
#include "costid/model.hpp"

namespace costid {

struct TwoStepConfig {
  double alpha_fa1 = 0.1;  // Step-I per-test false-alarm level
  double alpha_fa2 = 0.1;  // Step-II per-test false-alarm level
  int B = 300;             // bootstrap resamples
};

// For d = 0 .. J-1, test "exactly d correlated components" with the
// statistic lambda_{d+1} against the recentered resampled eigenvalues
// T*_b = lambda*_{b,d+1} - mean_b(lambda*_{.,d+1}) + 1, p-value
// (1 + #{T* >= lambda_{d+1}})/(B+1); return the first d whose p >= alpha,
// or J if every test rejects.
int ts_step1(const CoherenceSpectrum& spec, const BootstrapNull& null,
             double alpha_fa1);

// Reject atom (j, k) iff j < D_hat (0-based) and its chunk-norm p-value is
// below alpha_fa2; rows beyond D_hat are zero. No row-sum post-processing.
ActivationMatrix ts_step2(const CoherenceSpectrum& spec,
                          const BootstrapNull& null, int D_hat,
                          double alpha_fa2);

}  // namespace costid
