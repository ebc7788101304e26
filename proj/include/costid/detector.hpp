#pragma once

// The lfdr-based detector: greedy prefix over sorted modified lfdrs with
// atom-level FDR control, the >= 2-discoveries-per-row pairing constraint,
// and an outer component-level FDR loop that prunes components.

#include <cstdint>
#include <vector>

#include "costid/mat.hpp"
#include "costid/model.hpp"

namespace costid {

struct DetectionResult {
  ActivationMatrix M;                   // row sums always 0 or >= 2
  double fdr_hat = 0.0;                 // <= alpha at termination
  double fdr_cmp_hat = 0.0;             // <= alpha_cmp at termination
  std::vector<int> removed_components;  // pruned by the component-FDR loop,
                                        // in removal order (0-based)
  int m_final = 0;                      // rejection count
  bool fixup_triggered = false;         // the random +-1 step fired
  int singleton_repairs = 0;            // exact-tie pair splits repaired
};

// Largest prefix length of the ascending-sorted values whose mean is
// <= alpha (0 if the first value already exceeds alpha).
int greedy_prefix(const std::vector<double>& sorted_values, double alpha);

// Run the detector on a J x K matrix of raw atom lfdrs. alpha in (0,1),
// alpha_cmp in (0,1]; the seed drives the +-1 coin of the pairing fix-up.
DetectionResult detect(const Mat& lfdrs, double alpha, double alpha_cmp,
                       std::uint64_t seed);

}  // namespace costid
