#pragma once

// Empirical scoring of detected against true activation matrices, at atom
// and component level, plus Monte-Carlo aggregation.

#include <vector>

#include "costid/mat.hpp"
#include "costid/model.hpp"

namespace costid {

struct ConfusionCounts {
  // Atom level: rejections, false, true; component level analogous.
  int R = 0, V = 0, S = 0;
  int R_cmp = 0, V_cmp = 0, S_cmp = 0;
  int true_atoms = 0;  // ones in the ground truth
  int true_rows = 0;   // truly active rows

  double fdp() const { return R ? static_cast<double>(V) / R : 0.0; }
  double fdp_cmp() const { return R_cmp ? static_cast<double>(V_cmp) / R_cmp : 0.0; }
  double power() const { return true_atoms ? static_cast<double>(S) / true_atoms : 0.0; }
  double power_cmp() const {
    return true_rows ? static_cast<double>(S_cmp) / true_rows : 0.0;
  }
};

// Rows are compared by index (generator and spectrum both order components
// by decreasing strength). Throws std::invalid_argument on shape mismatch.
ConfusionCounts score(const ActivationMatrix& estimated,
                      const ActivationMatrix& truth);

struct MetricSummary {
  double fdr = 0.0;        // mean of per-repetition FDPs
  double power = 0.0;
  double fdr_cmp = 0.0;
  double power_cmp = 0.0;
  int repetitions = 0;
};

MetricSummary aggregate(const std::vector<ConfusionCounts>& counts);

// Per-cell mean of the estimated activation matrices (heatmap input).
Mat mean_activation(const std::vector<ActivationMatrix>& estimates);

}  // namespace costid
