#include "costid/metrics.hpp"

#include <stdexcept>

namespace costid {

ConfusionCounts score(const ActivationMatrix& estimated,
                      const ActivationMatrix& truth) {
  if (estimated.J != truth.J || estimated.K != truth.K) {
    throw std::invalid_argument("score: activation matrix shapes differ");
  }
  ConfusionCounts c;
  for (int j = 0; j < truth.J; ++j) {
    bool est_row = false, true_row = false;
    for (int k = 0; k < truth.K; ++k) {
      const bool e = estimated.at(j, k) != 0;
      const bool t = truth.at(j, k) != 0;
      est_row = est_row || e;
      true_row = true_row || t;
      if (t) ++c.true_atoms;
      if (e) {
        ++c.R;
        if (t) {
          ++c.S;
        } else {
          ++c.V;
        }
      }
    }
    if (true_row) ++c.true_rows;
    if (est_row) {
      ++c.R_cmp;
      if (true_row) {
        ++c.S_cmp;
      } else {
        ++c.V_cmp;
      }
    }
  }
  return c;
}

MetricSummary aggregate(const std::vector<ConfusionCounts>& counts) {
  MetricSummary s;
  s.repetitions = static_cast<int>(counts.size());
  if (counts.empty()) return s;
  for (const ConfusionCounts& c : counts) {
    s.fdr += c.fdp();
    s.power += c.power();
    s.fdr_cmp += c.fdp_cmp();
    s.power_cmp += c.power_cmp();
  }
  const double n = static_cast<double>(counts.size());
  s.fdr /= n;
  s.power /= n;
  s.fdr_cmp /= n;
  s.power_cmp /= n;
  return s;
}

Mat mean_activation(const std::vector<ActivationMatrix>& estimates) {
  if (estimates.empty()) {
    throw std::invalid_argument("mean_activation: no matrices");
  }
  const int J = estimates.front().J;
  const int K = estimates.front().K;
  Mat m(J, K);
  for (const ActivationMatrix& e : estimates) {
    if (e.J != J || e.K != K) {
      throw std::invalid_argument("mean_activation: shape mismatch");
    }
    for (int j = 0; j < J; ++j) {
      for (int k = 0; k < K; ++k) m(j, k) += e.at(j, k) ? 1.0 : 0.0;
    }
  }
  const double inv = 1.0 / static_cast<double>(estimates.size());
  for (double& v : m.a) v *= inv;
  return m;
}

}  // namespace costid
