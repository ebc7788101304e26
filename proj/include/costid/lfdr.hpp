#pragma once

// Local FDR machinery: p-value mixture model (uniform + beta(a,1)
// components, EM-fitted, BIC model order), atom lfdrs, modified lfdrs with
// the two-smallest averaging, component null probabilities, and plug-in
// FDR estimates.

#include <utility>
#include <vector>

#include "costid/bootstrap.hpp"
#include "costid/mat.hpp"
#include "costid/model.hpp"

namespace costid {

struct PvalueMixtureModel {
  double pi0 = 1.0;        // null proportion
  std::vector<double> w;   // alternative weights
  std::vector<double> a;   // beta shapes, each in (0, 1)
  // Weight of the point-mass-at-zero alternative class: the fraction of
  // atoms whose statistic exceeded every bootstrap null draw (raw tail 0).
  // Those p-values sit at the plus-one floor 1/(B+1) no matter how extreme
  // the statistic is, which no beta(a,1) component can represent without
  // draining pi0; they are carved out before the EM fit instead.
  // pi0 + sum(w) + w0 = 1.
  double w0 = 0.0;
  bool converged = true;   // false => hit the iteration cap (best iterate kept)
  int em_iterations = 0;
  double loglik = 0.0;
  double bic = 0.0;

  int M() const { return static_cast<int>(a.size()); }
  // f(p) = pi0 + sum_m w_m a_m p^(a_m - 1); >= pi0 for p in (0, 1].
  // The zero class carries no density on (0, 1].
  double density(double p) const;
};

// EM fit over the pooled p-values; model order M in {1,2,3} chosen by BIC;
// pi0 initialized by Storey's #{p > 0.5}/(0.5 n) clamped to [0.05, 0.95]
// (an exact-1 start would be a stationary point with zero mixture weight).
// Throws std::invalid_argument with fewer than 20 p-values.
PvalueMixtureModel fit_lfdr_model(const std::vector<double>& pooled);
// Matrix overload: when the raw ECDF tails are available, atoms with raw
// tail 0 form the point-mass-at-zero class (weight w0 = n0/n); the EM runs
// on the remaining atoms and pi0/w are rescaled by 1 - w0 so the full model
// still sums to one.
PvalueMixtureModel fit_lfdr_model(const PValueMatrix& p);

// l = pi0 / f(p), clamped to [0, 1]. Atoms whose statistic exceeded every
// bootstrap null draw (raw tail 0, evidence beyond the resolution of B)
// take the p -> 0 limit of that ratio: 0 when the model has alternative
// mass at zero (a positive w0, or any beta component, whose density is
// unbounded there); else the plain formula applies.
Mat atom_lfdrs(const PValueMatrix& p, const PvalueMixtureModel& model);

// Per row, the two smallest entries (ties broken by lowest set index) are
// each replaced by their mean; requires K >= 2.
Mat modified_lfdrs(const Mat& lfdrs);

// q^{(j)} = prod_k modified_lfdr(j, k).
std::vector<double> component_null_probs(const Mat& modified);

// (FDR_hat, FDR_cmp_hat): sum of rejected modified lfdrs over the rejection
// count, and mean q over rows with at least one discovery; 0/0 := 0.
std::pair<double, double> estimate_fdrs(const ActivationMatrix& rejected,
                                        const Mat& modified,
                                        const std::vector<double>& q);

}  // namespace costid
