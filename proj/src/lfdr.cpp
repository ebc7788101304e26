#include "costid/lfdr.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace costid {
namespace {

constexpr int kMaxEmIterations = 500;
constexpr double kShapeMin = 1e-4;      // keeps a in (0, 1) strictly
constexpr double kShapeMax = 1.0 - 1e-4;

// One EM run at fixed model order M. p-values are in (0, 1] by
// construction (plus-one corrected), so log p is finite.
PvalueMixtureModel em_fit(const std::vector<double>& p, int M, double pi0_init) {
  const std::size_t n = p.size();
  std::vector<double> logp(n);
  for (std::size_t i = 0; i < n; ++i) logp[i] = std::log(std::max(p[i], 1e-300));

  PvalueMixtureModel mod;
  mod.pi0 = pi0_init;
  mod.w.assign(M, (1.0 - pi0_init) / M);
  // Spread initial shapes towards small p (strongly non-uniform start).
  static const double kInit1[] = {0.10};
  static const double kInit2[] = {0.03, 0.30};
  static const double kInit3[] = {0.01, 0.10, 0.40};
  const double* init = (M == 1) ? kInit1 : (M == 2) ? kInit2 : kInit3;
  mod.a.assign(init, init + M);

  std::vector<double> resp(n);            // null responsibilities
  std::vector<double> comp_resp(n);       // reused per component
  double prev_ll = -1e300;
  for (int iter = 1; iter <= kMaxEmIterations; ++iter) {
    // E-step folded into accumulators.
    double ll = 0.0;
    double sum_null = 0.0;
    std::vector<double> sum_w(M, 0.0), sum_wlogp(M, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      const double f = mod.density(p[i]);
      ll += std::log(f);
      resp[i] = mod.pi0 / f;
      sum_null += resp[i];
      for (int m = 0; m < M; ++m) {
        const double g =
            mod.w[m] * mod.a[m] * std::exp((mod.a[m] - 1.0) * logp[i]) / f;
        sum_w[m] += g;
        sum_wlogp[m] += g * logp[i];
      }
    }
    mod.loglik = ll;
    mod.em_iterations = iter;
    // M-step.
    mod.pi0 = sum_null / n;
    for (int m = 0; m < M; ++m) {
      mod.w[m] = sum_w[m] / n;
      if (sum_w[m] > 1e-12 && sum_wlogp[m] < -1e-12)
        mod.a[m] = std::clamp(-sum_w[m] / sum_wlogp[m], kShapeMin, kShapeMax);
    }
    if (std::fabs(ll - prev_ll) <= 1e-8 * std::max(1.0, std::fabs(ll))) {
      mod.converged = true;
      break;
    }
    prev_ll = ll;
    mod.converged = false;  // provisional until the tolerance is met
  }
  // The in-loop ll is evaluated before the M-step; score the final
  // parameters exactly for the BIC comparison.
  double ll_final = 0.0;
  for (std::size_t i = 0; i < n; ++i) ll_final += std::log(mod.density(p[i]));
  mod.loglik = ll_final;
  // 2M free parameters: M mixture weights (pi0 + w constrained to sum 1)
  // plus M shapes.
  mod.bic = -2.0 * mod.loglik + 2.0 * M * std::log(static_cast<double>(n));
  return mod;
}

}  // namespace

double PvalueMixtureModel::density(double p) const {
  const double q = std::max(p, 1e-300);
  double f = pi0;
  for (std::size_t m = 0; m < a.size(); ++m)
    f += w[m] * a[m] * std::pow(q, a[m] - 1.0);
  return f;
}

PvalueMixtureModel fit_lfdr_model(const std::vector<double>& pooled) {
  if (pooled.size() < 20)
    throw std::invalid_argument("lfdr: need at least 20 p-values to fit");
  for (double p : pooled)
    if (!(p > 0.0) || p > 1.0)
      throw std::invalid_argument("lfdr: p-values must lie in (0, 1]");

  // Storey initialization for the null proportion.
  std::size_t above = 0;
  for (double p : pooled)
    if (p > 0.5) ++above;
  const double storey =
      static_cast<double>(above) / (0.5 * static_cast<double>(pooled.size()));
  // pi0_init = 1 would zero every mixture weight, and w = 0 is a stationary
  // point EM can never leave; cap the start so the alternative components
  // keep mass. The fitted pi0 itself remains free in [0, 1].
  const double pi0_init = std::clamp(storey, 0.05, 0.95);

  PvalueMixtureModel best;
  bool have = false;
  for (int M = 1; M <= 3; ++M) {
    PvalueMixtureModel mod = em_fit(pooled, M, pi0_init);
    if (!have || mod.bic < best.bic) {
      best = mod;
      have = true;
    }
  }
  return best;
}

PvalueMixtureModel fit_lfdr_model(const PValueMatrix& p) {
  const bool have_raw = p.raw.rows == p.p.rows && p.raw.cols == p.p.cols &&
                        !p.raw.a.empty();
  if (!have_raw)
    return fit_lfdr_model(std::vector<double>(p.p.a.begin(), p.p.a.end()));

  // Atoms beyond the entire null sample pile up at the plus-one p-value
  // floor; a beta(a,1) density is capped there (max_a a x^{a-1} at
  // x = 1/(B+1) is a few tens), so the EM can only explain that spike by
  // inflating component weight at pi0's expense. Carve the spike out as a
  // point mass at zero and fit the mixture on the rest.
  std::vector<double> rest;
  rest.reserve(p.p.a.size());
  std::size_t n0 = 0;
  for (std::size_t i = 0; i < p.p.a.size(); ++i) {
    if (p.raw.a[i] == 0.0)
      ++n0;
    else
      rest.push_back(p.p.a[i]);
  }
  if (n0 == 0)
    return fit_lfdr_model(std::vector<double>(p.p.a.begin(), p.p.a.end()));

  const double w0 =
      static_cast<double>(n0) / static_cast<double>(p.p.a.size());
  PvalueMixtureModel mod;
  if (rest.size() >= 20) {
    mod = fit_lfdr_model(rest);
  } else {
    // Too few in-support atoms to fit; treat them as pure null.
    mod.pi0 = 1.0;
    mod.converged = true;
  }
  mod.pi0 *= 1.0 - w0;
  for (double& wm : mod.w) wm *= 1.0 - w0;
  mod.w0 = w0;
  return mod;
}

Mat atom_lfdrs(const PValueMatrix& p, const PvalueMixtureModel& model) {
  // A statistic beyond the entire bootstrap null sample (raw ECDF tail 0)
  // carries evidence below the resolution of B resamples; with alternative
  // mass at zero (the point-mass class, or a beta component whose density
  // is unbounded as p -> 0 since every shape is < 1) the limit of pi0 / f
  // is 0, so such atoms take lfdr 0 exactly. Without alternative mass the
  // limit is 1 and the plain formula applies.
  bool mass_at_zero = model.w0 > 0.0;
  for (std::size_t m = 0; m < model.a.size(); ++m)
    if (model.w[m] > 1e-12 && model.a[m] < 1.0) mass_at_zero = true;
  const bool have_raw = p.raw.rows == p.p.rows && p.raw.cols == p.p.cols;

  Mat l(p.p.rows, p.p.cols);
  for (std::size_t i = 0; i < p.p.a.size(); ++i) {
    if (mass_at_zero && have_raw && p.raw.a[i] == 0.0) {
      l.a[i] = 0.0;
      continue;
    }
    l.a[i] = std::clamp(model.pi0 / model.density(p.p.a[i]), 0.0, 1.0);
  }
  return l;
}

Mat modified_lfdrs(const Mat& lfdrs) {
  if (lfdrs.cols < 2) throw std::invalid_argument("modified_lfdrs: need K >= 2");
  Mat out = lfdrs;
  for (int j = 0; j < lfdrs.rows; ++j) {
    const double* row = lfdrs.row(j);
    // Two smallest positions, ties resolved by lowest set index.
    int i1 = 0;
    for (int k = 1; k < lfdrs.cols; ++k)
      if (row[k] < row[i1]) i1 = k;
    int i2 = (i1 == 0) ? 1 : 0;
    for (int k = 0; k < lfdrs.cols; ++k)
      if (k != i1 && row[k] < row[i2]) i2 = k;
    const double mean = 0.5 * (row[i1] + row[i2]);
    out(j, i1) = mean;
    out(j, i2) = mean;
  }
  return out;
}

std::vector<double> component_null_probs(const Mat& modified) {
  std::vector<double> q(modified.rows);
  for (int j = 0; j < modified.rows; ++j) {
    double prod = 1.0;
    for (int k = 0; k < modified.cols; ++k) prod *= modified(j, k);
    q[j] = prod;
  }
  return q;
}

std::pair<double, double> estimate_fdrs(const ActivationMatrix& rejected,
                                        const Mat& modified,
                                        const std::vector<double>& q) {
  if (rejected.J != modified.rows || rejected.K != modified.cols ||
      static_cast<int>(q.size()) != modified.rows)
    throw std::invalid_argument("estimate_fdrs: shape mismatch");
  double sum_l = 0.0, sum_q = 0.0;
  long atoms = 0, rows = 0;
  for (int j = 0; j < rejected.J; ++j) {
    bool any = false;
    for (int k = 0; k < rejected.K; ++k)
      if (rejected.at(j, k)) {
        sum_l += modified(j, k);
        ++atoms;
        any = true;
      }
    if (any) {
      sum_q += q[j];
      ++rows;
    }
  }
  const double fdr = atoms ? sum_l / atoms : 0.0;
  const double fdr_cmp = rows ? sum_q / rows : 0.0;
  return {fdr, fdr_cmp};
}

}  // namespace costid
