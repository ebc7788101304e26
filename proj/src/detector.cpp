#include "costid/detector.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>
#include <tuple>

#include "costid/lfdr.hpp"
#include "costid/rng.hpp"

namespace costid {
namespace {

struct Tuple {
  double value;
  int j;
  int k;
  bool operator<(const Tuple& o) const {
    return std::tie(value, j, k) < std::tie(o.value, o.j, o.k);
  }
};

}  // namespace

int greedy_prefix(const std::vector<double>& sorted_values, double alpha) {
  double acc = 0.0;
  int m = 0;
  for (std::size_t i = 0; i < sorted_values.size(); ++i) {
    acc += sorted_values[i];
    // Values ascend, so cumulative means are non-decreasing: the first
    // violation is final.
    if (acc > alpha * static_cast<double>(i + 1)) break;
    m = static_cast<int>(i + 1);
  }
  return m;
}

DetectionResult detect(const Mat& lfdrs, double alpha, double alpha_cmp,
                       std::uint64_t seed) {
  if (!(alpha > 0.0 && alpha < 1.0))
    throw std::invalid_argument("detect: alpha must be in (0, 1)");
  if (!(alpha_cmp > 0.0 && alpha_cmp <= 1.0))
    throw std::invalid_argument("detect: alpha_cmp must be in (0, 1]");
  const int J = lfdrs.rows;
  const int K = lfdrs.cols;
  const Mat lt = modified_lfdrs(lfdrs);
  const std::vector<double> q = component_null_probs(lt);

  DetectionResult res;
  res.M = ActivationMatrix(J, K);
  rng::Stream coin(rng::derive(seed, {0x7fdbULL}));

  std::vector<char> candidate(J, 1);
  std::vector<Tuple> tuples;
  std::vector<double> prefix_sum;
  std::vector<int> row_count(J, 0);

  for (;;) {
    // Sort the candidate atoms by modified lfdr (deterministic ties).
    tuples.clear();
    for (int j = 0; j < J; ++j) {
      if (!candidate[j]) continue;
      for (int k = 0; k < K; ++k) tuples.push_back({lt(j, k), j, k});
    }
    std::sort(tuples.begin(), tuples.end());
    prefix_sum.assign(tuples.size() + 1, 0.0);
    for (std::size_t i = 0; i < tuples.size(); ++i)
      prefix_sum[i + 1] = prefix_sum[i] + tuples[i].value;
    const auto mean_ok = [&](int m) {
      return prefix_sum[m] <= alpha * static_cast<double>(m);
    };
    int m = 0;
    for (std::size_t i = 0; i < tuples.size(); ++i) {
      if (!mean_ok(static_cast<int>(i + 1))) break;
      m = static_cast<int>(i + 1);
    }

    // Pairing fix-up: if the boundary tuple is an averaged pair member and
    // its partner is not already inside the prefix, move the boundary by
    // +-1 (fair coin); +1 must keep the mean constraint, else fall to -1.
    if (m >= 1) {
      const Tuple& bt = tuples[m - 1];
      if (lt(bt.j, bt.k) != lfdrs(bt.j, bt.k)) {
        bool earlier_same_row = false;
        for (int i = 0; i < m - 1 && !earlier_same_row; ++i)
          earlier_same_row = (tuples[i].j == bt.j);
        if (!earlier_same_row) {
          res.fixup_triggered = true;
          const bool up = coin.uniform() < 0.5;
          if (up && m + 1 <= static_cast<int>(tuples.size()) && mean_ok(m + 1))
            m += 1;
          else
            m -= 1;
        }
      }
    }

    // Exact-tie repair: equal pair members satisfy lt == lfdrs, so the
    // fix-up above cannot see a split pair. Values ascend, so dropping the
    // last element keeps the mean constraint intact.
    std::fill(row_count.begin(), row_count.end(), 0);
    for (int i = 0; i < m; ++i) ++row_count[tuples[i].j];
    while (m >= 1 && row_count[tuples[m - 1].j] == 1) {
      --row_count[tuples[m - 1].j];
      --m;
      ++res.singleton_repairs;
    }

    // Component-level FDR over the rejected rows.
    double sum_q = 0.0;
    int rows = 0;
    for (int j = 0; j < J; ++j)
      if (row_count[j] > 0) {
        sum_q += q[j];
        ++rows;
      }
    const double fdr_cmp = rows ? sum_q / rows : 0.0;
    if (fdr_cmp > alpha_cmp) {
      // Among rejected components with the fewest atom rejections, remove
      // the one with the largest null probability (ties: lowest index).
      int nu = std::numeric_limits<int>::max();
      for (int j = 0; j < J; ++j)
        if (row_count[j] > 0) nu = std::min(nu, row_count[j]);
      int victim = -1;
      for (int j = 0; j < J; ++j)
        if (row_count[j] == nu && (victim < 0 || q[j] > q[victim])) victim = j;
      candidate[victim] = 0;
      res.removed_components.push_back(victim);
      continue;  // re-sort the surviving candidates and retry
    }

    for (int i = 0; i < m; ++i) res.M.at(tuples[i].j, tuples[i].k) = 1;
    res.m_final = m;
    res.fdr_hat = m ? prefix_sum[m] / m : 0.0;
    res.fdr_cmp_hat = fdr_cmp;
    return res;
  }
}

}  // namespace costid
