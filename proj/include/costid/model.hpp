#pragma once

// Domain types shared by all stages: multiset samples, ground-truth
// correlation structures, and binary activation matrices.

#include <cstdint>
#include <vector>

#include "costid/mat.hpp"

namespace costid {

// K paired observation matrices; set k is I_k rows (dimensions) x N columns
// (samples). Column n is the same realization across all sets.
struct MultiSetSample {
  std::vector<Mat> sets;
  int N = 0;

  int K() const { return static_cast<int>(sets.size()); }
  std::vector<int> dims() const {
    std::vector<int> d;
    d.reserve(sets.size());
    for (const Mat& m : sets) d.push_back(m.rows);
    return d;
  }
  int total_dim() const {
    int t = 0;
    for (const Mat& m : sets) t += m.rows;
    return t;
  }
};

// Throws std::invalid_argument naming the offending set on dimension
// mismatch, or when N is too small for invertible per-set covariances
// (N <= max_k I_k).
void validate_sample(const MultiSetSample& s);

// One latent component: the collection of sets it is correlated across
// (0-based, size 0 or >= 2) and the common pairwise coefficient rho.
// `loadings`, when nonempty, gives per-set factor loadings a_k (one per
// entry of `sets`, each in (0,1]) realizing unequal pairwise coefficients
// rho_{k,k'} = a_k * a_{k'}; when empty all loadings are sqrt(rho).
struct Component {
  std::vector<int> sets;
  double rho = 0.0;
  std::vector<double> loadings;
};

struct CorrelationStructure {
  int J = 0;
  int K = 0;
  std::vector<Component> components;  // length J, sorted by decreasing strength

  int D() const {
    int d = 0;
    for (const Component& c : components)
      if (c.sets.size() >= 2) ++d;
    return d;
  }
  // Throws std::invalid_argument on |S_j| == 1, out-of-range set indices,
  // rho outside (0,1] for correlated components, or bad loadings.
  void validate() const;
};

// J x K binary matrix: entry (j, k) = 1 iff component j is correlated in
// set k.
struct ActivationMatrix {
  int J = 0;
  int K = 0;
  std::vector<std::uint8_t> m;

  ActivationMatrix() = default;
  ActivationMatrix(int j, int k)
      : J(j), K(k), m(static_cast<std::size_t>(j) * k, 0) {}

  std::uint8_t& at(int j, int k) { return m[static_cast<std::size_t>(j) * K + k]; }
  std::uint8_t at(int j, int k) const {
    return m[static_cast<std::size_t>(j) * K + k];
  }
  int row_sum(int j) const {
    int s = 0;
    for (int k = 0; k < K; ++k) s += at(j, k);
    return s;
  }
  // True iff every row sum is 0 or >= 2.
  bool rows_feasible() const {
    for (int j = 0; j < J; ++j)
      if (row_sum(j) == 1) return false;
    return true;
  }
  bool operator==(const ActivationMatrix& o) const {
    return J == o.J && K == o.K && m == o.m;
  }
};

ActivationMatrix structure_to_activation(const CorrelationStructure& cs);

// Recover a structure from an activation matrix (coefficients are not
// encoded in the matrix; all correlated components get `rho`). Throws on
// row sums of exactly 1.
CorrelationStructure structure_from_activation(const ActivationMatrix& m,
                                               double rho = 1.0);

}  // namespace costid
