#include "costid/model.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace costid {

void validate_sample(const MultiSetSample& s) {
  if (s.K() < 2) throw std::invalid_argument("sample: need K >= 2 sets");
  if (s.N < 2) throw std::invalid_argument("sample: need N >= 2 samples");
  int max_dim = 0;
  for (int k = 0; k < s.K(); ++k) {
    const Mat& x = s.sets[k];
    if (x.rows < 1)
      throw std::invalid_argument("sample: set " + std::to_string(k + 1) +
                                  " has no dimensions");
    if (x.cols != s.N)
      throw std::invalid_argument(
          "sample: set " + std::to_string(k + 1) + " has " +
          std::to_string(x.cols) + " samples, expected N = " + std::to_string(s.N));
    max_dim = std::max(max_dim, x.rows);
  }
  if (s.N <= max_dim)
    throw std::invalid_argument(
        "sample: too few samples (N = " + std::to_string(s.N) +
        " <= max set dimension " + std::to_string(max_dim) +
        "); per-set covariances would be singular");
}

void CorrelationStructure::validate() const {
  if (K < 2) throw std::invalid_argument("structure: need K >= 2");
  if (static_cast<int>(components.size()) != J)
    throw std::invalid_argument("structure: component count != J");
  for (int j = 0; j < J; ++j) {
    const Component& c = components[j];
    if (c.sets.size() == 1)
      throw std::invalid_argument("structure: component " + std::to_string(j + 1) +
                                  " correlated across exactly one set");
    for (int k : c.sets)
      if (k < 0 || k >= K)
        throw std::invalid_argument("structure: component " + std::to_string(j + 1) +
                                    " references set outside [1, K]");
    if (c.sets.size() >= 2 && (c.rho <= 0.0 || c.rho > 1.0))
      throw std::invalid_argument("structure: component " + std::to_string(j + 1) +
                                  " needs rho in (0, 1]");
    if (!c.loadings.empty()) {
      if (c.loadings.size() != c.sets.size())
        throw std::invalid_argument("structure: component " + std::to_string(j + 1) +
                                    " loadings/sets length mismatch");
      for (double a : c.loadings)
        if (a <= 0.0 || a > 1.0)
          throw std::invalid_argument("structure: component " +
                                      std::to_string(j + 1) +
                                      " needs loadings in (0, 1]");
    }
  }
}

ActivationMatrix structure_to_activation(const CorrelationStructure& cs) {
  cs.validate();
  ActivationMatrix m(cs.J, cs.K);
  for (int j = 0; j < cs.J; ++j)
    for (int k : cs.components[j].sets) m.at(j, k) = 1;
  return m;
}

CorrelationStructure structure_from_activation(const ActivationMatrix& m,
                                               double rho) {
  CorrelationStructure cs;
  cs.J = m.J;
  cs.K = m.K;
  cs.components.resize(m.J);
  for (int j = 0; j < m.J; ++j) {
    if (m.row_sum(j) == 1)
      throw std::invalid_argument("activation: row " + std::to_string(j + 1) +
                                  " has sum exactly 1");
    Component& c = cs.components[j];
    for (int k = 0; k < m.K; ++k)
      if (m.at(j, k)) c.sets.push_back(k);
    if (!c.sets.empty()) c.rho = rho;
  }
  return cs;
}

}  // namespace costid
