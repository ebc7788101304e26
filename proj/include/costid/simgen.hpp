#pragma once

// Synthetic scenario generation: randomized correlation structures, factor
// model components (Gaussian or standardized Laplacian), random orthogonal
// mixing, SNR-calibrated Gaussian noise, and epsilon-contamination.

#include <cstdint>
#include <utility>
#include <vector>

#include "costid/model.hpp"

namespace costid {

enum class ComponentDist { gaussian, laplacian };

struct Contamination {
  enum class Kind { none, wideband, pointmass };
  Kind kind = Kind::none;
  double eps = 0.0;           // contaminated-sample fraction
  double delta = 10.0;        // point-mass value
  std::vector<int> rows;      // pointmass: affected observation rows
  std::vector<int> sets;      // pointmass: affected sets

  static Contamination none() { return {}; }
  static Contamination wideband(double eps) {
    Contamination c;
    c.kind = Kind::wideband;
    c.eps = eps;
    return c;
  }
  static Contamination pointmass(double eps, double delta, std::vector<int> rows,
                                 std::vector<int> sets) {
    Contamination c;
    c.kind = Kind::pointmass;
    c.eps = eps;
    c.delta = delta;
    c.rows = std::move(rows);
    c.sets = std::move(sets);
    return c;
  }
};

struct ScenarioConfig {
  int K = 2;
  int J = 2;
  int N = 100;
  int I = 0;  // observation dimension per set; 0 means I = J
  double snr_db = 5.0;
  double pi0 = 0.7;  // fraction of zeros in the activation matrix
  ComponentDist dist = ComponentDist::gaussian;
  Contamination contamination;
  std::uint64_t seed = 1;
  // When nonempty, the structure uses exactly these (set count, rho) pairs
  // instead of deriving counts from pi0; memberships stay random.
  std::vector<std::pair<int, double>> fixed_components;

  int obs_dim() const { return I > 0 ? I : J; }
};

// Draw a correlation structure: D largest such that the implied nonzero
// count fits (1 - pi0) * J * K with the D-th component spanning 2 sets, the
// D-1-st 3 sets, and so on; memberships uniform at random; rho_j ~
// Normal(mu_j, sigma) with mu_j = 0.85 - (0.35/(D-1))(j-1) and sigma =
// 0.33 * 0.35/(D-1) (D = 1: mu = 0.85, sigma = 0), clamped to [0.05, 0.99]
// and sorted descending. Throws std::invalid_argument when no D >= 1 fits.
CorrelationStructure random_structure(const ScenarioConfig& cfg);

// Factor model: s = a_k z + sqrt(1 - a_k^2) e inside S_j (a_k = sqrt(rho_j)
// unless per-set loadings are given), s = e outside; random orthogonal
// I x J mixing per set (QR of a standard normal matrix, R-diagonal
// positive); additive Gaussian noise with variance 10^(-SNR/10); optional
// contamination. Returns the sample and the ground-truth activation matrix.
std::pair<MultiSetSample, ActivationMatrix> generate(
    const ScenarioConfig& cfg, const CorrelationStructure& cs);

}  // namespace costid
