#pragma once

// Nonparametric paired bootstrap of chunk norms: empirical nulls per atom,
// test statistics, and upper-tail p-values.

#include <cstdint>
#include <vector>

#include "costid/coherence.hpp"
#include "costid/model.hpp"

namespace costid {

struct BootstrapNull {
  int B = 0;
  int J = 0;
  int K = 0;
  std::vector<double> boot_norms;               // B x J x K chunk norms c*
  Mat boot_means;                               // J x K, mean over b
  std::vector<std::vector<double>> null_stats;  // per (j,k): sorted c* - mean
  Mat boot_eigenvalues;                         // B x J leading eigenvalues
                                                // (consumed by the two-step
                                                // baseline's order test)

  double norm(int b, int j, int k) const {
    return boot_norms[(static_cast<std::size_t>(b) * J + j) * K + k];
  }
  const std::vector<double>& stats(int j, int k) const {
    return null_stats[static_cast<std::size_t>(j) * K + k];
  }
};

struct PValueMatrix {
  Mat p;    // J x K, entries in (0, 1] (plus-one corrected)
  Mat raw;  // J x K raw ECDF tail #{T* >= T}/B in [0, 1]; a raw entry of 0
            // marks a statistic beyond the entire null sample. May be empty
            // for hand-built fixtures; consumers must tolerate that.
};

// Draw B resamples of N column indices (with replacement, one index vector
// shared by all K sets), recompute the coherence spectrum of each resample,
// and collect chunk norms. Deterministic given seed for any worker count:
// resample b uses the substream derive(seed, {b}); a singular resample is
// redrawn from that same substream, at most 10 times, then the error
// propagates. J = 0 selects min_k I_k.
BootstrapNull bootstrap_chunk_norms(const MultiSetSample& s, int J, int B,
                                    std::uint64_t seed, double ridge = 0.0,
                                    int workers = 1);

// T_k^{(j)} = c_k^{(j)} - min(mu*_k^{(j)}, 1/K).
Mat test_statistics(const CoherenceSpectrum& spec, const BootstrapNull& null);

// Upper-tail bootstrap p-values with plus-one correction:
// p = (1 + #{b : T*_b >= T}) / (B + 1), per atom against its own null.
PValueMatrix p_values(const Mat& T, const BootstrapNull& null);

}  // namespace costid
