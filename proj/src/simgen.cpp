#include "costid/simgen.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <stdexcept>

#include "costid/kernels.hpp"
#include "costid/rng.hpp"

namespace costid {
namespace {

// Substream tags under the scenario seed.
constexpr std::uint64_t kStructTag = 1;
constexpr std::uint64_t kMixTag = 2;
constexpr std::uint64_t kFactorTag = 3;
constexpr std::uint64_t kIdioTag = 4;
constexpr std::uint64_t kNoiseTag = 5;
constexpr std::uint64_t kContamTag = 6;

double draw(rng::Stream& st, ComponentDist d) {
  return d == ComponentDist::gaussian ? st.normal() : st.laplace_unit();
}

// First `count` elements of a fresh uniform shuffle of [0, K).
std::vector<int> random_subset(rng::Stream& st, int K, int count) {
  std::vector<int> perm(K);
  std::iota(perm.begin(), perm.end(), 0);
  for (int i = K - 1; i > 0; --i) {
    const int j = static_cast<int>(st.below(static_cast<std::uint64_t>(i + 1)));
    std::swap(perm[i], perm[j]);
  }
  perm.resize(count);
  std::sort(perm.begin(), perm.end());
  return perm;
}

// Random I x J matrix with orthonormal columns: modified Gram-Schmidt with
// a re-orthogonalization pass (R diagonal positive by construction).
Mat random_orthogonal(rng::Stream& st, int I, int J) {
  Mat A(I, J);
  for (int i = 0; i < I; ++i)
    for (int j = 0; j < J; ++j) A(i, j) = st.normal();
  std::vector<double> col(I), prev(I);
  for (int j = 0; j < J; ++j) {
    for (int i = 0; i < I; ++i) col[i] = A(i, j);
    for (int pass = 0; pass < 2; ++pass) {
      for (int jp = 0; jp < j; ++jp) {
        for (int i = 0; i < I; ++i) prev[i] = A(i, jp);
        double proj = 0.0;
        for (int i = 0; i < I; ++i) proj += col[i] * prev[i];
        for (int i = 0; i < I; ++i) col[i] -= proj * prev[i];
      }
    }
    double nrm = 0.0;
    for (int i = 0; i < I; ++i) nrm += col[i] * col[i];
    nrm = std::sqrt(nrm);
    if (nrm < 1e-12)
      throw std::runtime_error("simgen: degenerate random mixing matrix");
    for (int i = 0; i < I; ++i) A(i, j) = col[i] / nrm;
  }
  return A;
}

}  // namespace

CorrelationStructure random_structure(const ScenarioConfig& cfg) {
  if (cfg.K < 2) throw std::invalid_argument("simgen: need K >= 2");
  if (cfg.J < 1) throw std::invalid_argument("simgen: need J >= 1");
  rng::Stream st(rng::derive(cfg.seed, {kStructTag}));

  // Component sizes: either fixed by the scenario or derived from pi0 so
  // that the D-th component spans 2 sets, the D-1-st spans 3, ...
  std::vector<std::pair<int, double>> comps;  // (set count, rho)
  if (!cfg.fixed_components.empty()) {
    comps = cfg.fixed_components;
    if (static_cast<int>(comps.size()) > cfg.J)
      throw std::invalid_argument("simgen: more fixed components than J");
    for (auto& [cnt, rho] : comps) {
      if (cnt < 2 || cnt > cfg.K)
        throw std::invalid_argument("simgen: fixed component set count outside [2, K]");
      if (rho <= 0.0 || rho > 1.0)
        throw std::invalid_argument("simgen: fixed component rho outside (0, 1]");
    }
  } else {
    if (cfg.pi0 < 0.0 || cfg.pi0 >= 1.0)
      throw std::invalid_argument("simgen: pi0 must be in [0, 1)");
    const double budget = (1.0 - cfg.pi0) * cfg.J * cfg.K;
    int D = 0;
    for (int d = 1; d <= cfg.J && d + 1 <= cfg.K; ++d) {
      const double nonzeros = 0.5 * (d + 1) * (d + 2) - 1;  // sum of d+1 .. 2
      if (nonzeros <= budget) D = d;
    }
    if (D == 0)
      throw std::invalid_argument(
          "simgen: pi0 too large for any correlated component (no feasible D)");
    const double mu1 = 0.85, span = 0.35;
    const double sigma = (D == 1) ? 0.0 : 0.33 * span / (D - 1);
    std::vector<double> rhos(D);
    for (int j = 0; j < D; ++j) {
      const double mu = (D == 1) ? mu1 : mu1 - span / (D - 1) * j;
      rhos[j] = std::clamp(mu + sigma * st.normal(), 0.05, 0.99);
    }
    // Keep the strength ordering invariant despite random draws.
    std::sort(rhos.begin(), rhos.end(), std::greater<double>());
    for (int j = 0; j < D; ++j) comps.emplace_back(D - j + 1, rhos[j]);
  }

  CorrelationStructure cs;
  cs.J = cfg.J;
  cs.K = cfg.K;
  cs.components.resize(cfg.J);
  for (std::size_t j = 0; j < comps.size(); ++j) {
    cs.components[j].sets = random_subset(st, cfg.K, comps[j].first);
    cs.components[j].rho = comps[j].second;
  }
  cs.validate();
  return cs;
}

std::pair<MultiSetSample, ActivationMatrix> generate(
    const ScenarioConfig& cfg, const CorrelationStructure& cs) {
  cs.validate();
  if (cs.J != cfg.J || cs.K != cfg.K)
    throw std::invalid_argument("simgen: structure does not match scenario");
  const int I = cfg.obs_dim();
  const int J = cfg.J;
  const int K = cfg.K;
  const int N = cfg.N;
  if (I < J)
    throw std::invalid_argument("simgen: observation dimension below J");
  const auto& kn = kern::active();

  // Latent components per set: S_k is J x N.
  std::vector<Mat> S(K, Mat(J, N));
  std::vector<double> z(N);
  for (int j = 0; j < J; ++j) {
    const Component& c = cs.components[j];
    if (!c.sets.empty()) {
      rng::Stream zs(rng::derive(cfg.seed, {kFactorTag, static_cast<std::uint64_t>(j)}));
      for (int n = 0; n < N; ++n) z[n] = draw(zs, cfg.dist);
    }
    for (int k = 0; k < K; ++k) {
      rng::Stream es(rng::derive(cfg.seed, {kIdioTag, static_cast<std::uint64_t>(j),
                                            static_cast<std::uint64_t>(k)}));
      double* row = S[k].row(j);
      const auto member = std::find(c.sets.begin(), c.sets.end(), k);
      if (member != c.sets.end()) {
        const std::size_t pos = member - c.sets.begin();
        const double a = c.loadings.empty() ? std::sqrt(c.rho) : c.loadings[pos];
        const double b = std::sqrt(1.0 - a * a);
        for (int n = 0; n < N; ++n) row[n] = a * z[n] + b * draw(es, cfg.dist);
      } else {
        for (int n = 0; n < N; ++n) row[n] = draw(es, cfg.dist);
      }
    }
  }

  // Mix and add noise: X_k = A_k S_k + sigma * G.
  const double sigma = std::sqrt(std::pow(10.0, -cfg.snr_db / 10.0));
  MultiSetSample out;
  out.N = N;
  out.sets.assign(K, Mat(I, N));
  for (int k = 0; k < K; ++k) {
    rng::Stream ms(rng::derive(cfg.seed, {kMixTag, static_cast<std::uint64_t>(k)}));
    const Mat A = random_orthogonal(ms, I, J);
    Mat& X = out.sets[k];
    for (int i = 0; i < I; ++i)
      for (int j = 0; j < J; ++j) kn.axpy(X.row(i), A(i, j), S[k].row(j), N);
    rng::Stream ns(rng::derive(cfg.seed, {kNoiseTag, static_cast<std::uint64_t>(k)}));
    for (int i = 0; i < I; ++i) {
      double* row = X.row(i);
      for (int n = 0; n < N; ++n) row[n] += sigma * ns.normal();
    }
  }

  // Contamination corrupts each set independently (its own coin stream per
  // set). A contamination event shared across sets would itself be a
  // cross-set dependence — with a constant shift it adds covariance
  // delta^2 eps (1 - eps) between every contaminated row pair across sets,
  // i.e. a spurious common component the detector would rightly find.
  // Outliers are meant to distort the noise, not the correlation structure.
  const Contamination& ct = cfg.contamination;
  if (ct.kind != Contamination::Kind::none && (ct.eps < 0.0 || ct.eps > 1.0))
    throw std::invalid_argument("simgen: contamination eps outside [0, 1]");
  if (ct.kind == Contamination::Kind::pointmass) {
    for (int k : ct.sets)
      if (k < 0 || k >= K)
        throw std::invalid_argument("simgen: pointmass set index outside [1, K]");
    for (int i : ct.rows)
      if (i < 0 || i >= I)
        throw std::invalid_argument("simgen: pointmass row index outside [1, I]");
  }
  if (ct.kind != Contamination::Kind::none && ct.eps > 0.0) {
    if (ct.kind == Contamination::Kind::wideband) {
      for (int k = 0; k < K; ++k) {
        rng::Stream crs(rng::derive(
            cfg.seed, {kContamTag, static_cast<std::uint64_t>(k)}));
        for (int n = 0; n < N; ++n) {
          if (crs.uniform() >= ct.eps) continue;
          for (int i = 0; i < I; ++i)
            out.sets[k](i, n) += 3.0 * sigma * crs.normal();
        }
      }
    } else {  // pointmass
      for (int k : ct.sets) {
        rng::Stream crs(rng::derive(
            cfg.seed, {kContamTag, static_cast<std::uint64_t>(k)}));
        for (int n = 0; n < N; ++n) {
          if (crs.uniform() >= ct.eps) continue;
          for (int i : ct.rows) out.sets[k](i, n) += ct.delta;
        }
      }
    }
  }
  return {std::move(out), structure_to_activation(cs)};
}

}  // namespace costid
