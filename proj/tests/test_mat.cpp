#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "costid/mat.hpp"
#include "costid/rng.hpp"

#ifdef COSTID_TEST_HAVE_EIGEN
#include <Eigen/Dense>
#endif

using costid::Mat;
using costid::rng::Stream;
using costid::sym_eigen;

namespace {

Mat random_symmetric(int n, std::uint64_t seed) {
  Stream st(seed);
  Mat a(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j <= i; ++j) {
      const double v = st.normal();
      a(i, j) = v;
      a(j, i) = v;
    }
  }
  return a;
}

double frob(const Mat& a) {
  double s = 0.0;
  for (double v : a.a) s += v * v;
  return std::sqrt(s);
}

}  // namespace

TEST_CASE("identity and permuted diagonal matrices") {
  std::vector<double> ev;
  Mat v;
  sym_eigen(Mat::identity(4), ev, v);
  for (double l : ev) CHECK(l == doctest::Approx(1.0));

  Mat d(4, 4);
  d(0, 0) = 5;
  d(1, 1) = 3;
  d(2, 2) = 1;
  d(3, 3) = 4;
  sym_eigen(d, ev, v);
  const std::vector<double> want = {5, 4, 3, 1};
  for (int i = 0; i < 4; ++i) CHECK(ev[i] == doctest::Approx(want[i]));
  // Eigenvector for 5 is e_0, for 4 is e_3, signs positive.
  CHECK(v(0, 0) == doctest::Approx(1.0));
  CHECK(v(1, 3) == doctest::Approx(1.0));
}

TEST_CASE("2x2 correlation matrix has eigenvalues 1 +- rho") {
  const double rho = 0.3;
  Mat a(2, 2);
  a(0, 0) = a(1, 1) = 1.0;
  a(0, 1) = a(1, 0) = rho;
  std::vector<double> ev;
  Mat v;
  sym_eigen(a, ev, v);
  CHECK(ev[0] == doctest::Approx(1.0 + rho));
  CHECK(ev[1] == doctest::Approx(1.0 - rho));
  const double r = 1.0 / std::sqrt(2.0);
  CHECK(v(0, 0) == doctest::Approx(r));
  CHECK(v(0, 1) == doctest::Approx(r));
  // Sign convention: tied magnitudes resolved toward the first index.
  CHECK(v(1, 0) == doctest::Approx(r));
  CHECK(v(1, 1) == doctest::Approx(-r));
}

TEST_CASE("tridiagonal Toeplitz eigenvalues match the closed form") {
  // diag 2, off-diagonal -1: eigenvalues 2 - 2 cos(k pi / (n+1)).
  const int n = 12;
  Mat a(n, n);
  for (int i = 0; i < n; ++i) {
    a(i, i) = 2.0;
    if (i + 1 < n) a(i, i + 1) = a(i + 1, i) = -1.0;
  }
  std::vector<double> ev;
  Mat v;
  sym_eigen(a, ev, v);
  std::vector<double> want;
  for (int k = 1; k <= n; ++k) {
    want.push_back(2.0 - 2.0 * std::cos(k * std::numbers::pi / (n + 1)));
  }
  std::sort(want.rbegin(), want.rend());
  for (int i = 0; i < n; ++i) {
    CHECK(ev[i] == doctest::Approx(want[i]).epsilon(1e-12));
  }
}

TEST_CASE("residuals, orthonormality, trace, and ordering on random input") {
  for (std::uint64_t seed : {11ULL, 22ULL, 33ULL}) {
    const int n = 30;
    const Mat a = random_symmetric(n, seed);
    std::vector<double> ev;
    Mat v;
    sym_eigen(a, ev, v);

    for (int i = 1; i < n; ++i) CHECK(ev[i - 1] >= ev[i]);

    double trace = 0.0, sum = 0.0, sumsq = 0.0, fr = frob(a);
    for (int i = 0; i < n; ++i) trace += a(i, i);
    for (double l : ev) {
      sum += l;
      sumsq += l * l;
    }
    CHECK(sum == doctest::Approx(trace).epsilon(1e-10));
    CHECK(std::sqrt(sumsq) == doctest::Approx(fr).epsilon(1e-10));

    // ||A v - lambda v|| small, rows of v orthonormal.
    for (int j = 0; j < n; ++j) {
      double res = 0.0;
      for (int i = 0; i < n; ++i) {
        double av = 0.0;
        for (int k = 0; k < n; ++k) av += a(i, k) * v(j, k);
        res += (av - ev[j] * v(j, i)) * (av - ev[j] * v(j, i));
      }
      CHECK(std::sqrt(res) <= 1e-9 * fr);
      for (int j2 = 0; j2 <= j; ++j2) {
        double d = 0.0;
        for (int k = 0; k < n; ++k) d += v(j, k) * v(j2, k);
        CHECK(d == doctest::Approx(j == j2 ? 1.0 : 0.0).epsilon(1e-10));
      }
    }
  }
}

TEST_CASE("clustered eigenvalues stay accurate") {
  // diag(1, 1+1e-9, 1+2e-9, 5) rotated by a random orthogonal similarity
  // built from Householder reflections.
  const int n = 4;
  Mat d(n, n);
  d(0, 0) = 1.0;
  d(1, 1) = 1.0 + 1e-9;
  d(2, 2) = 1.0 + 2e-9;
  d(3, 3) = 5.0;
  Stream st(7);
  std::vector<double> w(n);
  double wn = 0.0;
  for (double& x : w) {
    x = st.normal();
    wn += x * x;
  }
  for (double& x : w) x /= std::sqrt(wn);
  // H = I - 2 w w^T;  A = H D H
  Mat h = Mat::identity(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) h(i, j) -= 2.0 * w[i] * w[j];
  Mat hd(n, n), a(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double s = 0.0;
      for (int k = 0; k < n; ++k) s += h(i, k) * d(k, j);
      hd(i, j) = s;
    }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double s = 0.0;
      for (int k = 0; k < n; ++k) s += hd(i, k) * h(k, j);
      a(i, j) = s;
    }
  std::vector<double> ev;
  Mat v;
  sym_eigen(a, ev, v);
  CHECK(ev[0] == doctest::Approx(5.0).epsilon(1e-12));
  CHECK(ev[1] == doctest::Approx(1.0).epsilon(1e-7));
  CHECK(ev[3] == doctest::Approx(1.0).epsilon(1e-7));
}

TEST_CASE("edge cases") {
  std::vector<double> ev;
  Mat v;
  sym_eigen(Mat(0, 0), ev, v);
  CHECK(ev.empty());
  Mat one(1, 1);
  one(0, 0) = -2.5;
  sym_eigen(one, ev, v);
  CHECK(ev[0] == -2.5);
  CHECK(v(0, 0) == 1.0);
  CHECK_THROWS_AS(sym_eigen(Mat(2, 3), ev, v), std::invalid_argument);
}

#ifdef COSTID_TEST_HAVE_EIGEN
TEST_CASE("agrees with Eigen's SelfAdjointEigenSolver") {
  for (int n : {5, 17, 40}) {
    const Mat a = random_symmetric(n, 1000 + n);
    std::vector<double> ev;
    Mat v;
    sym_eigen(a, ev, v);

    Eigen::MatrixXd ea(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) ea(i, j) = a(i, j);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(ea);
    std::vector<double> oracle(solver.eigenvalues().data(),
                               solver.eigenvalues().data() + n);
    std::sort(oracle.rbegin(), oracle.rend());

    const double scale = std::max(1.0, std::abs(oracle[0]));
    for (int i = 0; i < n; ++i) {
      CHECK(ev[i] == doctest::Approx(oracle[i]).epsilon(1e-9).scale(scale));
    }
    // Eigenvectors match up to sign (random spectra are simple).
    for (int j = 0; j < n; ++j) {
      int oi = 0;  // oracle column with the matching eigenvalue
      double best = 1e300;
      for (int c = 0; c < n; ++c) {
        const double d = std::abs(solver.eigenvalues()(c) - ev[j]);
        if (d < best) {
          best = d;
          oi = c;
        }
      }
      double dot = 0.0;
      for (int k = 0; k < n; ++k) dot += v(j, k) * solver.eigenvectors()(k, oi);
      CHECK(std::abs(dot) == doctest::Approx(1.0).epsilon(1e-8));
    }
  }
}
#endif
