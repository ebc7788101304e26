#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstddef>
#include <vector>

#include "costid/kernels.hpp"
#include "costid/rng.hpp"

using costid::rng::Stream;
using namespace costid::kern;

namespace {

// Naive reference semantics, written independently of the library loops.
double ref_dot(const std::vector<double>& x, const std::vector<double>& y) {
  long double s = 0.0L;
  for (std::size_t i = 0; i < x.size(); ++i) s += (long double)x[i] * y[i];
  return (double)s;
}

std::vector<double> rand_vec(Stream& st, std::size_t n, double lo = -1.0,
                             double hi = 1.0) {
  std::vector<double> v(n);
  for (double& x : v) x = lo + (hi - lo) * st.uniform();
  return v;
}

const std::size_t kSizes[] = {0, 1, 2, 3, 7, 8, 15, 16, 17, 31, 64, 100, 1003};

std::vector<const Kernels*> backends() {
  std::vector<const Kernels*> b{&scalar_kernels()};
#if defined(__x86_64__) || defined(_M_X64)
  if (cpu_has_avx2()) b.push_back(&avx2_kernels());
#endif
#if defined(__aarch64__)
  b.push_back(&neon_kernels());
#endif
  return b;
}

}  // namespace

TEST_CASE("dot matches a long-double reference on every backend") {
  Stream st(costid::rng::derive(99, {1}));
  for (const Kernels* k : backends()) {
    for (std::size_t n : kSizes) {
      auto x = rand_vec(st, n), y = rand_vec(st, n);
      const double want = ref_dot(x, y);
      const double got = k->dot(x.data(), y.data(), n);
      CHECK(got == doctest::Approx(want).epsilon(1e-12));
    }
  }
}

TEST_CASE("axpy, scale, sub_scalar, rot, sum match reference semantics") {
  Stream st(costid::rng::derive(99, {2}));
  for (const Kernels* k : backends()) {
    CAPTURE(k->name);
    for (std::size_t n : kSizes) {
      auto x = rand_vec(st, n), y = rand_vec(st, n);
      const double a = 0.7, c = std::cos(0.3), s = std::sin(0.3);

      auto y2 = y;
      k->axpy(y2.data(), a, x.data(), n);
      for (std::size_t i = 0; i < n; ++i) {
        CHECK(y2[i] == doctest::Approx(y[i] + a * x[i]).epsilon(1e-14));
      }

      auto x2 = x;
      k->scale(x2.data(), a, n);
      for (std::size_t i = 0; i < n; ++i) {
        CHECK(x2[i] == doctest::Approx(a * x[i]).epsilon(1e-15));
      }

      auto x3 = x;
      k->sub_scalar(x3.data(), a, n);
      for (std::size_t i = 0; i < n; ++i) CHECK(x3[i] == x[i] - a);

      auto rx = x, ry = y;
      k->rot(rx.data(), ry.data(), c, s, n);
      for (std::size_t i = 0; i < n; ++i) {
        CHECK(rx[i] == doctest::Approx(c * x[i] - s * y[i]).epsilon(1e-14));
        CHECK(ry[i] == doctest::Approx(s * x[i] + c * y[i]).epsilon(1e-14));
      }

      long double total = 0.0L;
      for (double v : x) total += v;
      CHECK(k->sum(x.data(), n) == doctest::Approx((double)total).epsilon(1e-12));
    }
  }
}

TEST_CASE("gather is exact on every backend") {
  Stream st(costid::rng::derive(99, {3}));
  for (const Kernels* k : backends()) {
    for (std::size_t n : kSizes) {
      auto src = rand_vec(st, n ? n : 1);
      std::vector<std::int32_t> idx(n);
      for (auto& i : idx) i = (std::int32_t)st.below(src.size());
      std::vector<double> dst(n, -7.0);
      k->gather(dst.data(), src.data(), idx.data(), n);
      for (std::size_t i = 0; i < n; ++i) CHECK(dst[i] == src[idx[i]]);
    }
  }
}

TEST_CASE("backends agree with each other within tight tolerance") {
  const auto bs = backends();
  if (bs.size() < 2) return;  // only the scalar backend available
  Stream st(costid::rng::derive(99, {4}));
  const std::size_t n = 2048;
  auto x = rand_vec(st, n), y = rand_vec(st, n);
  const double d0 = bs[0]->dot(x.data(), y.data(), n);
  for (std::size_t i = 1; i < bs.size(); ++i) {
    CHECK(bs[i]->dot(x.data(), y.data(), n) ==
          doctest::Approx(d0).epsilon(1e-13));
  }
}

TEST_CASE("force_backend switches and rejects unknown names") {
  const std::string before = active().name;
  force_backend("scalar");
  CHECK(std::string(active().name) == "scalar");
  CHECK_THROWS_AS(force_backend("sse9000"), std::invalid_argument);
  force_backend("auto");
  const std::string after = active().name;
  CHECK((after == "scalar" || after == "avx2" || after == "neon"));
  force_backend(before);  // restore whatever dispatch picked initially
}
