#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

#include "hetphase/errors.hpp"
#include "hetphase/rng.hpp"
#include "hetphase/special_fn.hpp"

using namespace hetphase;

namespace {

// Oracle: explicit finite sum L_n^a(x) = sum_k (-1)^k C(n+a, n-k) x^k / k!,
// accumulated in quad precision with term ratios, independent of the upward
// recurrence under test. The alternating sum cancels by ~17 digits at the
// far corner (n=30, x=50), so double or long double would not do as an
// oracle here.
double laguerre_explicit(int n, int alpha, double x) {
  __float128 t = 1; // C(n+alpha, n)
  for (int i = 1; i <= n; ++i) t = t * (alpha + i) / i;
  __float128 sum = t;
  for (int k = 1; k <= n; ++k) {
    t = t * -static_cast<__float128>(x) * (n - k + 1) /
        (static_cast<__float128>(k) * (alpha + k));
    sum += t;
  }
  return static_cast<double>(sum);
}

// Oracle: composite Simpson of (2/sqrt(pi)) exp(-t^2) on [0, x].
double erf_quadrature(double x) {
  const int panels = 8192;
  const double h = x / panels;
  const auto f = [](double t) { return std::exp(-t * t); };
  long double acc = f(0.0) + f(x);
  for (int i = 1; i < panels; ++i) acc += (i % 2 == 1 ? 4.0L : 2.0L) * f(i * h);
  return static_cast<double>(2.0L / 1.77245385090551602729816748334L * acc * h / 3.0L);
}

double rel_diff(double a, double b) {
  const double scale = std::max(std::abs(a), std::abs(b));
  return scale == 0.0 ? 0.0 : std::abs(a - b) / scale;
}

} // namespace

TEST_CASE("laguerre: closed low-order values") {
  CHECK(laguerre({0, 3}, 7.5) == 1.0);
  CHECK(laguerre({1, 0}, 2.0) == doctest::Approx(-1.0).epsilon(1e-15));
  // L_2(x) = 1 - 2x + x^2/2 evaluated independently
  CHECK(laguerre({2, 0}, 1.0) == doctest::Approx(1.0 - 2.0 + 0.5).epsilon(1e-15));
}

TEST_CASE("laguerre: recurrence matches extended-precision explicit sum") {
  double worst = 0.0;
  for (int n = 0; n <= 30; ++n)
    for (int alpha = 0; alpha <= 10; ++alpha)
      for (int i = 0; i <= 100; ++i) {
        const double x = 0.5 * i;
        const double got = laguerre({n, alpha}, x);
        const double want = laguerre_explicit(n, alpha, x);
        worst = std::max(worst, rel_diff(got, want));
      }
  CHECK(worst <= 1e-9);
}

TEST_CASE("laguerre: rejects bad orders") {
  CHECK_THROWS_AS(laguerre({-1, 0}, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(laguerre({0, -2}, 1.0), std::invalid_argument);
}

TEST_CASE("hermite: closed low-order values") {
  CHECK(hermite(0, 3.2) == 1.0);
  CHECK(hermite(1, 3.2) == doctest::Approx(6.4).epsilon(1e-15));
  // H_3(x) = 8x^3 - 12x
  CHECK(hermite(3, 1.0) == doctest::Approx(8.0 - 12.0).epsilon(1e-15));
  CHECK(hermite(4, 0.7) ==
        doctest::Approx(16.0 * std::pow(0.7, 4) - 48.0 * 0.49 + 12.0).epsilon(1e-14));
}

TEST_CASE("erf: values against quadrature oracle") {
  CHECK(hetphase::erf(0.0) == 0.0);
  CHECK(std::abs(hetphase::erf(10.0) - 1.0) <= 1e-12);
  CHECK(hetphase::erf(1.0) == doctest::Approx(0.8427007929).epsilon(1e-9));
  for (double x : {0.05, 0.3, 0.9, 1.5, 2.0, 2.1, 3.0, 4.5, 6.0})
    CHECK(std::abs(hetphase::erf(x) - erf_quadrature(x)) <= 1e-12);
}

TEST_CASE("erf: odd symmetry is exact and values are monotone") {
  double prev = hetphase::erf(-8.0);
  for (int i = -64; i <= 64; ++i) {
    const double x = i * 0.125;
    CHECK(hetphase::erf(-x) == -hetphase::erf(x)); // bitwise, by construction
  }
  for (int i = -48; i <= 48; ++i) {
    const double v = hetphase::erf(i * 0.25);
    CHECK(v >= prev);
    prev = v;
  }
}

TEST_CASE("erfc: complements erf on both branches") {
  for (double x : {-4.0, -1.0, -0.2, 0.0, 0.4, 1.9, 2.5, 5.0})
    CHECK(std::abs(hetphase::erf(x) + hetphase::erfc(x) - 1.0) <= 1e-14);
  // deep tail keeps relative accuracy where 1 - erf would cancel
  CHECK(hetphase::erfc(5.0) == doctest::Approx(1.5374597944280348e-12).epsilon(1e-10));
}

TEST_CASE("log_factorial: exact range and Stirling range") {
  CHECK(log_factorial(0) == 0.0);
  CHECK(log_factorial(1) == 0.0);
  CHECK(log_factorial(10) == doctest::Approx(15.104412573).epsilon(1e-10));
  std::uint64_t fact = 1;
  for (int n = 1; n <= 20; ++n) {
    fact *= static_cast<std::uint64_t>(n);
    // exp(log(f)) round-trips to ~|ln f| ulps, |ln 20!| ~ 42
    CHECK(std::abs(std::exp(log_factorial(n)) - static_cast<double>(fact)) <=
          64.0 * std::numeric_limits<double>::epsilon() * static_cast<double>(fact));
  }
  // direct long double summation as the oracle past the exact range
  for (int n : {21, 25, 40, 100, 170, 300}) {
    long double acc = 0.0L;
    for (int k = 2; k <= n; ++k) acc += std::log(static_cast<long double>(k));
    CHECK(rel_diff(log_factorial(n), static_cast<double>(acc)) <= 1e-12);
  }
  CHECK_THROWS_AS(log_factorial(-1), std::invalid_argument);
}

TEST_CASE("gauss_hermite: moments of the weight") {
  for (int m : {1, 2, 5, 9, 20, 34}) {
    const GaussHermiteRule rule = gauss_hermite(m);
    long double total = 0.0L, second = 0.0L;
    for (int i = 0; i < m; ++i) {
      total += rule.weights[i];
      second += rule.weights[i] * rule.nodes[i] * rule.nodes[i];
    }
    CHECK(rel_diff(static_cast<double>(total), 1.7724538509055160273) <= 1e-13);
    if (m >= 2)
      CHECK(rel_diff(static_cast<double>(second), 0.5 * 1.7724538509055160273) <= 1e-12);
    for (int i = 0; i < m; ++i)
      CHECK(rule.nodes[i] == doctest::Approx(-rule.nodes[m - 1 - i]).epsilon(1e-12));
  }
}

TEST_CASE("check_hermite_laguerre: pinned values") {
  const HermiteLaguerreCheck trivial = check_hermite_laguerre(0, 0, 0.0, 0.0);
  CHECK(trivial.lhs == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(trivial.rhs == doctest::Approx(1.0).epsilon(1e-12));

  // rhs = 2 * 1! * L_1(-0.5) = 2 * 1.5 = 3
  const HermiteLaguerreCheck low = check_hermite_laguerre(1, 0, 0.5, 0.5);
  CHECK(low.lhs == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(low.rhs == doctest::Approx(3.0).epsilon(1e-12));

  const HermiteLaguerreCheck mid = check_hermite_laguerre(2, 1, 0.3, 0.7);
  CHECK(rel_diff(mid.lhs, mid.rhs) <= 1e-9);
}

TEST_CASE("check_hermite_laguerre: identity holds on a sampled order lattice") {
  double worst = 0.0;
  for (int n : {0, 1, 2, 5, 12, 20}) {
    for (int alpha : {0, 1, 4, 10}) {
      for (std::uint64_t k = 0; k < 20; ++k) {
        const double y = -2.0 + 4.0 * (detail::splitmix64_at(11, 2 * k) >> 11) * 0x1p-53;
        const double t = -2.0 + 4.0 * (detail::splitmix64_at(11, 2 * k + 1) >> 11) * 0x1p-53;
        if (alpha > 0 && t == 0.0) continue;
        const HermiteLaguerreCheck chk = check_hermite_laguerre(n, alpha, y, t);
        worst = std::max(worst, rel_diff(chk.lhs, chk.rhs));
      }
    }
  }
  CHECK(worst <= 1e-8);
}

TEST_CASE("check_hermite_laguerre: error paths") {
  CHECK_THROWS_AS(check_hermite_laguerre(1, 2, 0.5, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(check_hermite_laguerre(35, 10, 0.5, 0.5), ConvergenceError);
}
