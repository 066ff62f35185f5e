#include <cmath>
#include <numeric>
#include <random>

#include "doctest.h"
#include "orbicount/arith.hpp"
#include "orbicount/errors.hpp"
#include "orbicount/singular_series.hpp"

using namespace orbicount;

namespace {

DiagonalForm random_form(std::mt19937_64& rng, int vars, int lo, int hi, bool with_t) {
  std::uniform_int_distribution<int> d(lo, hi);
  DiagonalForm f;
  while (f.vars() < vars) {
    const int c = d(rng);
    if (c != 0) f.c.push_back(c);
  }
  f.t = with_t ? d(rng) : 0;
  return f;
}

double to_d(const Rational& r) { return r.convert_to<double>(); }

}  // namespace

TEST_CASE("gauss_sum_1d examples") {
  CHECK(std::abs(gauss_sum_1d(0, 5) - std::complex<double>(5, 0)) < 1e-12);
  CHECK(std::abs(gauss_sum_1d(1, 2)) < 1e-12);
  CHECK(std::abs(gauss_sum_1d(1, 4) - std::complex<double>(2, 2)) < 1e-12);
  // Classical value for odd prime q: (1 + i^q)... magnitude sqrt(q).
  CHECK(std::abs(std::abs(gauss_sum_1d(3, 101)) - std::sqrt(101.0)) < 1e-9);
  CHECK(std::abs(gauss_sum_1d(-3, 7) - gauss_sum_1d(4, 7)) < 1e-12);
  CHECK_THROWS_AS(gauss_sum_1d(1, 0), ValidationError);
}

TEST_CASE("gauss_sum_1d bound, q <= 500") {
  double worst = -1;
  for (std::int64_t q = 1; q <= 500; ++q) {
    for (std::int64_t c = 0; c < q; c += (q > 200 ? 7 : 1)) {
      const double bound = std::sqrt(2.0 * q * std::gcd(c, q));
      worst = std::max(worst, std::abs(gauss_sum_1d(c, q)) - bound);
    }
  }
  CHECK(worst <= 1e-9);
}

TEST_CASE("sigma_fraction product formula equals the direct sum") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 6; ++trial) {
    const auto f = random_form(rng, 5, -10, 10, trial % 2 == 1);
    for (std::int64_t q = 1; q <= 8; ++q) {
      for (std::int64_t a = 1; a <= q; ++a) {
        if (std::gcd(a, q) != 1) continue;
        CAPTURE(q);
        CAPTURE(a);
        CHECK(std::abs(sigma_fraction(f, {a, q}) - sigma_fraction_direct(f, {a, q})) < 1e-10);
      }
    }
  }
}

TEST_CASE("sigma_fraction examples") {
  const DiagonalForm odd{{1, 3, 5, -7, 9}, 0};
  CHECK(std::abs(sigma_fraction(odd, {1, 1}) - 1.0) < 1e-12);
  CHECK(std::abs(sigma_fraction(odd, {1, 2})) < 1e-12);
  CHECK_THROWS_AS(sigma_fraction(odd, {2, 4}), ValidationError);
  const std::vector<std::int64_t> y{1, -1, 2, 1, 3};
  const DiagonalInstance inst{4, {1, 1, 1, 1, 1}, 2};
  const auto f = effective_form(y, inst);
  CHECK(f.c == std::vector<std::int64_t>{1, -1, 8, 1, 27});
  CHECK(std::abs(sigma_fraction(y, inst, {2, 5}) - sigma_fraction(f, {2, 5})) < 1e-15);
}

TEST_CASE("A_of_q is real and multiplicative") {
  std::mt19937_64 rng(11);
  const DiagonalForm odd{{1, 3, 5, -7, 9}, 0};
  CHECK(A_of_q(odd, 1) == doctest::Approx(1.0));
  CHECK(std::abs(A_of_q(odd, 2)) < 1e-12);
  for (int inst = 0; inst < 5; ++inst) {
    const auto f = random_form(rng, 5, -10, 10, inst % 2 == 0);
    CHECK(std::abs(A_of_q(f, 6) - A_of_q(f, 2) * A_of_q(f, 3)) < 1e-9);
    int pairs = 0;
    for (std::int64_t q1 = 2; q1 <= 100 && pairs < 30; ++q1) {
      for (std::int64_t q2 = q1 + 1; q1 * q2 <= 200 && pairs < 30; ++q2) {
        if (std::gcd(q1, q2) != 1) continue;
        ++pairs;
        CHECK(std::abs(A_of_q(f, q1 * q2) - A_of_q(f, q1) * A_of_q(f, q2)) < 1e-9);
      }
    }
  }
}

TEST_CASE("fast prime-power A matches direct A") {
  std::mt19937_64 rng(12);
  for (int inst = 0; inst < 4; ++inst) {
    const auto f = random_form(rng, 5, -12, 12, inst >= 2);
    for (std::uint64_t p : {2, 3, 5, 7, 11}) {
      std::int64_t q = 1;
      for (int k = 1; q * static_cast<std::int64_t>(p) <= 250; ++k) {
        q *= static_cast<std::int64_t>(p);
        CAPTURE(q);
        CHECK(std::abs(A_prime_power(f, p, k) - A_of_q(f, q)) < 1e-9);
      }
    }
  }
}

TEST_CASE("local_count agrees with direct enumeration") {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 12; ++trial) {
    const auto f = random_form(rng, 5, -30, 30, trial % 3 != 0);
    for (auto [p, l] : std::vector<std::pair<std::uint64_t, int>>{{2, 1}, {2, 2}, {2, 3}, {3, 1}, {3, 2}, {5, 1}, {7, 1}}) {
      CAPTURE(p);
      CAPTURE(l);
      CHECK(local_count(p, l, f) == local_count_direct(p, l, f));
    }
  }
  const DiagonalForm f4{{1, 2, 4, 8}, 5};
  CHECK(local_count(2, 4, f4) == local_count_direct(2, 4, f4));
  CHECK_THROWS_AS(local_count(4, 1, f4), ValidationError);
  CHECK_THROWS_AS(local_count(3, 20, f4), BudgetExceeded);
}

TEST_CASE("local_density examples") {
  const DiagonalForm ones{{1, 1, 1, 1, 1}, 0};
  CHECK(local_count_direct(3, 1, ones) == 81);
  CHECK(local_density(3, 1, ones) == Rational(1));
  const DiagonalForm odd{{1, 3, 5, 7, 9}, 0};
  CHECK(local_density(2, 1, odd) == Rational(1));
  // Level 2 equals level 1 for a good prime when p does not divide t.
  const DiagonalForm g{{1, 2, -3, 4, 6}, 1};
  CHECK(local_density(5, 2, g) == local_density(5, 1, g));
  CHECK(local_density(7, 3, g) == local_density(7, 1, g));
  // For t = 0 it does not: the x = 0 mod p solutions add p^{1-n} d_{l-2}.
  const DiagonalForm g0{{1, 2, -3, 4, 6}, 0};
  const Rational d1 = local_density(5, 1, g0), d2 = local_density(5, 2, g0);
  const Rational ns = d1 - Rational(1, 625);
  CHECK(d2 == ns + Rational(1, 125));
}

TEST_CASE("partial sums of A(p^k) are the local densities") {
  std::mt19937_64 rng(14);
  for (int trial = 0; trial < 5; ++trial) {
    const auto f = random_form(rng, 5, -10, 10, trial % 2 == 1);
    for (auto [p, L] : std::vector<std::pair<std::uint64_t, int>>{{2, 8}, {3, 5}, {5, 3}, {7, 2}}) {
      double partial = 1.0;
      for (int l = 1; l <= L; ++l) {
        partial += A_prime_power(f, p, l);
        CAPTURE(p);
        CAPTURE(l);
        CHECK(std::abs(partial - to_d(local_density(p, l, f))) < 1e-10);
      }
    }
  }
}

TEST_CASE("local_density_limit") {
  // Stabilized finite level when t != 0.
  std::mt19937_64 rng(15);
  for (int trial = 0; trial < 6; ++trial) {
    auto f = random_form(rng, 5, -12, 12, false);
    f.t = 1 + trial * 5;
    for (std::uint64_t p : {2, 3, 5}) {
      const int l = p == 2 ? 14 : (p == 3 ? 9 : 6);
      CAPTURE(p);
      CHECK(local_density_limit(p, f) == local_density(p, l, f));
    }
  }
  // Good odd prime, t = 0, five variables: (1 - p^-4) / (1 - p^-3).
  const DiagonalForm g0{{1, 2, -3, 4, 6}, 0};
  CHECK(local_density_limit(7, g0) == (1 - Rational(1, 2401)) / (1 - Rational(1, 343)));
  // t = 0 for a bad prime: the finite levels converge to the limit.
  const DiagonalForm b{{4, -3, 9, 2, -27}, 0};
  for (std::uint64_t p : {2, 3}) {
    const double lim = to_d(local_density_limit(p, b));
    const int L = p == 2 ? 18 : 11;
    double prev = 1e9;
    for (int l = L - 6; l <= L; l += 2) {
      const double gap = std::abs(to_d(local_density(p, l, b)) - lim);
      CHECK(gap <= prev);
      prev = gap;
    }
    CHECK(prev < 1e-6);
  }
}

TEST_CASE("series_truncated basics") {
  const DiagonalForm ones{{1, 1, 1, 1, 1}, 0};
  const auto s1 = series_truncated(ones, 1);
  CHECK(s1.value == 1.0);
  CHECK(s1.tail_bound > 0.0);
  CHECK(series_truncated(ones, 10000).tail_bound < series_truncated(ones, 100).tail_bound);
  CHECK_THROWS_AS(series_truncated(DiagonalForm{{1, 1, 1, 1}, 0}, 10), ValidationError);
  // Workers do not change the value.
  CHECK(series_truncated(ones, 3000, 1).value == series_truncated(ones, 3000, 4).value);
}

TEST_CASE("series_euler basics and agreement") {
  const DiagonalForm ones{{1, 1, 1, 1, 1}, 0};
  CHECK(series_euler(ones, 1).value == 1.0);
  CHECK_THROWS_AS(series_euler(DiagonalForm{{1, 1, 1, 1}, 0}, 10), ValidationError);
  const auto e = series_euler(ones, 100);
  const auto t = series_truncated(ones, 10000);
  CHECK(std::abs(e.value - t.value) <= t.tail_bound + 1e-3);
  // Finite-level policy: t != 0 stabilizes exactly.
  const DiagonalForm f{{1, 2, -3, 5, 1}, 3};
  LevelPolicy finite;
  finite.exact_limit = false;
  const auto ef = series_euler(f, 50, finite);
  const auto el = series_euler(f, 50);
  CHECK(ef.unstable_primes.empty());
  CHECK(ef.value == doctest::Approx(el.value).epsilon(1e-12));
  // t = 0 never stabilizes exactly.
  CHECK_FALSE(series_euler(ones, 10, finite).unstable_primes.empty());
  // Bad primes beyond p_max.
  const DiagonalForm big{{1, 1, 1, 1, 101}, 0};
  CHECK(std::isinf(series_euler(big, 50).tail_bound));
  LevelPolicy inc;
  inc.include_bad_primes = true;
  CHECK(std::isfinite(series_euler(big, 50, inc).tail_bound));
}
