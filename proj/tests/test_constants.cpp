#include <functional>
#include <numeric>
#include <cmath>
#include <random>

#include "doctest.h"
#include "orbicount/arith.hpp"
#include "orbicount/constants.hpp"
#include "orbicount/errors.hpp"
#include "orbicount/gcd_sieve.hpp"
#include "orbicount/singular_integral.hpp"
#include "orbicount/singular_series.hpp"

using namespace orbicount;

namespace {

double J_of(std::span<const std::int64_t> c) {
  std::vector<int> eps;
  for (auto v : c) eps.push_back(v > 0 ? 1 : -1);
  return singular_integral(eps).value;
}

double euler(const DiagonalForm& f) {
  LevelPolicy pol;
  pol.include_bad_primes = true;
  return series_euler(f, 400, pol).value;
}

}  // namespace

TEST_CASE("C_at at y_max = 1 against a direct sum") {
  const std::vector<std::int64_t> a{1, 1, 1, -1, -1};
  ConstantParams p;
  p.y_max = 1;
  const auto c = constant_C_at(DiagonalInstance{4, a, 0}, p);
  double direct = 0.0;
  for (int mask = 0; mask < 32; ++mask) {
    DiagonalForm f;
    for (int i = 0; i < 5; ++i) f.c.push_back(a[static_cast<std::size_t>(i)] * ((mask >> i & 1) ? -1 : 1));
    const double J = J_of(f.c);
    if (J != 0.0) direct += 32.0 * euler(f) * J;
  }
  CHECK(c.value == doctest::Approx(direct).epsilon(2e-3));
  CHECK(c.value > 0);
}

TEST_CASE("C_at truncation, symmetry, methods") {
  ConstantParams p;
  p.y_max = 3;
  const DiagonalInstance inst{4, {1, 2, 1, 3, 1}, 0};
  const auto c3 = constant_C_at(inst, p);
  p.y_max = 1;
  const auto c1 = constant_C_at(inst, p);
  CHECK(c1.value <= c3.value);
  p.y_max = 3;
  const auto perm = constant_C_at(DiagonalInstance{4, {3, 1, 1, 2, 1}, 0}, p);
  CHECK(perm.value == c3.value);
  CHECK(constant_C_at(inst, p).value == c3.value);
  p.workers = 2;
  CHECK(constant_C_at(inst, p).value == c3.value);
  // Truncated series at small y_max.
  p.workers = 1;
  p.y_max = 2;
  const auto e = constant_C_at(inst, p);
  p.method = SeriesMethod::Truncated;
  p.q_max = 1500;
  const auto tr = constant_C_at(inst, p);
  CHECK(tr.value == doctest::Approx(e.value).epsilon(0.02));
  // t != 0 goes through the character product.
  ConstantParams q;
  q.y_max = 2;
  q.p_max = 300;
  const auto ct = constant_C_at(DiagonalInstance{4, {1, 1, 1, 1, 1}, 3}, q);
  CHECK(ct.value > 0);
  CHECK(ct.series_tail < 0.05 * ct.value);
  CHECK_THROWS_AS(constant_C_at(DiagonalInstance{3, {1, 1, 1, -1}, 0}, q), ValidationError);
}

TEST_CASE("C_at against the counting function") {
  const DiagonalInstance inst{4, {1, 1, 1, 1, 1}, 0};
  const auto c = constant_C_at(inst, ConstantParams{});
  const auto r = count_M_at(inst, HeightBound{100000, 1}, ExecPolicy{});
  const double ratio = static_cast<double>(r.count) / (c.value * std::pow(1e5, 1.5));
  CHECK(ratio > 0.5);
  CHECK(ratio < 2.0);
}

TEST_CASE("uniform cap on random coefficients") {
  std::mt19937_64 g(11);
  std::uniform_int_distribution<int> d(-20, 20);
  ConstantParams p;
  p.y_max = 5;
  const double cap = uniform_cap(4);
  for (int r = 0; r < 20; ++r) {
    DiagonalInstance inst{4, {}, 0};
    while (inst.a.size() < 5) {
      const int v = d(g);
      if (v != 0) inst.a.push_back(v);
    }
    CHECK(constant_C_at(inst, p).value <= cap);
  }
  p.y_max = 40;
  CHECK(constant_C_at(DiagonalInstance{4, {1, 1, 1, 1, 1}, 0}, p).value <= cap);
}

TEST_CASE("D folding against an explicit couple sum") {
  // One y, e_bound = 6: sum over e_i | 30 and f_i | y_i.
  const std::vector<std::int64_t> y{1, -1, 2, -3, 1};
  ConstantParams p;
  p.e_bound = 6;
  const auto q = constant_quadric(y, p);
  const std::vector<std::int64_t> divs30{1, 2, 3, 5, 6, 10, 15, 30};
  double direct = 0.0;
  std::vector<std::int64_t> e(5), f(5);
  std::vector<std::vector<std::int64_t>> fdiv(5);
  for (std::size_t i = 0; i < 5; ++i) {
    for (std::int64_t v = 1; v <= std::abs(y[i]); ++v) {
      if (std::abs(y[i]) % v == 0) fdiv[i].push_back(v);
    }
  }
  const double J = J_of(y);
  std::function<void(std::size_t)> rec = [&](std::size_t i) {
    if (i == 5) {
      const int mu = mu_couple(e, f);
      if (mu == 0) return;
      std::int64_t g = 0;
      for (std::size_t k = 0; k < 5; ++k) g = std::gcd(g, e[k] * f[k]);
      if (g > 6) return;
      DiagonalForm form;
      double w = 32.0 * J;
      for (std::size_t k = 0; k < 5; ++k) {
        form.c.push_back(e[k] * e[k] * y[k] * y[k] * y[k]);
        w /= static_cast<double>(e[k]) * std::pow(std::abs(static_cast<double>(y[k])), 1.5);
      }
      direct += mu * w * euler(form);
      return;
    }
    for (auto ev : divs30) {
      for (auto fv : fdiv[i]) {
        e[i] = ev;
        f[i] = fv;
        rec(i + 1);
      }
    }
  };
  rec(0);
  CHECK(q.value == doctest::Approx(direct).epsilon(2e-3));
}

TEST_CASE("D, C and the quadric constants") {
  ConstantParams p;
  p.y_max = 2;
  p.e_bound = 1;
  const auto c1 = constant_C_at(DiagonalInstance{4, {1, 1, 1, 1, 1}, 0}, p);
  CHECK(constant_D(4, p).value == doctest::Approx(c1.value).epsilon(1e-12));
  p.flavour = DFlavour::Literal;
  CHECK(constant_D(4, p).value == doctest::Approx(c1.value).epsilon(1e-12));

  p.e_bound = 20;
  p.flavour = DFlavour::Coprime;
  const auto D = constant_D(4, p);
  const auto C = constant_orbifold_C(4, p);
  CHECK(C.value * 64 == doctest::Approx(D.value).epsilon(1e-14));
  CHECK(C.value > 0);
  CHECK(D.value < c1.value);
  CHECK(std::log(std::abs(D.value)) <= literal_D_log_bound(4));

  // Summation order: quadric constants over every y reproduce D.
  double sum = 0.0;
  const std::vector<std::int64_t> vals{-2, -1, 1, 2};
  std::vector<std::int64_t> y(5);
  for (int code = 0; code < 1024; ++code) {
    for (int i = 0, c = code; i < 5; ++i, c /= 4) y[static_cast<std::size_t>(i)] = vals[static_cast<std::size_t>(c % 4)];
    sum += constant_quadric(y, p).value;
  }
  CHECK(sum == doctest::Approx(D.value).epsilon(1e-10));
  CHECK(sum / 2 == doctest::Approx(32 * C.value).epsilon(1e-10));

  const std::vector<std::int64_t> same{1, 2, 3, 5, 7};
  CHECK(constant_quadric(same, p).value == 0.0);
  const std::vector<std::int64_t> six{1, 1, 1, -1, -1, -1};
  ConstantParams q;
  q.p_max = 300;
  CHECK(constant_quadric(six, q).value > 0);
  const std::vector<std::int64_t> bad{1, 4, 1, -1, -1};
  CHECK_THROWS_AS(constant_quadric(bad, q), ValidationError);
}

TEST_CASE("e_bound increments") {
  ConstantParams p;
  p.y_max = 10;
  p.e_bound = 10;
  const double d10 = constant_D(4, p).value;
  p.e_bound = 30;
  const double d30 = constant_D(4, p).value;
  CHECK(std::abs(d30 - d10) < 0.01 * std::abs(d10));
}

TEST_CASE("predict") {
  ConstantEstimate c;
  c.value = 1.7;
  CHECK(predict(4, 4000.0, c) / predict(4, 1000.0, c) == doctest::Approx(8.0).epsilon(1e-14));
  CHECK(predict(5, 1.0, c) == 1.7);
  CHECK_THROWS_AS(predict(4, 0.5, c), ValidationError);
}
