#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "orbicount/errors.hpp"
#include "orbicount/singular_integral.hpp"

using namespace orbicount;

namespace {

// Composite Simpson for the Fresnel integrals.
std::complex<double> fresnel_simpson(double z, int steps) {
  const double h = z / steps;
  std::complex<double> s = 0;
  for (int i = 0; i <= steps; ++i) {
    const double u = i * h;
    const double w = (i == 0 || i == steps) ? 1 : (i % 2 ? 4 : 2);
    const double a = 0.5 * std::numbers::pi * u * u;
    s += w * std::complex<double>(std::cos(a), std::sin(a));
  }
  return s * h / 3.0;
}

std::complex<double> riemann_box(double gamma, double lower, int steps) {
  const double h = (1.0 - lower) / steps;
  std::complex<double> s = 0;
  for (int i = 0; i < steps; ++i) {
    const double x = lower + (i + 0.5) * h;
    const double a = 2.0 * std::numbers::pi * gamma * x * x;
    s += std::complex<double>(std::cos(a), std::sin(a));
  }
  return s * h;
}

}  // namespace

TEST_CASE("fresnel_cs") {
  const auto v = fresnel_cs(1.0);
  CHECK(v.real() == doctest::Approx(0.7798934003768228).epsilon(1e-13));
  CHECK(v.imag() == doctest::Approx(0.4382591473903548).epsilon(1e-13));
  for (double z : {0.3, 1.2, 1.5, 1.51, 2.0, 4.5, 9.0}) {
    CAPTURE(z);
    CHECK(std::abs(fresnel_cs(z) - fresnel_simpson(z, 200000)) < 1e-11);
  }
  CHECK(std::abs(fresnel_cs(1e4) - std::complex<double>(0.5, 0.5)) < 1e-4);
  CHECK(std::abs(fresnel_cs(-2.0) + fresnel_cs(2.0)) < 1e-15);
}

TEST_CASE("box_phase_integral") {
  CHECK(std::abs(box_phase_integral(0.0, 0.0) - 1.0) < 1e-15);
  CHECK(std::abs(box_phase_integral(0.0, 0.25) - 0.75) < 1e-15);
  CHECK(std::abs(box_phase_integral(10.0, 0.0) - riemann_box(10.0, 0.0, 1000000)) < 1e-6);
  CHECK(std::abs(box_phase_integral(-3.7, 0.1) - riemann_box(-3.7, 0.1, 1000000)) < 1e-6);
  CHECK(std::abs(box_phase_integral(1e-9, 0.0) - riemann_box(1e-9, 0.0, 1000)) < 1e-9);
  CHECK(std::abs(box_phase_integral(-5.0) - std::conj(box_phase_integral(5.0))) < 1e-15);
  const double c = box_envelope_constant();
  CHECK(c > 0.47);
  CHECK(c < 0.48);
  for (double g = 0.01; g < 2000; g *= 1.07) {
    CHECK(std::abs(box_phase_integral(g)) <= std::min(1.0, c / std::sqrt(g)) + 1e-12);
  }
}

TEST_CASE("singular_integral symmetries and oracle") {
  QuadratureOptions opt;
  opt.workers = 4;
  const std::vector<int> eps{1, 1, 1, -1, -1};
  const auto I = singular_integral(eps, opt);
  CHECK(I.value > 0.5);
  CHECK(std::abs(I.imag) <= opt.tol);
  const std::vector<int> neg{-1, -1, -1, 1, 1};
  CHECK(std::abs(singular_integral(neg, opt).value - I.value) < 1e-6);
  const std::vector<int> perm{-1, 1, -1, 1, 1};
  CHECK(std::abs(singular_integral(perm, opt).value - I.value) < 1e-6);
  const auto O = shell_density_oracle(eps, 1e-3, 120, 4);
  CHECK(std::abs(O.value - I.value) < 0.01 * I.value);
  // Workers do not change the value.
  QuadratureOptions one = opt;
  one.workers = 1;
  CHECK(singular_integral(eps, one).value == I.value);
}

TEST_CASE("sign-definite forms") {
  const std::vector<int> pos{1, 1, 1, 1, 1};
  const auto I = singular_integral(pos);
  CHECK(I.short_circuit);
  CHECK(I.value == 0.0);
  CHECK(shell_density_oracle(pos, 1e-3, 40).value < 1e-3);
  CHECK_THROWS_AS(singular_integral(std::vector<int>{1, -1, 1}), ValidationError);
  CHECK_THROWS_AS(singular_integral(std::vector<int>{1, 0, 1, 1}), ValidationError);
}

TEST_CASE("tail honesty") {
  const std::vector<int> eps{1, 1, -1, -1, -1};
  QuadratureOptions a, b;
  a.gamma_max = 400;
  b.gamma_max = 800;
  const auto Ia = singular_integral(eps, a);
  const auto Ib = singular_integral(eps, b);
  CHECK(std::abs(Ia.value - Ib.value) < Ia.tail_bound);
  CHECK(Ib.tail_bound < Ia.tail_bound);
}

TEST_CASE("truncated integral tends to the full one") {
  const std::vector<int> eps{1, 1, 1, -1, -1};
  QuadratureOptions opt;
  opt.workers = 4;
  const double J = singular_integral(eps, opt).value;
  CHECK(std::abs(singular_integral_tB(eps, 0, 1e8, opt).value - J) < 1e-3);
  for (std::int64_t t : {0, 7}) {
    const double d4 = std::abs(singular_integral_tB(eps, t, 1e4, opt).value - J);
    const double d6 = std::abs(singular_integral_tB(eps, t, 1e6, opt).value - J);
    CHECK(d4 >= 5 * d6);
  }
  QuadratureOptions zero;
  zero.gamma_max = 0;
  CHECK(singular_integral_tB(eps, 3, 100, zero).value == 0.0);
  CHECK_THROWS_AS(singular_integral_tB(eps, 0, 0.5, opt), ValidationError);
  // Sign-definite with t on the reachable side is not zero.
  const std::vector<int> pos{1, 1, 1, 1, 1};
  CHECK(singular_integral_tB(pos, 0, 1e4, opt).short_circuit);
  CHECK(singular_integral_tB(pos, 20000, 1e4, opt).value > 0.1);
}

TEST_CASE("shell_density_oracle") {
  const std::vector<int> eps{1, 1, -1, 1, -1};
  const auto a = shell_density_oracle(eps, 1e-3, 100);
  const auto b = shell_density_oracle(eps, 5e-4, 100);
  CHECK(std::abs(a.value - b.value) < 0.02 * a.value);
  CHECK(a.error_estimate < 0.01 * a.value);
  CHECK_THROWS_AS(shell_density_oracle(eps, 0.5, 10), ValidationError);
  CHECK_THROWS_AS(shell_density_oracle(eps, 1e-3, 100000), BudgetExceeded);
  // Two-variable toy mode against a direct 2D midpoint count.
  const std::vector<int> toy{1, -1};
  const double delta = 0.01;
  const int N = 4000;
  long hits = 0;
  for (int i = 0; i < N; ++i) {
    for (int j = 0; j < N; ++j) {
      const double x = (i + 0.5) / N, y = (j + 0.5) / N;
      if (std::abs(x * x - y * y) < delta) ++hits;
    }
  }
  const double direct = static_cast<double>(hits) / N / N / (2 * delta);
  CHECK(shell_density_oracle(toy, delta, 2).value == doctest::Approx(direct).epsilon(2e-3));
}

TEST_CASE("mixed-sign forms at n = 5") {
  QuadratureOptions opt;
  opt.workers = 4;
  const std::vector<int> eps{1, 1, 1, -1, -1, -1};
  const auto I = singular_integral(eps, opt);
  const auto O = shell_density_oracle(eps, 1e-3, 40, 4);
  CHECK(std::abs(O.value - I.value) < 0.01 * I.value);
}
