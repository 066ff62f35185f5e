#include <cmath>
#include <limits>
#include <numbers>

#include "orbicount/singular_integral.hpp"

namespace orbicount {

// Series for small |z|, continued fraction (modified Lentz) beyond.
std::complex<double> fresnel_cs(double z) {
  constexpr double kEps = 1e-16;
  constexpr double kTiny = 1e-300;
  constexpr double kSwitch = 1.5;
  constexpr int kMaxIt = 200;
  const double pi = std::numbers::pi;
  const double ax = std::abs(z);
  double c = 0.0, s = 0.0;
  if (ax < 1e-150) {
    c = ax;
  } else if (ax <= kSwitch) {
    double sum = 0.0, sums = 0.0, sumc = ax, sign = 1.0, term = ax;
    const double fact = 0.5 * pi * ax * ax;
    bool odd = true;
    int n = 3;
    for (int k = 1; k <= kMaxIt; ++k) {
      term *= fact / k;
      sum += sign * term / n;
      const double test = std::abs(sum) * kEps;
      if (odd) {
        sign = -sign;
        sums = sum;
        sum = sumc;
      } else {
        sumc = sum;
        sum = sums;
      }
      if (term < test) break;
      odd = !odd;
      n += 2;
    }
    s = sums;
    c = sumc;
  } else {
    const double pix2 = pi * ax * ax;
    std::complex<double> b(1.0, -pix2);
    std::complex<double> cc(1.0 / kTiny, 0.0);
    std::complex<double> d = 1.0 / b, h = d;
    int n = -1;
    for (int k = 2; k <= kMaxIt; ++k) {
      n += 2;
      const double a = -static_cast<double>(n) * (n + 1);
      b += 4.0;
      d = 1.0 / (a * d + b);
      cc = b + a / cc;
      const auto del = cc * d;
      h *= del;
      if (std::abs(del.real() - 1.0) + std::abs(del.imag()) < kEps) break;
    }
    h *= std::complex<double>(ax, -ax);
    const auto cs = std::complex<double>(0.5, 0.5) *
                    (1.0 - std::complex<double>(std::cos(0.5 * pix2), std::sin(0.5 * pix2)) * h);
    c = cs.real();
    s = cs.imag();
  }
  if (z < 0) {
    c = -c;
    s = -s;
  }
  return {c, s};
}

namespace {

// int_0^L e(gamma x^2) dx.
std::complex<double> phase_from_zero(double gamma, double L) {
  if (L <= 0.0) return {0.0, 0.0};
  const double g = std::abs(gamma);
  if (g * L * L < 1e-12) {
    // e(gamma x^2) = 1 + 2 pi i gamma x^2 + O(gamma^2)
    return {L, 2.0 * std::numbers::pi * gamma * L * L * L / 3.0};
  }
  const double r = std::sqrt(g);
  const auto v = fresnel_cs(2.0 * L * r) / (2.0 * r);
  return gamma < 0 ? std::conj(v) : v;
}

}  // namespace

std::complex<double> box_phase_integral(double gamma, double lower) {
  return phase_from_zero(gamma, 1.0) - phase_from_zero(gamma, lower);
}

double box_envelope_constant() {
  // sup_z |C(z) + i S(z)| / 2, attained near z = 1.2.
  static const double c = [] {
    double best = 0.0;
    for (double z = 0.0; z <= 4.0; z += 1e-4) best = std::max(best, std::abs(fresnel_cs(z)));
    return best / 2.0 * (1.0 + 1e-6);
  }();
  return c;
}

}  // namespace orbicount
