#pragma once

// Quadratic Gauss sums, sigma_y(a/q), the singular series as a q-sum and as
// an Euler product of p-adic densities.
//
// Everything is phrased for the diagonal form  sum_i c_i x_i^2 = t  with
// c_i = a_i y_i^3; `DiagonalForm` holds the c_i.

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "orbicount/enumerate.hpp"
#include "orbicount/int128.hpp"

namespace orbicount {

using Rational = boost::multiprecision::cpp_rational;

struct RationalAngle {
  std::int64_t a = 1;
  std::int64_t q = 1;
  void validate() const;
};

struct DiagonalForm {
  std::vector<std::int64_t> c;  // nonzero
  std::int64_t t = 0;
  int vars() const { return static_cast<int>(c.size()); }
};

DiagonalForm effective_form(std::span<const std::int64_t> y,
                            const DiagonalInstance& inst);

std::complex<double> gauss_sum_1d(std::int64_t c, std::int64_t q);

std::complex<double> sigma_fraction(const DiagonalForm& form, RationalAngle angle);
std::complex<double> sigma_fraction(std::span<const std::int64_t> y,
                                    const DiagonalInstance& inst,
                                    RationalAngle angle);
// Defining (n+1)-fold sum over (Z/q)^{n+1}; small q only.
std::complex<double> sigma_fraction_direct(const DiagonalForm& form,
                                           RationalAngle angle);

// Sum of sigma(a/q) over units a mod q, by direct Gauss sums per a.
double A_of_q(const DiagonalForm& form, std::int64_t q);
double A_of_q(std::span<const std::int64_t> y, const DiagonalInstance& inst,
              std::int64_t q);
// A(p^k) fast: Gauss sums evaluated once per square class of a * c_i.
double A_prime_power(const DiagonalForm& form, std::uint64_t p, int k);

struct SeriesEstimate {
  double value = 0.0;
  std::int64_t q_max = 0;            // truncated sum
  std::int64_t p_max = 0;            // Euler product
  int l_max = 0;                     // deepest level used by the Euler product
  double tail_bound = 0.0;
  std::vector<std::uint64_t> unstable_primes;
};

// Tail constant K = 2^{(n+1)/2} and epsilon used by the truncation bound.
inline constexpr double kTailEpsilon = 1e-2;
double series_tail_bound(const DiagonalForm& form, std::int64_t q_max);

SeriesEstimate series_truncated(const DiagonalForm& form, std::int64_t q_max,
                                int workers = 1);
SeriesEstimate series_truncated(std::span<const std::int64_t> y,
                                const DiagonalInstance& inst,
                                std::int64_t q_max, int workers = 1);

// Exact #{x mod p^l : sum c_i x_i^2 = t mod p^l} / p^{l n}.
Rational local_density(std::uint64_t p, int l, const DiagonalForm& form,
                       double modulus_budget = 1 << 22);
Rational local_density(std::uint64_t p, int l, std::span<const std::int64_t> y,
                       const DiagonalInstance& inst);
Count local_count(std::uint64_t p, int l, const DiagonalForm& form,
                  double modulus_budget = 1 << 22);
// Loop over (Z/p^l)^{n+1}.
Count local_count_direct(std::uint64_t p, int l, const DiagonalForm& form);

// lim_l of local_density, exact. Solutions with a unit coordinate of minimal
// valuation are Hensel-stable at level 1 (odd p) or 3 (p = 2); the rest are
// rescaled x -> p x, which yields a finite chain of valuation states that
// closes into a cycle when t = 0.
Rational local_density_limit(std::uint64_t p, const DiagonalForm& form);

struct LevelPolicy {
  // Iterate local_density over l until three consecutive levels agree exactly
  // or l passes 2 v_p(2 prod c) + 3. When `exact_limit` is set the limit
  // formula is used instead; the finite levels are then only a cross-check.
  bool exact_limit = true;
  double modulus_budget = 1 << 22;
  // Also multiply in primes > p_max that divide 2 prod c_i. Without this the
  // tail bound is infinite whenever such a prime exists.
  bool include_bad_primes = false;
};

// Product over primes p <= p_max.
SeriesEstimate series_euler(const DiagonalForm& form, std::int64_t p_max,
                            const LevelPolicy& policy = {});
SeriesEstimate series_euler(std::span<const std::int64_t> y,
                            const DiagonalInstance& inst, std::int64_t p_max,
                            const LevelPolicy& policy = {});

}  // namespace orbicount
