#pragma once

// Exact arithmetic on squareful and squarefree integers.
//
// A nonzero squareful integer m (every prime exponent >= 2) has a unique
// representation m = x^2 * y^3 with x > 0 and y squarefree carrying the sign
// of m. Everything downstream chooses coordinates in this chart.

#include <cstdint>
#include <span>
#include <vector>

namespace orbicount {

struct PrimeFactor {
  std::uint64_t prime;
  int exponent;
  bool operator==(const PrimeFactor&) const = default;
};

struct Factorization {
  std::uint64_t value = 1;
  std::vector<PrimeFactor> factors;  // strictly increasing primes
};

struct SquarefulDecomposition {
  std::int64_t value;  // x^2 * y^3
  std::int64_t x;      // > 0
  std::int64_t y;      // squarefree, sign(y) == sign(value)
  bool operator==(const SquarefulDecomposition&) const = default;
};

inline constexpr std::uint64_t kFactorizeMax = (std::uint64_t{1} << 63) - 1;

Factorization factorize(std::uint64_t m);

bool is_prime(std::uint64_t m);
bool is_squareful(std::int64_t m);
bool is_squarefree(std::int64_t m);
int moebius(std::uint64_t m);

SquarefulDecomposition decompose_squareful(std::int64_t m);

// Positive squareful integers <= bound, ascending, with their decomposition.
std::vector<SquarefulDecomposition> squareful_up_to(std::uint64_t bound);
std::vector<SquarefulDecomposition> squareful_up_to(double bound);

std::vector<std::uint64_t> squarefree_up_to(std::uint64_t bound);
std::vector<std::uint64_t> squarefree_up_to(double bound);

// Sieve helpers shared by the other modules.
std::vector<std::uint64_t> primes_up_to(std::uint64_t bound);
std::vector<int> moebius_table(std::uint64_t bound);  // index 0 unused

std::uint64_t gcd_u64(std::uint64_t a, std::uint64_t b);
std::uint64_t lcm_u64(std::uint64_t a, std::uint64_t b);
std::uint64_t gcd_of(std::span<const std::int64_t> values);
std::uint64_t isqrt(std::uint64_t m);
std::uint64_t icbrt(std::uint64_t m);
std::uint64_t powmod(std::uint64_t base, std::uint64_t exp, std::uint64_t mod);
// p-adic valuation of a nonzero integer.
int valuation(std::int64_t m, std::uint64_t p);

}  // namespace orbicount
