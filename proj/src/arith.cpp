#include "orbicount/arith.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <string>

#include "orbicount/errors.hpp"

namespace orbicount {
namespace {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

constexpr u64 kTableLimit = u64{1} << 16;

const std::vector<u64>& small_primes() {
  static const std::vector<u64> table = primes_up_to(kTableLimit);
  return table;
}

u64 mulmod(u64 a, u64 b, u64 m) {
  return static_cast<u64>(static_cast<u128>(a) * b % m);
}

bool miller_rabin(u64 n) {
  if (n < 2) return false;
  for (u64 p : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL,
                29ULL, 31ULL, 37ULL}) {
    if (n % p == 0) return n == p;
  }
  u64 d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  // Deterministic for all 64-bit n.
  for (u64 a : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL,
                29ULL, 31ULL, 37ULL}) {
    u64 x = powmod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int r = 1; r < s; ++r) {
      x = mulmod(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

u64 pollard_rho(u64 n) {
  if (n % 2 == 0) return 2;
  std::mt19937_64 rng(n);
  for (;;) {
    const u64 c = rng() % (n - 1) + 1;
    u64 x = rng() % n;
    u64 y = x;
    u64 d = 1;
    auto step = [&](u64 v) { return (mulmod(v, v, n) + c) % n; };
    while (d == 1) {
      x = step(x);
      y = step(step(y));
      d = gcd_u64(x > y ? x - y : y - x, n);
    }
    if (d != n) return d;
  }
}

void split_large(u64 n, std::vector<u64>& out) {
  if (n == 1) return;
  if (miller_rabin(n)) {
    out.push_back(n);
    return;
  }
  const u64 d = pollard_rho(n);
  split_large(d, out);
  split_large(n / d, out);
}

}  // namespace

u64 gcd_u64(u64 a, u64 b) { return std::gcd(a, b); }

u64 lcm_u64(u64 a, u64 b) { return a / std::gcd(a, b) * b; }

u64 gcd_of(std::span<const std::int64_t> values) {
  u64 g = 0;
  for (auto v : values) g = std::gcd(g, static_cast<u64>(v < 0 ? -v : v));
  return g;
}

u64 isqrt(u64 m) {
  u64 r = static_cast<u64>(std::sqrt(static_cast<long double>(m)));
  while (r > 0 && static_cast<u128>(r) * r > m) --r;
  while (static_cast<u128>(r + 1) * (r + 1) <= m) ++r;
  return r;
}

u64 icbrt(u64 m) {
  u64 r = static_cast<u64>(std::cbrt(static_cast<long double>(m)));
  while (r > 0 && static_cast<u128>(r) * r * r > m) --r;
  while (static_cast<u128>(r + 1) * (r + 1) * (r + 1) <= m) ++r;
  return r;
}

u64 powmod(u64 base, u64 exp, u64 mod) {
  u64 result = 1 % mod;
  base %= mod;
  while (exp > 0) {
    if (exp & 1) result = mulmod(result, base, mod);
    base = mulmod(base, base, mod);
    exp >>= 1;
  }
  return result;
}

int valuation(std::int64_t m, u64 p) {
  if (m == 0) throw ValidationError("valuation of zero");
  u64 v = static_cast<u64>(m < 0 ? -m : m);
  int k = 0;
  while (v % p == 0) {
    v /= p;
    ++k;
  }
  return k;
}

std::vector<u64> primes_up_to(u64 bound) {
  std::vector<u64> primes;
  if (bound < 2) return primes;
  std::vector<bool> composite(bound + 1, false);
  for (u64 i = 2; i <= bound; ++i) {
    if (composite[i]) continue;
    primes.push_back(i);
    for (u64 j = i * i; j <= bound; j += i) composite[j] = true;
  }
  return primes;
}

std::vector<int> moebius_table(u64 bound) {
  std::vector<int> mu(bound + 1, 1);
  mu[0] = 0;
  std::vector<bool> composite(bound + 1, false);
  for (u64 i = 2; i <= bound; ++i) {
    if (composite[i]) continue;
    for (u64 j = i; j <= bound; j += i) {
      if (j > i) composite[j] = true;
      mu[j] = -mu[j];
    }
    if (i <= bound / i) {
      for (u64 j = i * i; j <= bound; j += i * i) mu[j] = 0;
    }
  }
  return mu;
}

bool is_prime(u64 m) { return miller_rabin(m); }

Factorization factorize(u64 m) {
  if (m < 1 || m > kFactorizeMax) {
    throw ValidationError("factorize: argument out of range [1, 2^63-1]: " +
                          std::to_string(m));
  }
  Factorization f;
  f.value = m;
  u64 rest = m;
  for (u64 p : small_primes()) {
    if (p * p > rest) break;
    if (rest % p != 0) continue;
    int e = 0;
    while (rest % p == 0) {
      rest /= p;
      ++e;
    }
    f.factors.push_back({p, e});
  }
  if (rest > 1) {
    std::vector<u64> large;
    split_large(rest, large);
    std::sort(large.begin(), large.end());
    for (u64 p : large) {
      if (!f.factors.empty() && f.factors.back().prime == p) {
        ++f.factors.back().exponent;
      } else {
        f.factors.push_back({p, 1});
      }
    }
  }
  return f;
}

bool is_squareful(std::int64_t m) {
  if (m == 0) throw ValidationError("is_squareful: zero is not admitted");
  const u64 a = static_cast<u64>(m < 0 ? -m : m);
  for (const auto& pf : factorize(a).factors) {
    if (pf.exponent < 2) return false;
  }
  return true;
}

bool is_squarefree(std::int64_t m) {
  if (m == 0) return false;
  const u64 a = static_cast<u64>(m < 0 ? -m : m);
  for (const auto& pf : factorize(a).factors) {
    if (pf.exponent > 1) return false;
  }
  return true;
}

int moebius(u64 m) {
  if (m == 0) throw ValidationError("moebius: argument must be positive");
  int mu = 1;
  for (const auto& pf : factorize(m).factors) {
    if (pf.exponent > 1) return 0;
    mu = -mu;
  }
  return mu;
}

SquarefulDecomposition decompose_squareful(std::int64_t m) {
  if (m == 0) throw ValidationError("decompose_squareful: zero");
  const u64 a = static_cast<u64>(m < 0 ? -m : m);
  std::int64_t x = 1;
  std::int64_t y = 1;
  for (const auto& pf : factorize(a).factors) {
    if (pf.exponent < 2) {
      throw ValidationError("decompose_squareful: not squareful: " +
                            std::to_string(m));
    }
    int e = pf.exponent;
    if (e % 2 == 1) {
      y *= static_cast<std::int64_t>(pf.prime);
      e -= 3;
    }
    for (int k = 0; k < e / 2; ++k) x *= static_cast<std::int64_t>(pf.prime);
  }
  return {m, x, m < 0 ? -y : y};
}

std::vector<SquarefulDecomposition> squareful_up_to(u64 bound) {
  std::vector<SquarefulDecomposition> out;
  if (bound < 1) return out;
  const u64 ymax = icbrt(bound);
  const auto mu = moebius_table(ymax);
  for (u64 y = 1; y <= ymax; ++y) {
    if (mu[y] == 0) continue;
    const u64 cube = y * y * y;
    const u64 xmax = isqrt(bound / cube);
    for (u64 x = 1; x <= xmax; ++x) {
      out.push_back({static_cast<std::int64_t>(x * x * cube),
                     static_cast<std::int64_t>(x),
                     static_cast<std::int64_t>(y)});
    }
  }
  std::sort(out.begin(), out.end(),
            [](const auto& l, const auto& r) { return l.value < r.value; });
  out.erase(std::unique(out.begin(), out.end(),
                        [](const auto& l, const auto& r) {
                          return l.value == r.value;
                        }),
            out.end());
  return out;
}

namespace {
u64 floor_positive(double bound) {
  if (!(bound >= 1.0)) return 0;
  if (bound >= static_cast<double>(kFactorizeMax)) {
    throw ValidationError("bound out of range");
  }
  return static_cast<u64>(std::floor(bound));
}
}  // namespace

std::vector<SquarefulDecomposition> squareful_up_to(double bound) {
  return squareful_up_to(floor_positive(bound));
}

std::vector<u64> squarefree_up_to(u64 bound) {
  std::vector<u64> out;
  if (bound < 1) return out;
  const auto mu = moebius_table(bound);
  for (u64 m = 1; m <= bound; ++m) {
    if (mu[m] != 0) out.push_back(m);
  }
  return out;
}

std::vector<u64> squarefree_up_to(double bound) {
  return squarefree_up_to(floor_positive(bound));
}

}  // namespace orbicount
