#include "orbicount/gcd_sieve.hpp"

#include <algorithm>
#include <bit>
#include <functional>
#include <map>
#include <numeric>
#include <tuple>

#include "orbicount/arith.hpp"
#include "orbicount/enumerate.hpp"
#include "orbicount/errors.hpp"

namespace orbicount {

namespace {

IndexSet full_set(int n) { return (IndexSet{1} << (n + 1)) - 1; }

void check_pattern(IndexSet I, IndexSet J, int n) {
  if (n < 0 || n > 30) throw ValidationError("n out of range");
  if ((I | J) & ~full_set(n)) throw ValidationError("index set outside {0..n}");
}

}  // namespace

int mu_tilde_bruteforce(IndexSet I, IndexSet J, int n) {
  check_pattern(I, J, n);
  if (n + 1 > 3) throw ValidationError("family brute force needs n + 1 <= 3");
  const IndexSet full = full_set(n);
  const int subsets = 1 << (n + 1);
  int total = 0;
  // T ranges over sets of subsets K, encoded as bitmasks over the subsets.
  for (std::uint32_t T = 0; T < (std::uint32_t{1} << subsets); ++T) {
    IndexSet u = 0, uc = 0;
    for (int K = 0; K < subsets; ++K) {
      if (T >> K & 1) {
        u |= static_cast<IndexSet>(K);
        uc |= full & ~static_cast<IndexSet>(K);
      }
    }
    if (u == I && uc == J) total += (std::popcount(T) % 2 == 0) ? 1 : -1;
  }
  return total;
}

int mu_tilde_subset_sum(IndexSet I, IndexSet J, int n) {
  check_pattern(I, J, n);
  const IndexSet full = full_set(n);
  int total = 0;
  // Enumerate submasks of I and J.
  for (IndexSet a = I;; a = (a - 1) & I) {
    for (IndexSet b = J;; b = (b - 1) & J) {
      if ((a | b) != full) {
        const int s = std::popcount(I & ~a) + std::popcount(J & ~b);
        total += (s % 2 == 0) ? 1 : -1;
      }
      if (b == 0) break;
    }
    if (a == 0) break;
  }
  return total;
}

int mu_tilde(IndexSet I, IndexSet J, int n) {
  check_pattern(I, J, n);
  const int empty = (I == 0 && J == 0) ? 1 : 0;
  if ((I | J) != full_set(n)) return empty;
  return empty - ((std::popcount(I & J) % 2 == 0) ? 1 : -1);
}

int mu_couple(std::span<const std::int64_t> e, std::span<const std::int64_t> f) {
  if (e.size() != f.size() || e.empty()) throw ValidationError("e and f must have equal nonzero length");
  const int n = static_cast<int>(e.size()) - 1;
  std::map<std::uint64_t, std::pair<IndexSet, IndexSet>> patterns;
  for (std::size_t i = 0; i < e.size(); ++i) {
    if (e[i] < 1 || f[i] < 1) throw ValidationError("e_i and f_i must be positive");
    if (!is_squarefree(f[i])) throw ValidationError("f_i must be squarefree");
    for (const auto& pf : factorize(static_cast<std::uint64_t>(e[i])).factors) {
      if (pf.exponent > 1) return 0;
      patterns[pf.prime].first |= IndexSet{1} << i;
    }
    for (const auto& pf : factorize(static_cast<std::uint64_t>(f[i])).factors) {
      patterns[pf.prime].second |= IndexSet{1} << i;
    }
  }
  int mu = 1;
  for (const auto& [p, IJ] : patterns) {
    mu *= mu_tilde(IJ.first, IJ.second, n);
    if (mu == 0) return 0;
  }
  return mu;
}

std::vector<CoupleEF> enumerate_couples(int n, std::int64_t B, double budget) {
  if (n < 2 || n > 20) throw ValidationError("n must be in [2, 20]");
  if (B < 1) throw ValidationError("B must be >= 1");
  const std::size_t m = static_cast<std::size_t>(n + 1);
  const auto primes = primes_up_to(isqrt(static_cast<std::uint64_t>(B)));
  std::vector<CoupleEF> out;
  std::vector<std::int64_t> e(m, 1), f(m, 1), w(m, 1);
  IndexSet I = 0, J = 0;

  // Choose, coordinate by coordinate, whether p goes into e_i, f_i or both.
  std::function<void(std::size_t, int)> dfs_primes;
  std::function<void(std::size_t, std::size_t, std::int64_t, int)> dfs_coords =
      [&](std::size_t k, std::size_t i, std::int64_t p, int mu) {
        if (i == m) {
          const int local = mu_tilde(I, J, n);
          const IndexSet sI = I, sJ = J;
          I = J = 0;
          dfs_primes(k + 1, mu * local);
          I = sI;
          J = sJ;
          return;
        }
        const std::int64_t keep = w[i], ke = e[i], kf = f[i];
        const std::int64_t p2 = p * p, p3 = p2 * p;
        // I only, J only, both.
        const std::int64_t mult[3] = {p2, p3, p2 * p3};
        for (int c = 0; c < 3; ++c) {
          if (keep > B / mult[c]) continue;
          w[i] = keep * mult[c];
          if (c != 1) {
            e[i] = ke * p;
            I |= IndexSet{1} << i;
          }
          if (c != 0) {
            f[i] = kf * p;
            J |= IndexSet{1} << i;
          }
          dfs_coords(k, i + 1, p, mu);
          w[i] = keep;
          e[i] = ke;
          f[i] = kf;
          I &= ~(IndexSet{1} << i);
          J &= ~(IndexSet{1} << i);
        }
      };
  dfs_primes = [&](std::size_t k, int mu) {
    const std::int64_t wmax = *std::max_element(w.begin(), w.end());
    std::size_t next = k;
    for (; next < primes.size(); ++next) {
      const auto p = static_cast<std::int64_t>(primes[next]);
      if (wmax > B / (p * p)) break;
      dfs_coords(next, 0, p, mu);
    }
    // No further prime: record the couple.
    if (static_cast<double>(out.size()) >= budget) {
      throw BudgetExceeded("couple enumeration", static_cast<double>(out.size()), budget);
    }
    CoupleEF c;
    c.e = e;
    c.f = f;
    c.mu = mu;
    std::int64_t g = 0;
    for (std::size_t i = 0; i < m; ++i) g = std::gcd(g, e[i] * f[i]);
    c.e_gcd = g;
    out.push_back(std::move(c));
  };
  dfs_primes(0, 1);
  std::sort(out.begin(), out.end(), [](const CoupleEF& a, const CoupleEF& b) {
    return std::tie(a.e, a.f) < std::tie(b.e, b.f);
  });
  return out;
}

InclusionExclusionResult inclusion_exclusion_count(int n, std::int64_t B,
                                                   const ExecPolicy& policy) {
  const auto couples = enumerate_couples(n, B);
  std::vector<Count> part(couples.size(), 0);
  ExecPolicy inner = policy;
  inner.workers = 1;
#pragma omp parallel for schedule(dynamic, 8) num_threads(std::max(policy.workers, 1))
  for (std::size_t i = 0; i < couples.size(); ++i) {
    part[i] = couples[i].mu * count_N(couples[i].e, couples[i].f, B, inner).count;
  }
  InclusionExclusionResult r;
  r.couples = couples.size();
  for (auto v : part) r.count += v;
  return r;
}

}  // namespace orbicount
