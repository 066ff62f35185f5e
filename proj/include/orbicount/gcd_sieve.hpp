#pragma once

// The sieve that removes the condition gcd(x_i y_i) = 1.
//
// For a prime p and a point, let I = {i : p | x_i} and J = {i : p | y_i}.
// The point survives at p iff I u J != {0..n}. Writing that indicator as
// sum_{I' in I, J' in J} mu~(I', J') gives local factors mu~ and the couple
// weights mu(e, f) = prod_p mu~(I_p, J_p), so that
//
//   #M(B) = sum_{(e,f)} mu(e, f) #N_{e,f}(B).

#include <cstdint>
#include <span>
#include <vector>

#include "orbicount/int128.hpp"
#include "orbicount/sum_count.hpp"

namespace orbicount {

using IndexSet = std::uint32_t;  // bit i set <=> i in the set

// Signed count of families T of subsets of {0..n} with union_{K in T} K = I
// and union_{K in T} K^c = J, weighted (-1)^{|T|}. n + 1 <= 3.
int mu_tilde_bruteforce(IndexSet I, IndexSet J, int n);
// sum over I' in I, J' in J with I' u J' != {0..n} of (-1)^{|I\I'| + |J\J'|}.
int mu_tilde_subset_sum(IndexSet I, IndexSet J, int n);
// The same sum in product form: [I = J = 0] - [I u J = full] (-1)^{|I n J|}.
int mu_tilde(IndexSet I, IndexSet J, int n);

struct CoupleEF {
  std::vector<std::int64_t> e;
  std::vector<std::int64_t> f;
  int mu = 0;
  std::int64_t e_gcd = 1;  // gcd(e_i f_i)
};

int mu_couple(std::span<const std::int64_t> e, std::span<const std::int64_t> f);

// All couples with mu != 0 and max_i e_i^2 f_i^3 <= B, sorted by (e, f).
std::vector<CoupleEF> enumerate_couples(int n, std::int64_t B,
                                        double budget = 2e7);

struct InclusionExclusionResult {
  Count count = 0;
  std::size_t couples = 0;
};
InclusionExclusionResult inclusion_exclusion_count(int n, std::int64_t B,
                                                   const ExecPolicy& policy = {});

}  // namespace orbicount
