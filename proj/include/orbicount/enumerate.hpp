#pragma once

// Exact counters for the point sets on  X_0 + ... + X_n = 0  with squareful
// coordinates, all expressed in the (x, y) chart  a = x^2 y^3.
//
//   M(B)        sum x_i^2 y_i^3 = 0, gcd(x_i y_i) = 1, |x_i^2 y_i^3| <= B
//   M_{a,t}(B)  sum a_i x_i^2 y_i^3 = t, |a_i x_i^2 y_i^3| <= B
//   N_{e,f}(B)  as M_{1,0}(B) with e_i | x_i and f_i | y_i
//
// y_i is squarefree and x_i, y_i are nonzero throughout.

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "orbicount/int128.hpp"
#include "orbicount/sum_count.hpp"

namespace orbicount {

struct DiagonalInstance {
  int n = 0;                   // n + 1 variables
  std::vector<std::int64_t> a;  // nonzero coefficients
  std::int64_t t = 0;

  void validate() const;
};

// Exact positive rational height bound num/den.
struct HeightBound {
  std::int64_t num = 1;
  std::int64_t den = 1;

  static HeightBound integer(std::int64_t b) { return {b, 1}; }
  // Largest integer h with h <= num/den; |v| <= num/den iff |v| <= floor().
  std::int64_t floor() const;
  std::string to_string() const;
};

struct CountResult {
  Count count = 0;
  HeightBound bound;
  double wall_time = 0.0;
};

CountResult count_M(int n, std::int64_t B, const ExecPolicy& policy = {});
CountResult count_M_at(const DiagonalInstance& inst, HeightBound B,
                       const ExecPolicy& policy = {});
CountResult count_N(std::span<const std::int64_t> e,
                    std::span<const std::int64_t> f, std::int64_t B,
                    const ExecPolicy& policy = {});

// The rescaled form: v_i = e_i^2 f_i^3 / g^2 with g = gcd(e_i f_i), counted
// by count_M_at(v, 0, B / g^2). Returns g and v too.
struct Rescaling {
  std::int64_t g = 1;
  std::vector<std::int64_t> v;
};
Rescaling rescale_couple(std::span<const std::int64_t> e,
                         std::span<const std::int64_t> f);
CountResult count_N_rescaled(std::span<const std::int64_t> e,
                             std::span<const std::int64_t> f, std::int64_t B,
                             const ExecPolicy& policy = {});
// Rescaled count restricted to gcd(y_i', f_i) = 1, which is what keeps
// y_i = f_i y_i' squarefree.
CountResult count_N_rescaled_coprime(std::span<const std::int64_t> e,
                                     std::span<const std::int64_t> f,
                                     std::int64_t B,
                                     const ExecPolicy& policy = {});
// count_M_at with the extra condition gcd(y_i, coprime_to[i]) = 1.
CountResult count_M_at_coprime(const DiagonalInstance& inst, HeightBound B,
                               std::span<const std::int64_t> coprime_to,
                               const ExecPolicy& policy = {});

CountResult count_orbifold(int n, std::int64_t B, const ExecPolicy& policy = {});

// Points of pi_y(Q_y(Q)^+) of height <= B: positive x with
// sum y_i^3 x_i^2 = 0 and gcd(x_i y_i) = 1 (one representative per image
// point; the 2^{n+1} sign choices of x map to the same orbifold point).
CountResult count_quadric_points(std::span<const std::int64_t> y,
                                 std::int64_t B, const ExecPolicy& policy = {});

struct Solution {
  std::vector<std::int64_t> x;
  std::vector<std::int64_t> y;
};
struct SolutionList {
  std::vector<Solution> solutions;
  bool truncated = false;
};
SolutionList enumerate_solutions(const DiagonalInstance& inst, HeightBound B,
                                 std::size_t cap);

// Frequencies of a_i mod m over affine representatives of orbifold points
// (both a and -a), as exact counts; total is the number of representatives.
struct ResidueTable {
  std::int64_t modulus = 1;
  int coordinate = 0;
  std::vector<Count> counts;  // indexed by residue 0..m-1
  Count total = 0;
};
ResidueTable residue_distribution(int n, std::int64_t B, std::int64_t modulus,
                                  int coordinate, const ExecPolicy& policy = {});

// Building blocks shared with the exponential-sum module.
// Signed values a * s (s squareful, |a s| <= bound), weight 2 for the two
// signs of x.
CoordinateList coefficient_list(std::int64_t a, std::int64_t bound,
                                std::int64_t y_coprime_to = 1);

// Serial brute-force oracles: direct loops over (x, y) pairs with every
// condition checked on the reconstructed tuple. Small B only.
namespace reference {
Count count_M(int n, std::int64_t B);
Count count_M_at(const DiagonalInstance& inst, HeightBound B);
Count count_N(std::span<const std::int64_t> e, std::span<const std::int64_t> f,
              std::int64_t B);
Count count_orbifold(int n, std::int64_t B);
Count count_quadric_points(std::span<const std::int64_t> y, std::int64_t B);
}  // namespace reference

}  // namespace orbicount
