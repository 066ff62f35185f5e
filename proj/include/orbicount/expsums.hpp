#pragma once

// Exponential sums over the squareful chart,
//
//   S_a(alpha) = sum_{1 <= |a x^2 y^3| <= B, y squarefree} e(alpha a x^2 y^3),
//   E(alpha)   = e(-alpha t) prod_i S_{a_i}(alpha),
//
// the Farey arc dissection used to split [0, 1), and the fourth moment.
// Both S and E are trigonometric polynomials, so an N-point Riemann sum of
// E over [0, 1) is exact once N exceeds the frequency span.

#include <complex>
#include <cstdint>
#include <vector>

#include "orbicount/enumerate.hpp"

namespace orbicount {

struct ArcDecomposition {
  double Delta = 1.0 / 16;
  double P = 1.0;

  void validate() const;
  double q_max() const;      // P^Delta
  double half_width() const; // P^{Delta - 2}
};
// P = B^{1/2}, Delta = 1/16.
ArcDecomposition default_arcs(double B);

struct ArcLabel {
  bool major = false;
  std::int64_t q = 0, a = 0;  // set when major
};

struct Fraction {
  std::int64_t a = 0, q = 1;
};

std::complex<double> S_weighted(std::int64_t a, double alpha, std::int64_t B,
                                double budget = 1e8);
// Same sum over a prepared coefficient list.
std::complex<double> S_from_list(const CoordinateList& list, double alpha);
std::complex<double> E_full(const DiagonalInstance& inst, double alpha,
                            std::int64_t B, double budget = 1e8);

// (1/N) sum_k E(k/N). Exact (up to rounding) once N > sum_i max|v_i| + |t|.
std::complex<double> riemann_E(const DiagonalInstance& inst, std::int64_t B,
                               std::int64_t N, int workers = 1);
// (1/N) sum_k |S_a(k/N)|^4. Exact once N > 4 max|v|.
double riemann_fourth(std::int64_t a, std::int64_t B, std::int64_t N,
                      int workers = 1);

// Last continued-fraction convergent with q <= Q; |q alpha - a| < 1/Q.
Fraction rational_approx(double alpha, std::int64_t Q);

// Smallest q, then smallest a, whose arc contains alpha (distance on R/Z).
ArcLabel classify_arc(double alpha, const ArcDecomposition& arcs);
// Union bound sum_{q <= P^Delta} q * 2 P^{Delta-2} on the major arc measure.
double major_measure_bound(const ArcDecomposition& arcs);

// int_0^1 |S_a|^4 = #{v1 + v2 = v3 + v4}, from the pair-sum histogram.
Count fourth_moment(std::int64_t a, std::int64_t B, const ExecPolicy& policy = {});
Count fourth_moment_serial(std::int64_t a, std::int64_t B);

struct MinorScan {
  double value = 0.0;      // max |S(alpha)| / S(0) over minor samples
  double at_alpha = 0.0;
  std::int64_t samples = 0;
  std::int64_t rejected = 0;  // draws that landed on major arcs
  std::uint64_t seed = 0;
};
// Uniform draws from mt19937_64(seed), rejected while major. The draws are
// generated serially so the result does not depend on `workers`.
MinorScan minor_sup_scan(std::int64_t a, std::int64_t B,
                         const ArcDecomposition& arcs, std::int64_t samples,
                         std::uint64_t seed, int workers = 1);

}  // namespace orbicount
