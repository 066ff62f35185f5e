#pragma once

// Leading constants of the counting functions, as truncated sums over the
// squarefree part y of the squareful chart.
//
//   C_{a,t} = 2^{n+1} sum_y S_{y,a,t} J_{sgn(a y)} / prod |a_i y_i^3|^{1/2}
//   D       = sum_{(e,f)} mu(e,f) C_{e^2 f^3, 0}
//   C       = D / 2^{n+2}               (projective count)
//
// The singular series goes through the Euler product by default: every
// local factor depends only on the valuations and square classes of the
// coefficients at p, so it is cached on that data. For D the couple sum is
// folded into the y sum (Y = f y) and becomes a product of per-prime factors
// over the local patterns (I, J), cut at gcd(e_i f_i) <= e_bound.

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "orbicount/enumerate.hpp"

namespace orbicount {

enum class SeriesMethod { Euler, Truncated };

// Literal: C_{e^2 f^3, 0} over every squarefree y, no coprimality.
// Coprime: y coprime to f coordinatewise, which is what N_{(e,f)} counts.
enum class DFlavour { Literal, Coprime };

struct ConstantParams {
  int y_max = 40;
  std::int64_t q_max = 2000;   // Truncated method only
  std::int64_t e_bound = 20;
  std::int64_t p_max = 1000;   // good primes with a character-dependent factor
  SeriesMethod method = SeriesMethod::Euler;
  DFlavour flavour = DFlavour::Coprime;
  int workers = 1;
  double budget = 5e7;         // vectors y (after symmetry)
};

struct ConstantEstimate {
  std::string kind;  // "C_at", "D", "C", "C_Q"
  int n = 0;
  std::vector<std::int64_t> a;
  std::int64_t t = 0;
  ConstantParams params;
  double value = 0.0;
  double y_tail = 0.0;       // value(y_max) - value(y_max / 4), ~ y_max^{-1/2} decay
  double series_tail = 0.0;  // summed singular series tail bounds
  std::size_t terms = 0;     // vectors after symmetry
  double wall_time = 0.0;
  std::string note;
};

ConstantEstimate constant_C_at(const DiagonalInstance& inst, const ConstantParams& params = {});
ConstantEstimate constant_D(int n, const ConstantParams& params = {});
ConstantEstimate constant_orbifold_C(int n, const ConstantParams& params = {});
// Inner couple sum for one y (f_i | y_i); summing over y gives D (Coprime).
ConstantEstimate constant_quadric(std::span<const std::int64_t> y, const ConstantParams& params = {});

double predict(int n, double B, const ConstantEstimate& constant);

// Recorded cap for C_{a,t}: 2^{n+1} max J (2 zeta(3/2)/zeta(3))^{n+1} times
// 4 zeta(n-1)/zeta(n) for the singular series. Not a proof; the empirical
// maximum over sampled a sits at a = (1, ..., 1), well below it.
double uniform_cap(int n);
// log of C_uniform prod_p (1 + 2 * 2^{2^{n+1}} / p^{n-1}); the product itself
// overflows a double.
double literal_D_log_bound(int n);

}  // namespace orbicount
