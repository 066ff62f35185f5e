#pragma once

// The archimedean density of  sum_i eps_i x_i^2 = 0  on the box [0,1]^{n+1},
//
//   J_eps = int_R prod_i int_0^1 e(eps_i gamma x^2) dx dgamma,
//
// and the truncated variant with inner box [B^{-1/2}, 1] and phase
// e(-gamma t / B). Box factors are Fresnel integrals.

#include <complex>
#include <cstdint>
#include <span>
#include <string>

namespace orbicount {

// C(z) + i S(z) with C(z) = int_0^z cos(pi u^2 / 2) du.
std::complex<double> fresnel_cs(double z);

// int_lower^1 e(gamma x^2) dx.
std::complex<double> box_phase_integral(double gamma, double lower = 0.0);

// c with |int_0^L e(gamma x^2) dx| <= c |gamma|^{-1/2} for every L.
double box_envelope_constant();

struct QuadratureOptions {
  double gamma_max = 1e4;
  double tol = 1e-6;
  double panel = 0.25;  // initial panel width, below the oscillation period
  int workers = 1;
};

struct IntegralEstimate {
  double value = 0.0;
  double imag = 0.0;
  double gamma_max = 0.0;
  double quadrature_error = 0.0;
  double tail_bound = 0.0;
  bool short_circuit = false;
  std::string note;
};

IntegralEstimate singular_integral(std::span<const int> eps,
                                   const QuadratureOptions& opt = {});
// gamma integration over |gamma| < opt.gamma_max (the L of the definition).
IntegralEstimate singular_integral_tB(std::span<const int> eps, std::int64_t t,
                                      double B, const QuadratureOptions& opt = {});

struct OracleEstimate {
  double value = 0.0;
  double error_estimate = 0.0;  // |grid - grid/2|
  int grid = 0;
};

// vol{x in [0,1]^{n+1} : |sum eps_i x_i^2| < delta} / (2 delta). Two
// coordinates are integrated in closed form, the rest on a midpoint grid.
OracleEstimate shell_density_oracle(std::span<const int> eps, double delta,
                                    int grid, int workers = 1,
                                    double budget = 2e9);

}  // namespace orbicount
