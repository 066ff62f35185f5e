#include "orbicount/singular_integral.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <numbers>
#include <vector>

#include "orbicount/errors.hpp"

namespace orbicount {

namespace {

// Gauss-Kronrod 7/15.
constexpr std::array<double, 8> kXk{
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kWk{
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kWg{
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct PanelResult {
  double value = 0.0;
  double error = 0.0;
};

void gk15(const std::function<double(double)>& f, double a, double b,
          double& kronrod, double& gauss) {
  const double c = 0.5 * (a + b), h = 0.5 * (b - a);
  const double fc = f(c);
  kronrod = fc * kWk[7];
  gauss = fc * kWg[3];
  for (int j = 0; j < 7; ++j) {
    const double dx = h * kXk[static_cast<std::size_t>(j)];
    const double s = f(c - dx) + f(c + dx);
    kronrod += kWk[static_cast<std::size_t>(j)] * s;
    if (j % 2 == 1) gauss += kWg[static_cast<std::size_t>(j / 2)] * s;
  }
  kronrod *= h;
  gauss *= h;
}

PanelResult adaptive(const std::function<double(double)>& f, double a, double b,
                     double tol, int depth) {
  double k = 0, g = 0;
  gk15(f, a, b, k, g);
  const double err = std::abs(k - g);
  if (err <= tol || depth >= 30) return {k, err};
  const double m = 0.5 * (a + b);
  const auto l = adaptive(f, a, m, tol / 2, depth + 1);
  const auto r = adaptive(f, m, b, tol / 2, depth + 1);
  return {l.value + r.value, l.error + r.error};
}

void check_eps(std::span<const int> eps, std::size_t min_len = 3) {
  if (eps.size() < min_len) throw ValidationError("eps is too short");
  for (int e : eps) {
    if (e != 1 && e != -1) throw ValidationError("eps entries must be +1 or -1");
  }
}

bool sign_definite(std::span<const int> eps) {
  return std::all_of(eps.begin(), eps.end(), [&](int e) { return e == eps[0]; });
}

IntegralEstimate integrate(std::span<const int> eps, double lower, double t_over_B,
                           const QuadratureOptions& opt) {
  if (opt.gamma_max < 0) throw ValidationError("gamma_max must be >= 0");
  if (opt.tol <= 0) throw ValidationError("tol must be > 0");
  const std::vector<int> e(eps.begin(), eps.end());
  const double two_pi = 2.0 * std::numbers::pi;
  // Integrand on gamma > 0; the gamma < 0 half is its complex conjugate.
  auto f = [&](double g) {
    std::complex<double> prod(std::cos(two_pi * g * t_over_B), -std::sin(two_pi * g * t_over_B));
    for (int s : e) prod *= box_phase_integral(s * g, lower);
    return prod.real();
  };
  const double G = opt.gamma_max;
  const auto panels = static_cast<std::size_t>(std::ceil(G / opt.panel));
  std::vector<PanelResult> res(panels);
  const double panel_tol = opt.tol / 4.0 / std::max<double>(1.0, static_cast<double>(panels));
#pragma omp parallel for schedule(dynamic, 16) num_threads(std::max(opt.workers, 1))
  for (std::size_t i = 0; i < panels; ++i) {
    const double a = static_cast<double>(i) * opt.panel;
    const double b = std::min(G, a + opt.panel);
    res[i] = adaptive(f, a, b, panel_tol, 0);
  }
  IntegralEstimate est;
  est.gamma_max = G;
  for (const auto& r : res) {
    est.value += 2.0 * r.value;
    est.quadrature_error += 2.0 * r.error;
  }
  const int n = static_cast<int>(eps.size()) - 1;
  const double c = box_envelope_constant() * (lower > 0 ? 2.0 : 1.0);
  // 2 int_G^inf (c g^{-1/2})^{n+1} dg
  est.tail_bound = G > 0 ? 2.0 * std::pow(c, n + 1) * 2.0 / (n - 1) * std::pow(G, (1.0 - n) / 2.0)
                         : std::numeric_limits<double>::infinity();
  est.imag = 0.0;  // conjugate symmetry of the integrand
  if (est.value < -opt.tol - est.tail_bound - est.quadrature_error) {
    throw InconsistencyError("singular integral is negative beyond tolerance");
  }
  return est;
}

}  // namespace

IntegralEstimate singular_integral(std::span<const int> eps,
                                   const QuadratureOptions& opt) {
  check_eps(eps);
  if (eps.size() < 4) throw ValidationError("singular_integral needs n >= 3");
  if (sign_definite(eps)) {
    IntegralEstimate est;
    est.gamma_max = opt.gamma_max;
    est.short_circuit = true;
    est.note = "sign-definite form: only the origin on the closed box";
    return est;
  }
  return integrate(eps, 0.0, 0.0, opt);
}

IntegralEstimate singular_integral_tB(std::span<const int> eps, std::int64_t t,
                                      double B, const QuadratureOptions& opt) {
  check_eps(eps);
  if (eps.size() < 4) throw ValidationError("singular_integral needs n >= 3");
  if (!(B >= 1.0)) throw ValidationError("B must be >= 1");
  if (sign_definite(eps) && static_cast<double>(t) * eps[0] <= 0) {
    IntegralEstimate est;
    est.gamma_max = opt.gamma_max;
    est.short_circuit = true;
    est.note = "sign-definite form does not reach t/B on the box";
    return est;
  }
  return integrate(eps, 1.0 / std::sqrt(B), static_cast<double>(t) / B, opt);
}

namespace {

double asinh_like(double y, double tau) {
  // int sqrt(y^2 + tau) dy = (y sqrt(y^2+tau) + tau ln(y + sqrt(y^2+tau))) / 2
  const double r = std::sqrt(std::max(0.0, y * y + tau));
  const double lg = (tau == 0.0) ? 0.0 : tau * std::log(y + r);
  return 0.5 * (y * r + lg);
}

// area{(x, y) in [0,1]^2 : x^2 - y^2 < tau}
double area_mixed(double tau) {
  if (tau >= 1.0) return 1.0;
  if (tau <= -1.0) return 0.0;
  if (tau >= 0.0) {
    const double Y = std::sqrt(1.0 - tau);
    const double at0 = tau > 0 ? 0.5 * tau * std::log(std::sqrt(tau)) : 0.0;
    return asinh_like(Y, tau) - at0 + (1.0 - Y);
  }
  const double y0 = std::sqrt(-tau);
  return asinh_like(1.0, tau) - 0.5 * tau * std::log(y0);
}

// area{(x, y) in [0,1]^2 : x^2 + y^2 < tau}
double area_disc(double tau) {
  if (tau <= 0.0) return 0.0;
  if (tau >= 2.0) return 1.0;
  if (tau <= 1.0) return std::numbers::pi * tau / 4.0;
  const double a = std::sqrt(tau - 1.0), r = std::sqrt(tau);
  return a + 0.5 * (std::sqrt(tau - 1.0) + tau * std::asin(1.0 / r) - a - tau * std::asin(a / r));
}

}  // namespace

OracleEstimate shell_density_oracle(std::span<const int> eps, double delta,
                                    int grid, int workers, double budget) {
  check_eps(eps, 2);
  if (!(delta > 0.0 && delta <= 0.1)) throw ValidationError("delta must be in (0, 0.1]");
  if (grid < 2) throw ValidationError("grid must be >= 2");
  const std::size_t m = eps.size();
  // Two analytic coordinates: opposite signs if possible.
  std::size_t j = 0, k = 1;
  for (std::size_t i = 1; i < m; ++i) {
    if (eps[i] != eps[0]) {
      k = i;
      break;
    }
  }
  const bool mixed = eps[j] != eps[k];
  std::vector<int> rest;
  for (std::size_t i = 0; i < m; ++i) {
    if (i != j && i != k) rest.push_back(eps[i]);
  }
  const double work = std::pow(static_cast<double>(grid), static_cast<double>(rest.size()));
  if (work > budget) throw BudgetExceeded("shell oracle grid points", work, budget);

  // V(tau) = area{eps_j x^2 + eps_k y^2 < tau}.
  auto V = [&](double tau) {
    if (mixed) return eps[j] > 0 ? area_mixed(tau) : 1.0 - area_mixed(-tau);
    return eps[j] > 0 ? area_disc(tau) : 1.0 - area_disc(-tau);
  };
  auto run = [&](int g) {
    const std::size_t d = rest.size();
    if (d == 0) return (V(delta) - V(-delta)) / (2.0 * delta);
    std::vector<double> sq(static_cast<std::size_t>(g));
    for (int i = 0; i < g; ++i) {
      const double x = (i + 0.5) / g;
      sq[static_cast<std::size_t>(i)] = x * x;
    }
    const auto G = static_cast<std::size_t>(g);
    std::size_t inner = 1;
    for (std::size_t i = 1; i < d; ++i) inner *= G;
    std::vector<double> partial(G, 0.0);
#pragma omp parallel for schedule(dynamic, 1) num_threads(std::max(workers, 1))
    for (std::size_t i0 = 0; i0 < G; ++i0) {
      std::vector<std::size_t> idx(d, 0);
      double acc = 0.0;
      for (std::size_t r = 0; r < inner; ++r) {
        std::size_t rr = r;
        double s = rest.empty() ? 0.0 : rest[0] * sq[i0];
        for (std::size_t c = 1; c < d; ++c) {
          s += rest[c] * sq[rr % G];
          rr /= G;
        }
        acc += V(delta - s) - V(-delta - s);
      }
      partial[i0] = acc;
    }
    double total = 0.0;
    for (double p : partial) total += p;
    return total / (2.0 * delta) / std::pow(static_cast<double>(g), static_cast<double>(d));
  };
  OracleEstimate est;
  est.grid = grid;
  est.value = run(grid);
  est.error_estimate = std::abs(est.value - run(std::max(2, grid / 2)));
  return est;
}

}  // namespace orbicount
