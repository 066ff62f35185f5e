#include "orbicount/expsums.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <random>

#include "orbicount/errors.hpp"

namespace orbicount {

namespace {

constexpr long double kTwoPi = 2.0L * std::numbers::pi_v<long double>;

CoordinateList list_for(std::int64_t a, std::int64_t B, double budget) {
  if (a == 0) throw ValidationError("a must be nonzero");
  if (B < 1) throw ValidationError("B must be >= 1");
  // ~ 2 * 2 * 2.17 sqrt(B / |a|) signed pairs
  const double est = 9.0 * std::sqrt(static_cast<double>(B) / std::abs(static_cast<double>(a)));
  if (est > budget) throw BudgetExceeded("exponential sum terms", est, budget);
  return coefficient_list(a, B);
}

std::int64_t max_abs(const CoordinateList& l) {
  std::int64_t m = 0;
  for (const auto& wv : l) m = std::max(m, wv.value < 0 ? -wv.value : wv.value);
  return m;
}

// e(j / N) for j in [0, N).
std::vector<std::complex<double>> unit_roots(std::int64_t N) {
  std::vector<std::complex<double>> r(static_cast<std::size_t>(N));
  for (std::int64_t j = 0; j < N; ++j) {
    const long double th = kTwoPi * static_cast<long double>(j) / static_cast<long double>(N);
    r[static_cast<std::size_t>(j)] = {static_cast<double>(std::cos(th)), static_cast<double>(std::sin(th))};
  }
  return r;
}

std::complex<long double> S_at_root(const CoordinateList& l, std::int64_t k, std::int64_t N,
                                    const std::vector<std::complex<double>>& roots) {
  std::complex<long double> s = 0;
  for (const auto& wv : l) {
    std::int64_t j = static_cast<std::int64_t>((static_cast<__int128>(k) * wv.value) % N);
    if (j < 0) j += N;
    const auto& z = roots[static_cast<std::size_t>(j)];
    s += static_cast<long double>(wv.weight) * std::complex<long double>(z.real(), z.imag());
  }
  return s;
}

}  // namespace

void ArcDecomposition::validate() const {
  if (!(Delta > 0.0 && Delta <= 1.0)) throw ValidationError("Delta must be in (0, 1]");
  if (!(P >= 1.0)) throw ValidationError("P must be >= 1");
}

double ArcDecomposition::q_max() const { return std::pow(P, Delta); }
double ArcDecomposition::half_width() const { return std::pow(P, Delta - 2.0); }

ArcDecomposition default_arcs(double B) {
  if (!(B >= 1.0)) throw ValidationError("B must be >= 1");
  return ArcDecomposition{1.0 / 16, std::sqrt(B)};
}

std::complex<double> S_from_list(const CoordinateList& list, double alpha) {
  const long double al = static_cast<long double>(alpha) - std::floor(static_cast<long double>(alpha));
  std::complex<long double> s = 0;
  for (const auto& wv : list) {
    const long double x = al * static_cast<long double>(wv.value);
    const long double th = kTwoPi * (x - std::floor(x));
    s += static_cast<long double>(wv.weight) * std::complex<long double>(std::cos(th), std::sin(th));
  }
  return {static_cast<double>(s.real()), static_cast<double>(s.imag())};
}

std::complex<double> S_weighted(std::int64_t a, double alpha, std::int64_t B, double budget) {
  return S_from_list(list_for(a, B, budget), alpha);
}

std::complex<double> E_full(const DiagonalInstance& inst, double alpha, std::int64_t B,
                            double budget) {
  inst.validate();
  const long double al = static_cast<long double>(alpha) - std::floor(static_cast<long double>(alpha));
  const long double x = -al * static_cast<long double>(inst.t);
  const long double th = kTwoPi * (x - std::floor(x));
  std::complex<double> e(static_cast<double>(std::cos(th)), static_cast<double>(std::sin(th)));
  for (auto ai : inst.a) e *= S_weighted(ai, alpha, B, budget);
  return e;
}

std::complex<double> riemann_E(const DiagonalInstance& inst, std::int64_t B, std::int64_t N,
                               int workers) {
  inst.validate();
  if (N < 1) throw ValidationError("N must be >= 1");
  std::vector<CoordinateList> lists;
  for (auto ai : inst.a) lists.push_back(list_for(ai, B, 1e8));
  const auto roots = unit_roots(N);
  std::vector<std::complex<long double>> vals(static_cast<std::size_t>(N));
#pragma omp parallel for schedule(static) num_threads(std::max(workers, 1))
  for (std::int64_t k = 0; k < N; ++k) {
    std::int64_t j = static_cast<std::int64_t>((static_cast<__int128>(-k) * inst.t) % N);
    if (j < 0) j += N;
    const auto& z = roots[static_cast<std::size_t>(j)];
    std::complex<long double> e(z.real(), z.imag());
    for (const auto& l : lists) e *= S_at_root(l, k, N, roots);
    vals[static_cast<std::size_t>(k)] = e;
  }
  std::complex<long double> s = 0;
  for (const auto& v : vals) s += v;
  s /= static_cast<long double>(N);
  return {static_cast<double>(s.real()), static_cast<double>(s.imag())};
}

double riemann_fourth(std::int64_t a, std::int64_t B, std::int64_t N, int workers) {
  if (N < 1) throw ValidationError("N must be >= 1");
  const auto l = list_for(a, B, 1e8);
  const auto roots = unit_roots(N);
  std::vector<long double> vals(static_cast<std::size_t>(N));
#pragma omp parallel for schedule(static) num_threads(std::max(workers, 1))
  for (std::int64_t k = 0; k < N; ++k) {
    const long double r = std::norm(S_at_root(l, k, N, roots));
    vals[static_cast<std::size_t>(k)] = r * r;
  }
  long double s = 0;
  for (auto v : vals) s += v;
  return static_cast<double>(s / static_cast<long double>(N));
}

Fraction rational_approx(double alpha, std::int64_t Q) {
  if (Q < 1) throw ValidationError("Q must be >= 1");
  if (!std::isfinite(alpha)) throw ValidationError("alpha must be finite");
  // Convergents h_k / k_k of the continued fraction of alpha.
  long double x = alpha;
  std::int64_t h0 = 1, h1 = static_cast<std::int64_t>(std::floor(x));
  std::int64_t k0 = 0, k1 = 1;
  long double frac = x - std::floor(x);
  for (int it = 0; it < 64 && frac > 1e-18L; ++it) {
    x = 1.0L / frac;
    const long double fa = std::floor(x);
    if (fa > 4e18L) break;
    const auto an = static_cast<std::int64_t>(fa);
    frac = x - fa;
    const __int128 k2 = static_cast<__int128>(an) * k1 + k0;
    if (k2 > Q) break;
    const __int128 h2 = static_cast<__int128>(an) * h1 + h0;
    h0 = h1;
    k0 = k1;
    h1 = static_cast<std::int64_t>(h2);
    k1 = static_cast<std::int64_t>(k2);
  }
  Fraction f{h1, k1};
  const long double err = std::abs(static_cast<long double>(f.q) * alpha - static_cast<long double>(f.a));
  if (!(err < 1.0L / static_cast<long double>(Q))) {
    throw InconsistencyError("rational_approx lost the Dirichlet bound (precision)");
  }
  return f;
}

ArcLabel classify_arc(double alpha, const ArcDecomposition& arcs) {
  arcs.validate();
  if (!(alpha >= 0.0 && alpha < 1.0)) throw ValidationError("alpha must be in [0, 1)");
  const auto qmax = static_cast<std::int64_t>(std::floor(arcs.q_max() + 1e-12));
  const double hw = arcs.half_width();
  for (std::int64_t q = 1; q <= qmax; ++q) {
    const std::int64_t a0 = std::llround(alpha * static_cast<double>(q));
    std::int64_t best = 0;
    for (std::int64_t a = a0 - 1; a <= a0 + 1; ++a) {
      std::int64_t ar = ((a % q) + q) % q;
      if (ar == 0) ar = q;
      if (std::gcd(ar, q) != 1) continue;
      double d = std::abs(alpha - static_cast<double>(ar) / static_cast<double>(q));
      d = std::min(d, 1.0 - d);
      if (d < hw && (best == 0 || ar < best)) best = ar;
    }
    if (best != 0) return ArcLabel{true, q, best};
  }
  return ArcLabel{};
}

double major_measure_bound(const ArcDecomposition& arcs) {
  arcs.validate();
  const auto qmax = static_cast<std::int64_t>(std::floor(arcs.q_max() + 1e-12));
  double s = 0.0;
  for (std::int64_t q = 1; q <= qmax; ++q) s += static_cast<double>(q);
  return s * 2.0 * arcs.half_width();
}

Count fourth_moment_serial(std::int64_t a, std::int64_t B) {
  const auto l = list_for(a, B, 1e9);
  const std::int64_t R = 2 * max_abs(l);
  std::vector<std::int64_t> H(static_cast<std::size_t>(2 * R + 1), 0);
  for (const auto& u : l) {
    for (const auto& v : l) H[static_cast<std::size_t>(u.value + v.value + R)] += u.weight * v.weight;
  }
  Count c = 0;
  for (auto h : H) c += static_cast<Count>(h) * h;
  return c;
}

Count fourth_moment(std::int64_t a, std::int64_t B, const ExecPolicy& policy) {
  const auto l = list_for(a, B, policy.budget);
  const double work = static_cast<double>(l.size()) * static_cast<double>(l.size());
  if (work > policy.budget) throw BudgetExceeded("fourth moment pairs", work, policy.budget);
  const std::int64_t R = 2 * max_abs(l);
  // Blocks of the pair-sum range; within a block, v2 runs over a contiguous
  // slice of the sorted list.
  const std::int64_t width = std::max<std::int64_t>(1, (2 * R + 1 + 255) / 256);
  const std::int64_t blocks = (2 * R + 1 + width - 1) / width;
  std::vector<Count> part(static_cast<std::size_t>(blocks), 0);
#pragma omp parallel num_threads(std::max(policy.workers, 1))
  {
    std::vector<std::int64_t> H(static_cast<std::size_t>(width));
#pragma omp for schedule(dynamic, 1)
    for (std::int64_t b = 0; b < blocks; ++b) {
      const std::int64_t lo = -R + b * width, hi = std::min(R + 1, lo + width);
      std::fill(H.begin(), H.end(), 0);
      for (const auto& u : l) {
        auto it = std::lower_bound(l.begin(), l.end(), lo - u.value,
                                   [](const WeightedValue& w, std::int64_t v) { return w.value < v; });
        for (; it != l.end() && u.value + it->value < hi; ++it) {
          H[static_cast<std::size_t>(u.value + it->value - lo)] += u.weight * it->weight;
        }
      }
      Count c = 0;
      for (std::int64_t s = 0; s < hi - lo; ++s) c += static_cast<Count>(H[static_cast<std::size_t>(s)]) * H[static_cast<std::size_t>(s)];
      part[static_cast<std::size_t>(b)] = c;
    }
  }
  Count total = 0;
  for (auto c : part) total += c;
  return total;
}

MinorScan minor_sup_scan(std::int64_t a, std::int64_t B, const ArcDecomposition& arcs,
                         std::int64_t samples, std::uint64_t seed, int workers) {
  arcs.validate();
  if (samples < 1) throw ValidationError("samples must be >= 1");
  const auto l = list_for(a, B, 1e8);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  MinorScan out;
  out.seed = seed;
  std::vector<double> alphas;
  alphas.reserve(static_cast<std::size_t>(samples));
  while (static_cast<std::int64_t>(alphas.size()) < samples) {
    const double x = U(rng);
    if (classify_arc(x, arcs).major) {
      if (++out.rejected > 1000 * samples) throw BudgetExceeded("minor-arc rejection draws", static_cast<double>(out.rejected), 1000.0 * samples);
      continue;
    }
    alphas.push_back(x);
  }
  std::vector<double> vals(alphas.size());
#pragma omp parallel for schedule(static) num_threads(std::max(workers, 1))
  for (std::size_t i = 0; i < alphas.size(); ++i) vals[i] = std::abs(S_from_list(l, alphas[i]));
  double S0 = 0.0;
  for (const auto& wv : l) S0 += static_cast<double>(wv.weight);
  std::size_t best = 0;
  for (std::size_t i = 1; i < vals.size(); ++i) {
    if (vals[i] > vals[best]) best = i;
  }
  out.value = vals[best] / S0;
  out.at_alpha = alphas[best];
  out.samples = samples;
  return out;
}

}  // namespace orbicount
