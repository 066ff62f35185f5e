#include "orbicount/singular_series.hpp"

#include <cmath>
#include <map>
#include <numbers>
#include <numeric>

#include "orbicount/arith.hpp"
#include "orbicount/errors.hpp"

namespace orbicount {

namespace {

struct KahanComplex {
  std::complex<double> sum{0.0, 0.0};
  std::complex<double> comp{0.0, 0.0};
  void add(std::complex<double> v) {
    const auto y = v - comp;
    const auto t = sum + y;
    comp = (t - sum) - y;
    sum = t;
  }
};

std::int64_t mod(std::int64_t a, std::int64_t q) {
  const std::int64_t r = a % q;
  return r < 0 ? r + q : r;
}

std::int64_t mulmod(std::int64_t a, std::int64_t b, std::int64_t q) {
  return static_cast<std::int64_t>(static_cast<__int128>(a) * b % q);
}

// e(r / q) for 0 <= r < q.
std::complex<double> unit(std::int64_t r, std::int64_t q) {
  const double th = 2.0 * std::numbers::pi * static_cast<double>(r) / static_cast<double>(q);
  return {std::cos(th), std::sin(th)};
}

std::uint64_t upow(std::uint64_t p, int k) {
  std::uint64_t r = 1;
  for (int i = 0; i < k; ++i) r *= p;
  return r;
}

// Orbit of r mod p^k under multiplication by unit squares.
std::int64_t square_class(std::int64_t r, std::uint64_t p, int k,
                          const std::vector<signed char>& chi) {
  if (r == 0) return 0;
  int j = 0;
  const auto P = static_cast<std::int64_t>(p);
  while (r % P == 0) {
    r /= P;
    ++j;
  }
  if (p == 2) {
    const int m = k - j;
    const std::int64_t w = m >= 3 ? 8 : (std::int64_t{1} << m);
    return 1 + 8 * j + (r % w);
  }
  return 1 + 2 * j + (chi[static_cast<std::size_t>(r % P)] < 0 ? 1 : 0);
}

std::vector<signed char> legendre_table(std::uint64_t p) {
  std::vector<signed char> chi(p, -1);
  if (p == 2) return chi;
  chi[0] = 0;
  for (std::uint64_t z = 1; z < p; ++z) chi[z * z % p] = 1;
  return chi;
}

void require_form(const DiagonalForm& form) {
  if (form.c.size() < 3) throw ValidationError("need at least 3 variables");
  for (auto c : form.c) {
    if (c == 0) throw ValidationError("coefficients must be nonzero");
  }
}

}  // namespace

void RationalAngle::validate() const {
  if (q < 1) throw ValidationError("q must be >= 1");
  if (std::gcd(a, q) != 1) throw ValidationError("gcd(a, q) must be 1");
}

DiagonalForm effective_form(std::span<const std::int64_t> y,
                            const DiagonalInstance& inst) {
  inst.validate();
  if (y.size() != inst.a.size()) throw ValidationError("y and a differ in length");
  DiagonalForm f;
  f.t = inst.t;
  for (std::size_t i = 0; i < y.size(); ++i) {
    if (y[i] == 0 || !is_squarefree(y[i])) throw ValidationError("y_i must be nonzero squarefree");
    f.c.push_back(inst.a[i] * y[i] * y[i] * y[i]);
  }
  return f;
}

std::complex<double> gauss_sum_1d(std::int64_t c, std::int64_t q) {
  if (q < 1) throw ValidationError("q must be >= 1");
  const std::int64_t cm = mod(c, q);
  KahanComplex s;
  for (std::int64_t z = 0; z < q; ++z) s.add(unit(mulmod(cm, mulmod(z, z, q), q), q));
  return s.sum;
}

std::complex<double> sigma_fraction(const DiagonalForm& form, RationalAngle angle) {
  angle.validate();
  const std::int64_t q = angle.q;
  std::complex<double> v = unit(mod(-mulmod(mod(angle.a, q), mod(form.t, q), q), q), q);
  for (auto c : form.c) {
    v *= gauss_sum_1d(mulmod(mod(angle.a, q), mod(c, q), q), q) / static_cast<double>(q);
  }
  return v;
}

std::complex<double> sigma_fraction(std::span<const std::int64_t> y,
                                    const DiagonalInstance& inst,
                                    RationalAngle angle) {
  return sigma_fraction(effective_form(y, inst), angle);
}

std::complex<double> sigma_fraction_direct(const DiagonalForm& form,
                                           RationalAngle angle) {
  angle.validate();
  const std::int64_t q = angle.q;
  const std::size_t m = form.c.size();
  if (std::pow(static_cast<double>(q), static_cast<double>(m)) > 1e8) {
    throw BudgetExceeded("sigma_fraction_direct", std::pow(q, m), 1e8);
  }
  std::vector<std::int64_t> x(m, 0);
  KahanComplex s;
  for (;;) {
    std::int64_t r = mod(-form.t, q);
    for (std::size_t i = 0; i < m; ++i) r = mod(r + mulmod(mod(form.c[i], q), mulmod(x[i], x[i], q), q), q);
    s.add(unit(mulmod(mod(angle.a, q), r, q), q));
    std::size_t i = 0;
    while (i < m && ++x[i] == q) x[i++] = 0;
    if (i == m) break;
  }
  return s.sum / std::pow(static_cast<double>(q), static_cast<double>(m));
}

double A_of_q(const DiagonalForm& form, std::int64_t q) {
  if (q < 1) throw ValidationError("q must be >= 1");
  KahanComplex s;
  for (std::int64_t a = 1; a <= q; ++a) {
    if (std::gcd(a, q) == 1) s.add(sigma_fraction(form, {a % q == 0 ? q : a, q}));
  }
  if (std::abs(s.sum.imag()) > 1e-9) {
    throw InconsistencyError("A(q) has imaginary residue " + std::to_string(s.sum.imag()));
  }
  return s.sum.real();
}

double A_of_q(std::span<const std::int64_t> y, const DiagonalInstance& inst,
              std::int64_t q) {
  return A_of_q(effective_form(y, inst), q);
}

double A_prime_power(const DiagonalForm& form, std::uint64_t p, int k) {
  if (k == 0) return 1.0;
  const auto q = static_cast<std::int64_t>(upow(p, k));
  const auto chi = legendre_table(p);
  std::map<std::int64_t, std::complex<double>> gauss;  // class of r -> G(r, q)
  auto G = [&](std::int64_t r) {
    const std::int64_t key = square_class(r, p, k, chi);
    auto it = gauss.find(key);
    if (it == gauss.end()) it = gauss.emplace(key, gauss_sum_1d(r, q)).first;
    return it->second;
  };
  // Class of the unit a: Legendre symbol (odd p) or a mod 8.
  struct Slot {
    std::int64_t rep = -1;
    KahanComplex e;
  };
  std::map<std::int64_t, Slot> by_class;
  const std::int64_t tq = mod(form.t, q);
  const auto P = static_cast<std::int64_t>(p);
  for (std::int64_t a = 1; a < q; ++a) {
    if (a % P == 0) continue;
    auto& slot = by_class[p == 2 ? a % 8 : chi[static_cast<std::size_t>(a % P)]];
    if (slot.rep < 0) slot.rep = a;
    slot.e.add(unit(mod(-mulmod(a, tq, q), q), q));
  }
  KahanComplex total;
  for (auto& [key, slot] : by_class) {
    std::complex<double> prod = slot.e.sum;
    for (auto c : form.c) prod *= G(mulmod(slot.rep, mod(c, q), q)) / static_cast<double>(q);
    total.add(prod);
  }
  if (std::abs(total.sum.imag()) > 1e-9) {
    throw InconsistencyError("A(p^k) has imaginary residue");
  }
  return total.sum.real();
}

double series_tail_bound(const DiagonalForm& form, std::int64_t q_max) {
  const int n = form.vars() - 1;
  double log_prod = 0.0;
  std::map<std::uint64_t, int> lcm;
  for (auto c : form.c) {
    const auto ac = static_cast<std::uint64_t>(c < 0 ? -c : c);
    log_prod += (0.5 + kTailEpsilon) * std::log(static_cast<double>(ac));
    for (const auto& f : factorize(ac).factors) {
      lcm[f.prime] = std::max(lcm[f.prime], f.exponent);
    }
  }
  double log_lcm = 0.0;
  for (const auto& [p, e] : lcm) log_lcm += e * std::log(static_cast<double>(p));
  const double K = std::pow(2.0, (n + 1) / 2.0);
  return K * std::exp(log_prod - 2.0 * log_lcm) *
         std::pow(static_cast<double>(q_max), (3.0 - n) / 2.0);
}

SeriesEstimate series_truncated(const DiagonalForm& form, std::int64_t q_max,
                                int workers) {
  require_form(form);
  if (form.vars() < 5) throw ValidationError("series_truncated needs n >= 4");
  if (q_max < 1) throw ValidationError("q_max must be >= 1");
  const auto Q = static_cast<std::size_t>(q_max);
  // Smallest prime factor sieve.
  std::vector<std::uint32_t> spf(Q + 1, 0);
  for (std::size_t i = 2; i <= Q; ++i) {
    if (spf[i] != 0) continue;
    for (std::size_t j = i; j <= Q; j += i) {
      if (spf[j] == 0) spf[j] = static_cast<std::uint32_t>(i);
    }
  }
  std::vector<std::size_t> powers;  // prime powers <= q_max
  for (std::size_t i = 2; i <= Q; ++i) {
    std::size_t r = i;
    while (r % spf[i] == 0) r /= spf[i];
    if (r == 1) powers.push_back(i);
  }
  std::vector<double> apk(Q + 1, 0.0);
#pragma omp parallel for schedule(dynamic, 1) num_threads(std::max(workers, 1))
  for (std::size_t idx = 0; idx < powers.size(); ++idx) {
    const std::size_t q = powers[idx];
    int k = 0;
    for (std::size_t r = q; r > 1; r /= spf[q]) ++k;
    apk[q] = A_prime_power(form, spf[q], k);
  }
  std::vector<double> A(Q + 1, 0.0);
  A[1] = 1.0;
  double sum = 1.0, comp = 0.0;
  for (std::size_t q = 2; q <= Q; ++q) {
    std::size_t pk = 1, r = q;
    while (r % spf[q] == 0) {
      r /= spf[q];
      pk *= spf[q];
    }
    A[q] = A[r] * apk[pk];
    const double y = A[q] - comp;
    const double t = sum + y;
    comp = (t - sum) - y;
    sum = t;
  }
  SeriesEstimate est;
  est.value = sum;
  est.q_max = q_max;
  est.tail_bound = series_tail_bound(form, q_max);
  return est;
}

SeriesEstimate series_truncated(std::span<const std::int64_t> y,
                                const DiagonalInstance& inst,
                                std::int64_t q_max, int workers) {
  return series_truncated(effective_form(y, inst), q_max, workers);
}

}  // namespace orbicount
