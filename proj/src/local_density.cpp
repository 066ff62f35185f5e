#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "orbicount/arith.hpp"
#include "orbicount/errors.hpp"
#include "orbicount/singular_series.hpp"

namespace orbicount {

namespace {

using boost::multiprecision::cpp_int;

std::int64_t mod(std::int64_t a, std::int64_t q) {
  const std::int64_t r = a % q;
  return r < 0 ? r + q : r;
}

cpp_int ipow(std::uint64_t p, int k) {
  return boost::multiprecision::pow(cpp_int(p), static_cast<unsigned>(k));
}

Rational rpow(std::uint64_t p, int k) {
  return k >= 0 ? Rational(ipow(p, k)) : Rational(cpp_int(1), ipow(p, -k));
}

cpp_int from_count(Count c) {
  const bool neg = c < 0;
  unsigned __int128 u = neg ? static_cast<unsigned __int128>(-c) : static_cast<unsigned __int128>(c);
  cpp_int r = static_cast<std::uint64_t>(u >> 64);
  r <<= 64;
  r += static_cast<std::uint64_t>(u);
  return neg ? cpp_int(-r) : r;
}

int vp(std::int64_t v, std::uint64_t p) {
  return valuation(v, p);
}

// Exact counts mod q = p^l by convolving class functions.  The distribution
// of c x^2 (and of any sum of such) is constant on orbits of multiplication
// by unit squares, so a convolution only needs the structure constants
// N[C][A][B] = #{a in A : r_C - a in B}.
class ClassAlgebra {
 public:
  ClassAlgebra(std::uint64_t p, int l) : p_(p), l_(l) {
    q_ = 1;
    for (int i = 0; i < l; ++i) q_ *= static_cast<std::int64_t>(p);
    std::vector<signed char> chi(p, -1);
    if (p != 2) {
      chi[0] = 0;
      for (std::uint64_t z = 1; z < p; ++z) chi[z * z % p] = 1;
    }
    cls_.resize(static_cast<std::size_t>(q_));
    std::map<int, int> index;
    for (std::int64_t r = 0; r < q_; ++r) {
      const int key = raw_class(r, chi);
      auto it = index.find(key);
      if (it == index.end()) {
        it = index.emplace(key, static_cast<int>(reps_.size())).first;
        reps_.push_back(r);
        size_.push_back(0);
      }
      cls_[static_cast<std::size_t>(r)] = it->second;
      ++size_[static_cast<std::size_t>(it->second)];
    }
    const std::size_t K = reps_.size();
    N_.assign(K * K * K, 0);
    for (std::size_t C = 0; C < K; ++C) {
      const std::int64_t rc = reps_[C];
      for (std::int64_t a = 0; a < q_; ++a) {
        const auto A = static_cast<std::size_t>(cls_[static_cast<std::size_t>(a)]);
        const auto B = static_cast<std::size_t>(cls_[static_cast<std::size_t>(mod(rc - a, q_))]);
        ++N_[(C * K + A) * K + B];
      }
    }
  }

  std::size_t classes() const { return reps_.size(); }

  // Per-element value of r -> #{x mod q : c x^2 = r}.
  std::vector<Count> square_distribution(std::int64_t c) const {
    std::vector<Count> total(classes(), 0);
    const std::int64_t cm = mod(c, q_);
    for (std::int64_t x = 0; x < q_; ++x) {
      const auto r = static_cast<std::int64_t>(static_cast<__int128>(cm) * (static_cast<__int128>(x) * x % q_) % q_);
      ++total[static_cast<std::size_t>(cls_[static_cast<std::size_t>(r)])];
    }
    for (std::size_t k = 0; k < classes(); ++k) total[k] /= size_[k];
    return total;
  }

  std::vector<Count> convolve(const std::vector<Count>& f, const std::vector<Count>& g) const {
    const std::size_t K = classes();
    std::vector<Count> h(K, 0);
    for (std::size_t C = 0; C < K; ++C) {
      Count s = 0;
      for (std::size_t A = 0; A < K; ++A) {
        if (f[A] == 0) continue;
        for (std::size_t B = 0; B < K; ++B) {
          const auto n = N_[(C * K + A) * K + B];
          if (n != 0 && g[B] != 0) s += f[A] * g[B] * n;
        }
      }
      h[C] = s;
    }
    return h;
  }

  Count at(const std::vector<Count>& f, std::int64_t t) const {
    return f[static_cast<std::size_t>(cls_[static_cast<std::size_t>(mod(t, q_))])];
  }

 private:
  int raw_class(std::int64_t r, const std::vector<signed char>& chi) const {
    if (r == 0) return 0;
    int j = 0;
    const auto P = static_cast<std::int64_t>(p_);
    while (r % P == 0) {
      r /= P;
      ++j;
    }
    if (p_ == 2) {
      const int m = l_ - j;
      const std::int64_t w = m >= 3 ? 8 : (std::int64_t{1} << m);
      return 1 + 8 * j + static_cast<int>(r % w);
    }
    return 1 + 2 * j + (chi[static_cast<std::size_t>(r % P)] < 0 ? 1 : 0);
  }

  std::uint64_t p_;
  int l_;
  std::int64_t q_;
  std::vector<int> cls_;
  std::vector<std::int64_t> reps_;
  std::vector<std::int64_t> size_;
  std::vector<std::int64_t> N_;
};

void check_local_args(std::uint64_t p, int l, const DiagonalForm& form,
                      double budget) {
  if (!is_prime(p)) throw ValidationError("p must be prime");
  if (l < 1) throw ValidationError("l must be >= 1");
  if (form.c.empty()) throw ValidationError("empty form");
  for (auto c : form.c) {
    if (c == 0) throw ValidationError("coefficients must be nonzero");
  }
  const double q = std::pow(static_cast<double>(p), l);
  if (q > budget) throw BudgetExceeded("local density modulus", q, budget);
  // Counts reach q^{n+1}.
  if (static_cast<double>(form.c.size()) * std::log2(q) >= 126.0) {
    throw BudgetExceeded("local density count width (bits)",
                         static_cast<double>(form.c.size()) * std::log2(q), 126.0);
  }
}

}  // namespace

Count local_count(std::uint64_t p, int l, const DiagonalForm& form,
                  double modulus_budget) {
  check_local_args(p, l, form, modulus_budget);
  const ClassAlgebra alg(p, l);
  std::vector<Count> f(alg.classes(), 0);
  f[0] = 1;  // class 0 is {0}
  for (auto c : form.c) f = alg.convolve(f, alg.square_distribution(c));
  return alg.at(f, form.t);
}

Count local_count_direct(std::uint64_t p, int l, const DiagonalForm& form) {
  std::int64_t q = 1;
  for (int i = 0; i < l; ++i) q *= static_cast<std::int64_t>(p);
  const std::size_t m = form.c.size();
  if (std::pow(static_cast<double>(q), static_cast<double>(m)) > 1e8) {
    throw BudgetExceeded("local_count_direct", std::pow(q, m), 1e8);
  }
  std::vector<std::int64_t> x(m, 0);
  Count n = 0;
  for (;;) {
    std::int64_t r = 0;
    for (std::size_t i = 0; i < m; ++i) r = mod(r + mod(form.c[i], q) * (x[i] * x[i] % q), q);
    if (r == mod(form.t, q)) ++n;
    std::size_t i = 0;
    while (i < m && ++x[i] == q) x[i++] = 0;
    if (i == m) break;
  }
  return n;
}

Rational local_density(std::uint64_t p, int l, const DiagonalForm& form,
                       double modulus_budget) {
  const Count c = local_count(p, l, form, modulus_budget);
  const int n = form.vars() - 1;
  return Rational(from_count(c), ipow(p, l * n));
}

Rational local_density(std::uint64_t p, int l, std::span<const std::int64_t> y,
                       const DiagonalInstance& inst) {
  return local_density(p, l, effective_form(y, inst));
}

namespace {

// #{x in F_p^k : sum u_i x_i^2 = tau} for units u_i, odd p, D = prod u_i.
cpp_int quadric_count_fp(std::uint64_t p, int k, std::int64_t D, std::int64_t tau) {
  auto chi = [&](std::int64_t v) -> int {
    v = mod(v, static_cast<std::int64_t>(p));
    if (v == 0) return 0;
    return powmod(static_cast<std::uint64_t>(v), (p - 1) / 2, p) == 1 ? 1 : -1;
  };
  const std::int64_t sgn = ((k / 2) % 2 == 0) ? 1 : -1;  // (-1)^{floor(k/2)}
  if (k % 2 == 1) {
    const int s = chi(mod(sgn * mod(tau, static_cast<std::int64_t>(p)), static_cast<std::int64_t>(p)) *
                      mod(D, static_cast<std::int64_t>(p)) % static_cast<std::int64_t>(p));
    return ipow(p, k - 1) + s * ipow(p, (k - 1) / 2);
  }
  const int s = chi(sgn * mod(D, static_cast<std::int64_t>(p)));
  const bool zero = mod(tau, static_cast<std::int64_t>(p)) == 0;
  const cpp_int nu = zero ? cpp_int(p - 1) : cpp_int(-1);
  return ipow(p, k - 1) + s * nu * ipow(p, (k - 2) / 2);
}

// Stable density of the solutions with a unit coordinate among the
// valuation-0 coordinates.
Rational primitive_density(std::uint64_t p, const std::vector<int>& v,
                           const std::vector<std::int64_t>& u, std::int64_t t) {
  const int m = static_cast<int>(v.size());
  const int n = m - 1;
  if (p != 2) {
    int k = 0;
    std::int64_t D = 1;
    const auto P = static_cast<std::int64_t>(p);
    for (int i = 0; i < m; ++i) {
      if (v[static_cast<std::size_t>(i)] == 0) {
        ++k;
        D = D * mod(u[static_cast<std::size_t>(i)], P) % P;
      }
    }
    cpp_int cnt = quadric_count_fp(p, k, D, t);
    if (mod(t, P) == 0) cnt -= 1;
    return Rational(cnt) * rpow(p, 1 - k);
  }
  // p = 2: count x mod 8 directly, all coordinates minus the ones with
  // every valuation-0 coordinate even.
  std::vector<Count> all(8, 0), even(8, 0);
  all[0] = even[0] = 1;
  for (int i = 0; i < m; ++i) {
    const int vi = v[static_cast<std::size_t>(i)];
    const std::int64_t c = vi >= 3 ? 0 : mod(u[static_cast<std::size_t>(i)] << vi, 8);
    std::vector<Count> na(8, 0), ne(8, 0);
    for (int r = 0; r < 8; ++r) {
      for (std::int64_t x = 0; x < 8; ++x) {
        const auto s = static_cast<std::size_t>((r + c * x * x) % 8);
        na[s] += all[static_cast<std::size_t>(r)];
        if (vi != 0 || x % 2 == 0) ne[s] += even[static_cast<std::size_t>(r)];
      }
    }
    all.swap(na);
    even.swap(ne);
  }
  const auto tt = static_cast<std::size_t>(mod(t, 8));
  return Rational(from_count(all[tt] - even[tt]), ipow(2, 3 * n));
}

}  // namespace

Rational local_density_limit(std::uint64_t p, const DiagonalForm& form) {
  if (!is_prime(p)) throw ValidationError("p must be prime");
  const std::size_t m = form.c.size();
  if (m < 2) throw ValidationError("need at least 2 variables");
  std::vector<int> v(m);
  std::vector<std::int64_t> u(m);
  for (std::size_t i = 0; i < m; ++i) {
    if (form.c[i] == 0) throw ValidationError("coefficients must be nonzero");
    v[i] = vp(form.c[i], p);
    std::int64_t r = form.c[i];
    for (int j = 0; j < v[i]; ++j) r /= static_cast<std::int64_t>(p);
    u[i] = r;
  }
  std::int64_t t = form.t;
  Rational W = 1, S = 0;
  std::map<std::vector<int>, std::pair<Rational, Rational>> seen;  // t = 0 only
  for (int guard = 0; guard < 100000; ++guard) {
    const int k = *std::min_element(v.begin(), v.end());
    if (k > 0) {
      if (t != 0) {
        if (vp(t, p) < k) return S;
        for (int j = 0; j < k; ++j) t /= static_cast<std::int64_t>(p);
      }
      for (auto& vi : v) vi -= k;
      W *= rpow(p, k);
    }
    if (t == 0) {
      auto it = seen.find(v);
      if (it != seen.end()) {
        const auto& [W0, S0] = it->second;
        // S0 + W0 d = S + W d.
        const Rational d = (S - S0) / (W0 - W);
        return S0 + W0 * d;
      }
      seen.emplace(v, std::make_pair(W, S));
    }
    S += W * primitive_density(p, v, u, t);
    int k0 = 0;
    for (auto& vi : v) {
      if (vi == 0) {
        vi += 2;
        ++k0;
      }
    }
    W *= rpow(p, -k0);
  }
  throw InconsistencyError("local density chain did not terminate");
}

SeriesEstimate series_euler(const DiagonalForm& form, std::int64_t p_max,
                            const LevelPolicy& policy) {
  if (form.vars() < 5) throw ValidationError("series_euler needs n >= 4");
  for (auto c : form.c) {
    if (c == 0) throw ValidationError("coefficients must be nonzero");
  }
  std::vector<std::uint64_t> primes =
      p_max >= 2 ? primes_up_to(static_cast<std::uint64_t>(p_max)) : std::vector<std::uint64_t>{};
  std::vector<std::uint64_t> bad{2};
  for (auto c : form.c) {
    for (const auto& f : factorize(static_cast<std::uint64_t>(c < 0 ? -c : c)).factors) bad.push_back(f.prime);
  }
  bool missing_bad = false;
  for (auto p : bad) {
    if (static_cast<std::int64_t>(p) <= p_max) continue;
    if (policy.include_bad_primes) {
      primes.push_back(p);
    } else {
      missing_bad = true;
    }
  }
  std::sort(primes.begin(), primes.end());
  primes.erase(std::unique(primes.begin(), primes.end()), primes.end());

  SeriesEstimate est;
  est.p_max = p_max;
  double value = 1.0;
  for (auto p : primes) {
    if (policy.exact_limit) {
      value *= local_density_limit(p, form).convert_to<double>();
      continue;
    }
    int vsum = valuation(2, p);
    for (auto c : form.c) vsum += vp(c, p);
    const int cap = 2 * vsum + 3;
    // Three equal levels in a row: when t = 0 and n + 1 is odd, levels 2k
    // and 2k + 1 always coincide without the sequence having settled.
    Rational prev2 = -1, prev = -1, cur = -1;
    bool stable = false;
    int l = 1;
    for (; l <= cap; ++l) {
      try {
        cur = local_density(p, l, form, policy.modulus_budget);
      } catch (const BudgetExceeded&) {
        --l;
        cur = prev;
        break;
      }
      if (cur == prev && prev == prev2) {
        stable = true;
        break;
      }
      prev2 = prev;
      prev = cur;
    }
    if (!stable) est.unstable_primes.push_back(p);
    if (cur < 0) throw BudgetExceeded("local density at level 1", std::pow(static_cast<double>(p), 1), policy.modulus_budget);
    est.l_max = std::max(est.l_max, std::min(l, cap));
    value *= cur.convert_to<double>();
  }
  est.value = value;
  // Primes beyond p_max are good: |A(p^k)| <= p^{-k s} with s = (n-1)/2.
  const int n = form.vars() - 1;
  const double s = (n - 1) / 2.0;
  const double P = static_cast<double>(std::max<std::int64_t>(p_max, 1));
  const double xP = std::pow(P, -s) / (1.0 - std::pow(P, -s));
  const double T = std::pow(P, 1.0 - s) / (s - 1.0) / ((1.0 - std::pow(P, -s)) * (1.0 - xP));
  est.tail_bound = missing_bad ? std::numeric_limits<double>::infinity()
                               : std::abs(value) * std::expm1(T);
  return est;
}

SeriesEstimate series_euler(std::span<const std::int64_t> y,
                            const DiagonalInstance& inst, std::int64_t p_max,
                            const LevelPolicy& policy) {
  return series_euler(effective_form(y, inst), p_max, policy);
}

}  // namespace orbicount
