#include "orbicount/constants.hpp"

#include <omp.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>
#include <mutex>
#include <numeric>
#include <set>
#include <unordered_map>

#include "orbicount/arith.hpp"
#include "orbicount/errors.hpp"
#include "orbicount/gcd_sieve.hpp"
#include "orbicount/singular_integral.hpp"
#include "orbicount/singular_series.hpp"

namespace orbicount {

namespace {

struct Kahan {
  double s = 0.0, c = 0.0;
  void add(double x) {
    const double y = x - c;
    const double t = s + y;
    c = (t - s) - y;
    s = t;
  }
};

int legendre(std::int64_t v, std::uint64_t p) {
  const auto P = static_cast<std::int64_t>(p);
  v %= P;
  if (v < 0) v += P;
  if (v == 0) return 0;
  return powmod(static_cast<std::uint64_t>(v), (p - 1) / 2, p) == 1 ? 1 : -1;
}

// Local state of a coefficient at p: valuation and square class of the unit
// part, packed as v * 4 + cls.
std::uint8_t local_state(std::int64_t c, std::uint64_t p) {
  int v = 0;
  const auto P = static_cast<std::int64_t>(p);
  while (c % P == 0) {
    c /= P;
    ++v;
  }
  int cls;
  if (p == 2) {
    cls = static_cast<int>(((c % 8) + 8) % 8 - 1) / 2;
  } else {
    cls = legendre(c, p) == 1 ? 0 : 1;
  }
  return static_cast<std::uint8_t>(v * 4 + cls);
}

std::int64_t unit_rep(int cls, std::uint64_t p) {
  if (p == 2) return 2 * cls + 1;
  if (cls == 0) return 1;
  for (std::int64_t r = 2;; ++r) {
    if (legendre(r, p) == -1) return r;
  }
}

std::uint64_t pack(std::vector<std::uint8_t> s) {
  std::sort(s.begin(), s.end());
  std::uint64_t k = 0;
  for (auto x : s) k = k << 8 | x;
  return k;
}

// Archimedean factor by number of negative signs, shared across calls.
double cached_J(int m, int negatives, int workers) {
  static std::mutex mu;
  static std::map<std::pair<int, int>, double> cache;
  if (negatives == 0 || negatives == m) return 0.0;
  const auto key = std::make_pair(m, std::min(negatives, m - negatives));
  {
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
  }
  std::vector<int> eps(static_cast<std::size_t>(m), 1);
  for (int i = 0; i < key.second; ++i) eps[static_cast<std::size_t>(i)] = -1;
  QuadratureOptions opt;
  opt.workers = workers;
  const double v = singular_integral(eps, opt).value;
  std::lock_guard<std::mutex> lock(mu);
  cache.emplace(key, v);
  return v;
}

// Per-thread memo of local factors.
struct LocalCache {
  std::vector<std::unordered_map<std::uint64_t, double>> density;
  std::vector<std::unordered_map<std::uint64_t, std::array<double, 3>>> split;
};

struct Engine {
  int m = 0, n = 0;
  bool folded = false;  // D: couple patterns folded into Y
  DFlavour flavour = DFlavour::Coprime;
  std::int64_t e_bound = 1;
  std::int64_t t = 0;
  std::vector<std::int64_t> a;       // sorted, all ones when folded
  std::vector<std::int64_t> ylist;   // candidate values for every coordinate
  std::vector<std::uint64_t> primes; // explicit local factors
  std::vector<char> is_eprime;
  std::vector<std::uint64_t> chi_primes;
  std::vector<std::array<double, 2>> chi_factor;
  std::int64_t chi_pmax = 0;
  double closed = 1.0;  // good primes outside both lists
  std::vector<double> J;
  // state[i][y][k]: coordinate i, ylist index y, explicit prime k.
  std::vector<std::vector<std::vector<std::uint8_t>>> state;
  std::vector<std::vector<std::vector<std::uint64_t>>> chi_bits;
  std::vector<double> weight1;  // |c|^{-1/2} per (coordinate, y), flattened
  std::size_t words = 0;

  double density(std::size_t k, const std::vector<std::uint8_t>& st, LocalCache& lc) const {
    const auto key = pack(st);
    auto& map = lc.density[k];
    auto it = map.find(key);
    if (it != map.end()) return it->second;
    const std::uint64_t p = primes[k];
    DiagonalForm f;
    f.t = t;
    for (auto s : st) {
      std::int64_t c = unit_rep(s & 3, p);
      for (int j = 0; j < (s >> 2); ++j) c *= static_cast<std::int64_t>(p);
      f.c.push_back(c);
    }
    const double d = local_density_limit(p, f).convert_to<double>();
    map.emplace(key, d);
    return d;
  }

  // Folded couple factor at p, split by the exponent of p in gcd(e_i f_i).
  std::array<double, 3> split(std::size_t k, const std::vector<std::uint8_t>& st, LocalCache& lc) const {
    const auto key = pack(st);
    auto& map = lc.split[k];
    auto it = map.find(key);
    if (it != map.end()) return it->second;
    std::vector<std::uint8_t> s = st;
    std::sort(s.begin(), s.end());
    const auto p = static_cast<double>(primes[k]);
    const IndexSet full = (IndexSet{1} << m) - 1;
    IndexSet S = 0, T = 0;
    for (int i = 0; i < m; ++i) {
      const int v = s[static_cast<std::size_t>(i)] >> 2;
      if (v >= 3) S |= IndexSet{1} << i;
      if (v >= 6) T |= IndexSet{1} << i;
    }
    std::array<double, 3> out{0.0, 0.0, 0.0};
    std::vector<std::uint8_t> shifted(s.size());
    for (IndexSet I = 0; I <= full; ++I) {
      for (IndexSet Jm = S;; Jm = (Jm - 1) & S) {
        const bool ok = flavour == DFlavour::Literal ? (Jm & T) == T : T == 0;
        const int mu = ok ? mu_tilde(I, Jm, n) : 0;
        if (mu != 0) {
          for (int i = 0; i < m; ++i) {
            shifted[static_cast<std::size_t>(i)] = static_cast<std::uint8_t>(
                s[static_cast<std::size_t>(i)] + ((I >> i & 1) ? 8 : 0));
          }
          const int e = (I == 0 && Jm == 0) ? 0 : ((I & Jm) == full ? 2 : 1);
          const int pop = std::popcount(I);
          out[static_cast<std::size_t>(e)] += mu * std::pow(p, -pop) * density(k, shifted, lc);
        }
        if (Jm == 0) break;
      }
    }
    map.emplace(key, out);
    return out;
  }

  double e_sum(const std::vector<std::array<double, 3>>& sp, std::size_t j, std::int64_t g,
               const std::vector<std::uint64_t>& ep) const {
    if (j == sp.size()) return 1.0;
    const auto p = static_cast<std::int64_t>(ep[j]);
    double r = sp[j][0] * e_sum(sp, j + 1, g, ep);
    if (g * p <= e_bound) r += sp[j][1] * e_sum(sp, j + 1, g * p, ep);
    if (g * p * p <= e_bound) r += sp[j][2] * e_sum(sp, j + 1, g * p * p, ep);
    return r;
  }
};


struct RunResult {
  double value = 0.0, small = 0.0, abs_sum = 0.0, series_tail = 0.0;
  std::size_t terms = 0;
};

struct LeafContext {
  LocalCache cache;
  std::vector<std::uint16_t> idx;
  std::vector<std::vector<std::uint64_t>> bits;  // per depth
  std::vector<std::uint8_t> st;
  std::vector<std::array<double, 3>> sp;
  std::vector<std::uint64_t> ep;
};

class Runner {
 public:
  Runner(Engine& e, const ConstantParams& par) : E(e), P(par) {}

  void prepare() {
    const std::size_t m = static_cast<std::size_t>(E.m);
    E.J.assign(m + 1, 0.0);
    for (int k = 1; k < E.m; ++k) E.J[static_cast<std::size_t>(k)] = cached_J(E.m, k, P.workers);
    E.state.assign(m, {});
    E.weight1.assign(m * E.ylist.size(), 0.0);
    for (std::size_t i = 0; i < m; ++i) {
      E.state[i].resize(E.ylist.size());
      for (std::size_t y = 0; y < E.ylist.size(); ++y) {
        const std::int64_t Y = E.ylist[y];
        const std::int64_t c = E.a[i] * Y * Y * Y;
        E.weight1[i * E.ylist.size() + y] = 1.0 / std::sqrt(std::abs(static_cast<double>(c)));
        for (auto p : E.primes) E.state[i][y].push_back(local_state(c, p));
      }
    }
    const bool character = E.m % 2 == 0 || E.t != 0;
    if (character) {
      for (auto p : primes_up_to(static_cast<std::uint64_t>(std::max<std::int64_t>(P.p_max, 2)))) {
        if (!std::binary_search(E.primes.begin(), E.primes.end(), p)) E.chi_primes.push_back(p);
      }
      E.chi_pmax = P.p_max;
      E.words = (E.chi_primes.size() + 63) / 64;
      for (auto p : E.chi_primes) {
        std::array<double, 2> f{};
        for (int b = 0; b < 2; ++b) {
          DiagonalForm rep;
          rep.c.assign(m, 1);
          rep.c.back() = unit_rep(b, p);
          rep.t = E.t == 0 ? 0 : 1;
          f[static_cast<std::size_t>(b)] = local_density_limit(p, rep).convert_to<double>();
        }
        E.chi_factor.push_back(f);
      }
      E.chi_bits.assign(m, std::vector<std::vector<std::uint64_t>>(E.ylist.size(), std::vector<std::uint64_t>(E.words, 0)));
      for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t y = 0; y < E.ylist.size(); ++y) {
          for (std::size_t k = 0; k < E.chi_primes.size(); ++k) {
            if (legendre(E.a[i] * E.ylist[y], E.chi_primes[k]) == -1) E.chi_bits[i][y][k / 64] |= std::uint64_t{1} << (k % 64);
          }
        }
      }
      // Good primes beyond p_max: |A(p)| = p^{-n/2} when n + 1 is odd and
      // t != 0 (higher powers vanish); otherwise |A(p^k)| <= p^{-k(n-1)/2}.
      const double s = E.m % 2 == 1 ? E.n / 2.0 : (E.n - 1) / 2.0;
      const double Pm = static_cast<double>(std::max<std::int64_t>(P.p_max, 2));
      tail_T = std::pow(Pm, 1.0 - s) / (s - 1.0) / (1.0 - std::pow(Pm, -s));
    } else {
      const double n = E.n;
      E.closed = std::riemann_zeta(n - 1) / std::riemann_zeta(n);
      for (auto p : E.primes) {
        const double q = static_cast<double>(p);
        E.closed *= (1.0 - std::pow(q, 1 - n)) / (1.0 - std::pow(q, -n));
      }
    }
    if (E.t != 0 && character && E.m % 2 == 1) {
      t_bits.assign(E.words, 0);
      for (std::size_t k = 0; k < E.chi_primes.size(); ++k) {
        if (legendre(E.t, E.chi_primes[k]) == -1) t_bits[k / 64] |= std::uint64_t{1} << (k % 64);
      }
    } else {
      t_bits.assign(E.words, 0);
    }
  }

  // Singular series (or its folded couple sum) for the vector in ctx.idx.
  double series(LeafContext& ctx, const std::vector<std::uint64_t>& bits) const {
    const std::size_t m = static_cast<std::size_t>(E.m);
    if (P.method == SeriesMethod::Truncated) {
      DiagonalForm f;
      f.t = E.t;
      for (std::size_t i = 0; i < m; ++i) {
        const std::int64_t Y = E.ylist[ctx.idx[i]];
        f.c.push_back(E.a[i] * Y * Y * Y);
      }
      return series_truncated(f, P.q_max).value;
    }
    double S = E.closed;
    ctx.sp.clear();
    ctx.ep.clear();
    ctx.st.resize(m);
    for (std::size_t k = 0; k < E.primes.size(); ++k) {
      for (std::size_t i = 0; i < m; ++i) ctx.st[i] = E.state[i][ctx.idx[i]][k];
      if (!E.folded) {
        S *= E.density(k, ctx.st, ctx.cache);
        continue;
      }
      const auto sp = E.split(k, ctx.st, ctx.cache);
      if (E.is_eprime[k]) {
        ctx.sp.push_back(sp);
        ctx.ep.push_back(E.primes[k]);
      } else {
        S *= sp[0];
      }
      if (S == 0.0) return 0.0;
    }
    if (E.folded) S *= E.e_sum(ctx.sp, 0, 1, ctx.ep);
    for (std::size_t k = 0; k < E.chi_primes.size(); ++k) {
      S *= E.chi_factor[k][(bits[k / 64] >> (k % 64)) & 1];
    }
    return S;
  }

  // 2^{n+1} J S w for the vector in ctx.idx (no multiplicity).
  double term(LeafContext& ctx, const std::vector<std::uint64_t>& bits) const {
    const std::size_t m = static_cast<std::size_t>(E.m);
    int neg = 0;
    double w = std::ldexp(1.0, E.n + 1);
    for (std::size_t i = 0; i < m; ++i) {
      const std::int64_t Y = E.ylist[ctx.idx[i]];
      if ((E.a[i] < 0) != (Y < 0)) ++neg;
      w *= E.weight1[i * E.ylist.size() + ctx.idx[i]];
    }
    const double J = E.J[static_cast<std::size_t>(neg)];
    if (J == 0.0) return 0.0;
    return w * J * series(ctx, bits);
  }

  double single(std::span<const std::uint16_t> idx) {
    LeafContext ctx = make_ctx();
    ctx.idx.assign(idx.begin(), idx.end());
    std::vector<std::uint64_t> bits = t_bits;
    for (std::size_t i = 0; i < idx.size(); ++i) xor_into(bits, i, idx[i]);
    last_abs = 0.0;
    const double v = term(ctx, bits);
    last_abs = std::abs(v);
    return v;
  }

  RunResult run(int small_bound) {
    const std::size_t L = E.ylist.size();
    const std::size_t m = static_cast<std::size_t>(E.m);
    small = small_bound;
    // vectors after symmetry: prod over groups of C(L + g - 1, g)
    double total = 1.0;
    for (std::size_t i = 0, j; i < m; i = j) {
      j = i;
      while (j < m && E.a[j] == E.a[i]) ++j;
      for (std::size_t r = 0; r < j - i; ++r) total *= static_cast<double>(L + r) / static_cast<double>(r + 1);
    }
    if (total > P.budget) throw BudgetExceeded("constant summation vectors", total, P.budget);
    std::vector<Kahan> part(L), part_small(L);
    std::vector<double> part_abs(L, 0.0);
    std::vector<std::size_t> count(L, 0);
#pragma omp parallel num_threads(std::max(P.workers, 1))
    {
      LeafContext ctx = make_ctx();
      ctx.idx.assign(m, 0);
      ctx.bits.assign(m + 1, t_bits);
#pragma omp for schedule(dynamic, 1)
      for (std::size_t y0 = 0; y0 < L; ++y0) {
        ctx.idx[0] = static_cast<std::uint16_t>(y0);
        ctx.bits[1] = ctx.bits[0];
        xor_into(ctx.bits[1], 0, y0);
        Acc acc;
        dfs(ctx, 1, std::abs(E.ylist[y0]), acc);
        part[y0] = acc.main;
        part_small[y0] = acc.small;
        part_abs[y0] = acc.abs;
        count[y0] = acc.count;
      }
    }
    RunResult r;
    for (std::size_t y0 = 0; y0 < L; ++y0) {
      r.value += part[y0].s;
      r.small += part_small[y0].s;
      r.abs_sum += part_abs[y0];
      r.terms += count[y0];
    }
    r.series_tail = tail_T > 0 ? r.abs_sum * std::expm1(tail_T) : 0.0;
    return r;
  }

  double tail_T = 0.0;
  double last_abs = 0.0;

 private:
  struct Acc {
    Kahan main, small;
    double abs = 0.0;
    std::size_t count = 0;
  };

  LeafContext make_ctx() const {
    LeafContext ctx;
    ctx.cache.density.resize(E.primes.size());
    ctx.cache.split.resize(E.primes.size());
    return ctx;
  }

  void xor_into(std::vector<std::uint64_t>& bits, std::size_t i, std::size_t y) const {
    if (E.words == 0) return;
    for (std::size_t w = 0; w < E.words; ++w) bits[w] ^= E.chi_bits[i][y][w];
  }

  double multiplicity(const LeafContext& ctx) const {
    const std::size_t m = static_cast<std::size_t>(E.m);
    double mult = 1.0;
    for (std::size_t i = 0, j; i < m; i = j) {
      j = i;
      while (j < m && E.a[j] == E.a[i]) ++j;
      double f = 1.0;
      for (std::size_t r = 2; r <= j - i; ++r) f *= static_cast<double>(r);
      for (std::size_t u = i, v; u < j; u = v) {
        v = u;
        while (v < j && ctx.idx[v] == ctx.idx[u]) ++v;
        for (std::size_t r = 2; r <= v - u; ++r) f /= static_cast<double>(r);
      }
      mult *= f;
    }
    return mult;
  }

  void dfs(LeafContext& ctx, std::size_t i, std::int64_t ymax, Acc& acc) const {
    const std::size_t m = static_cast<std::size_t>(E.m);
    if (i == m) {
      const double v = term(ctx, ctx.bits[m]) * multiplicity(ctx);
      acc.main.add(v);
      if (ymax <= small) acc.small.add(v);
      acc.abs += std::abs(v);
      ++acc.count;
      return;
    }
    const std::size_t start = E.a[i] == E.a[i - 1] ? ctx.idx[i - 1] : 0;
    for (std::size_t y = start; y < E.ylist.size(); ++y) {
      ctx.idx[i] = static_cast<std::uint16_t>(y);
      ctx.bits[i + 1] = ctx.bits[i];
      xor_into(ctx.bits[i + 1], i, y);
      dfs(ctx, i + 1, std::max(ymax, std::abs(E.ylist[y])), acc);
    }
  }

  Engine& E;
  const ConstantParams& P;
  std::vector<std::uint64_t> t_bits;
  std::int64_t small = 0;
};

void check_params(int n, const ConstantParams& p) {
  if (n < 4) throw ValidationError("constants need n >= 4");
  if (n > 7) throw ValidationError("constants support n <= 7");
  if (p.y_max < 1 || p.y_max > 1000) throw ValidationError("y_max must be in [1, 1000]");
  if (p.e_bound < 1 || p.e_bound > 100000) throw ValidationError("e_bound must be in [1, 1e5]");
  if (p.q_max < 1) throw ValidationError("q_max must be >= 1");
  if (p.p_max < 2) throw ValidationError("p_max must be >= 2");
}

std::set<std::uint64_t> prime_factors(std::int64_t v) {
  std::set<std::uint64_t> out;
  if (v == 0) return out;
  for (const auto& f : factorize(static_cast<std::uint64_t>(v < 0 ? -v : v)).factors) out.insert(f.prime);
  return out;
}

std::vector<std::int64_t> signed_list(const std::vector<std::uint64_t>& pos) {
  std::vector<std::int64_t> out;
  for (auto v : pos) {
    out.push_back(-static_cast<std::int64_t>(v));
    out.push_back(static_cast<std::int64_t>(v));
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<std::uint64_t> cubefree_up_to(std::uint64_t bound) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t v = 1; v <= bound; ++v) {
    bool ok = true;
    for (std::uint64_t p = 2; p * p * p <= v && ok; ++p) ok = v % (p * p * p) != 0;
    if (ok) out.push_back(v);
  }
  return out;
}

// Set up a folded couple engine (t = 0, a = 1).
Engine folded_engine(int n, const ConstantParams& params, std::vector<std::int64_t> ylist) {
  Engine E;
  E.m = n + 1;
  E.n = n;
  E.folded = true;
  E.flavour = params.flavour;
  E.e_bound = params.e_bound;
  E.a.assign(static_cast<std::size_t>(n + 1), 1);
  E.ylist = std::move(ylist);
  std::set<std::uint64_t> ps{2};
  for (auto p : primes_up_to(static_cast<std::uint64_t>(std::max<std::int64_t>(params.e_bound, 2)))) ps.insert(p);
  for (auto y : E.ylist) {
    for (auto p : prime_factors(y)) ps.insert(p);
  }
  E.primes.assign(ps.begin(), ps.end());
  for (auto p : E.primes) E.is_eprime.push_back(static_cast<std::int64_t>(p) <= params.e_bound ? 1 : 0);
  return E;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

ConstantEstimate constant_C_at(const DiagonalInstance& inst, const ConstantParams& params) {
  const auto t0 = std::chrono::steady_clock::now();
  check_params(inst.n, params);
  if (inst.a.size() != static_cast<std::size_t>(inst.n + 1)) throw ValidationError("a must have n + 1 entries");
  for (auto v : inst.a) {
    if (v == 0) throw ValidationError("a_i must be nonzero");
    if (std::abs(v) > (std::int64_t{1} << 30)) throw ValidationError("|a_i| too large");
  }
  Engine E;
  E.m = inst.n + 1;
  E.n = inst.n;
  E.t = inst.t;
  E.a = inst.a;
  std::sort(E.a.begin(), E.a.end());
  E.ylist = signed_list(squarefree_up_to(static_cast<std::uint64_t>(params.y_max)));
  std::set<std::uint64_t> ps{2};
  for (auto p : primes_up_to(static_cast<std::uint64_t>(std::max(params.y_max, 2)))) ps.insert(p);
  for (auto v : E.a) {
    for (auto p : prime_factors(v)) ps.insert(p);
  }
  for (auto p : prime_factors(inst.t)) ps.insert(p);
  E.primes.assign(ps.begin(), ps.end());
  E.is_eprime.assign(E.primes.size(), 0);
  Runner R(E, params);
  R.prepare();
  const auto r = R.run(params.y_max / 4);
  ConstantEstimate est;
  est.kind = "C_at";
  est.n = inst.n;
  est.a = inst.a;
  est.t = inst.t;
  est.params = params;
  est.value = r.value;
  est.y_tail = r.value - r.small;
  est.series_tail = r.series_tail;
  if (params.method == SeriesMethod::Truncated) {
    est.note = "truncated singular series, q_max = " + std::to_string(params.q_max);
  }
  est.terms = r.terms;
  est.wall_time = seconds_since(t0);
  return est;
}

ConstantEstimate constant_D(int n, const ConstantParams& params) {
  const auto t0 = std::chrono::steady_clock::now();
  check_params(n, params);
  if (params.method != SeriesMethod::Euler) throw ValidationError("constant_D needs the Euler method");
  const auto base = params.flavour == DFlavour::Coprime
                        ? squarefree_up_to(static_cast<std::uint64_t>(params.y_max))
                        : cubefree_up_to(static_cast<std::uint64_t>(params.y_max));
  Engine E = folded_engine(n, params, signed_list(base));
  Runner R(E, params);
  R.prepare();
  const auto r = R.run(params.y_max / 4);
  ConstantEstimate est;
  est.kind = "D";
  est.n = n;
  est.a.assign(static_cast<std::size_t>(n + 1), 1);
  est.params = params;
  est.value = r.value;
  est.y_tail = r.value - r.small;
  est.series_tail = r.series_tail;
  est.terms = r.terms;
  est.note = params.flavour == DFlavour::Coprime ? "y coprime to f (matches N_(e,f))"
                                                 : "C_{e^2 f^3, 0} over all squarefree y";
  est.wall_time = seconds_since(t0);
  return est;
}

ConstantEstimate constant_orbifold_C(int n, const ConstantParams& params) {
  auto est = constant_D(n, params);
  const double s = std::ldexp(1.0, -(n + 2));
  est.kind = "C";
  est.value *= s;
  est.y_tail *= s;
  est.series_tail *= s;
  est.note += "; C = D / 2^(n+2), y modulo +-1 halves the y sum";
  return est;
}

ConstantEstimate constant_quadric(std::span<const std::int64_t> y, const ConstantParams& params) {
  const auto t0 = std::chrono::steady_clock::now();
  const int n = static_cast<int>(y.size()) - 1;
  check_params(n, params);
  for (auto v : y) {
    if (v == 0 || !is_squarefree(v)) throw ValidationError("y_i must be nonzero squarefree");
    if (std::abs(v) > 1000000) throw ValidationError("|y_i| too large");
  }
  ConstantParams p = params;
  p.flavour = DFlavour::Coprime;
  std::vector<std::int64_t> ylist(y.begin(), y.end());
  std::sort(ylist.begin(), ylist.end());
  ylist.erase(std::unique(ylist.begin(), ylist.end()), ylist.end());
  Engine E = folded_engine(n, p, ylist);
  Runner R(E, p);
  R.prepare();
  std::vector<std::uint16_t> idx;
  for (auto v : y) {
    idx.push_back(static_cast<std::uint16_t>(std::lower_bound(ylist.begin(), ylist.end(), v) - ylist.begin()));
  }
  ConstantEstimate est;
  est.kind = "C_Q";
  est.n = n;
  est.a.assign(y.begin(), y.end());
  est.params = p;
  est.value = R.single(idx);
  est.series_tail = R.tail_T > 0 ? R.last_abs * std::expm1(R.tail_T) : 0.0;
  est.terms = 1;
  est.wall_time = seconds_since(t0);
  return est;
}

double uniform_cap(int n) {
  if (n < 4 || n > 7) throw ValidationError("n must be in [4, 7]");
  const int m = n + 1;
  double J = 0.0;
  for (int k = 1; k < m; ++k) J = std::max(J, cached_J(m, k, 1));
  const double Z = 2.0 * std::riemann_zeta(1.5) / std::riemann_zeta(3.0);
  return std::ldexp(1.0, m) * J * std::pow(Z, m) * 4.0 * std::riemann_zeta(n - 1.0) /
         std::riemann_zeta(static_cast<double>(n));
}

double literal_D_log_bound(int n) {
  const double K = 2.0 * std::ldexp(1.0, 1 << (n + 1));
  double s = std::log(uniform_cap(n));
  // Direct sum while the terms are large, then log(1+x) <= x and
  // sum_{p > P} p^{-(n-1)} <= P^{2-n} / (n - 2).
  const std::uint64_t P = 1 << 20;
  for (auto p : primes_up_to(P)) s += std::log1p(K * std::pow(static_cast<double>(p), 1.0 - n));
  s += K * std::pow(static_cast<double>(P), 2.0 - n) / (n - 2);
  return s;
}

double predict(int n, double B, const ConstantEstimate& constant) {
  if (!(B >= 1.0)) throw ValidationError("B must be >= 1");
  return constant.value * std::pow(B, (n - 1) / 2.0);
}

}  // namespace orbicount
