#include "orbicount/enumerate.hpp"

#include <algorithm>
#include <chrono>
#include <limits>
#include <map>
#include <numeric>
#include <unordered_map>

#include "orbicount/arith.hpp"
#include "orbicount/errors.hpp"

namespace orbicount {
namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::int64_t abs64(std::int64_t v) { return v < 0 ? -v : v; }

void require(bool ok, const std::string& message) {
  if (!ok) throw ValidationError(message);
}

void validate_n_B(int n, std::int64_t B) {
  require(n >= 2, "n must be >= 2");
  require(B >= 1, "B must be >= 1");
}

// Signed squareful values +-s, s <= bound, divisible by d; weight w each.
CoordinateList signed_squareful(std::int64_t bound, std::int64_t d,
                                std::int64_t weight) {
  std::vector<WeightedValue> out;
  for (const auto& s : squareful_up_to(static_cast<std::uint64_t>(bound))) {
    if (s.value % d != 0) continue;
    out.push_back({s.value, weight});
    out.push_back({-s.value, weight});
  }
  return normalize(std::move(out));
}

// Sum over squarefree d of mu(d) * #{tuples with d | every value} for value
// lists built by `make(d)`. The coprimality of the (x_i y_i) is equivalent to
// coprimality of the squareful values x_i^2 y_i^3 themselves, and a squarefree
// d dividing a squareful value forces d^2 to divide it, so d <= sqrt(B).
template <typename MakeLists>
Count moebius_count(std::int64_t d_max, MakeLists make, const ExecPolicy& policy) {
  const auto mu = moebius_table(static_cast<std::uint64_t>(std::max<std::int64_t>(d_max, 1)));
  Count total = 0;
  for (std::int64_t d = 1; d <= d_max; ++d) {
    if (mu[static_cast<std::size_t>(d)] == 0) continue;
    const std::vector<CoordinateList> lists = make(d);
    bool empty = false;
    for (const auto& l : lists) empty = empty || l.empty();
    if (empty) continue;
    total += mu[static_cast<std::size_t>(d)] * count_sum(lists, 0, policy);
  }
  return total;
}

void validate_couple(std::span<const std::int64_t> e,
                     std::span<const std::int64_t> f) {
  require(e.size() == f.size() && e.size() >= 3,
          "e and f must have equal length n+1 >= 3");
  for (std::size_t i = 0; i < e.size(); ++i) {
    require(e[i] >= 1 && f[i] >= 1, "e_i and f_i must be positive");
    require(is_squarefree(f[i]), "f_i must be squarefree");
  }
}

}  // namespace

void DiagonalInstance::validate() const {
  require(n >= 2, "n must be >= 2");
  require(a.size() == static_cast<std::size_t>(n + 1),
          "coefficient vector must have n+1 entries");
  for (auto c : a) require(c != 0, "coefficients must be nonzero");
}

std::int64_t HeightBound::floor() const {
  require(den > 0 && num >= 0, "height bound must be a nonnegative rational");
  return num / den;
}

std::string HeightBound::to_string() const {
  return den == 1 ? std::to_string(num)
                  : std::to_string(num) + "/" + std::to_string(den);
}

CoordinateList coefficient_list(std::int64_t a, std::int64_t bound,
                                std::int64_t y_coprime_to) {
  require(a != 0, "coefficient must be nonzero");
  std::vector<WeightedValue> out;
  const std::int64_t limit = bound / abs64(a);
  if (limit < 1) return {};
  for (const auto& s : squareful_up_to(static_cast<std::uint64_t>(limit))) {
    if (y_coprime_to != 1 && std::gcd(s.y, y_coprime_to) != 1) continue;
    out.push_back({a * s.value, 2});
    out.push_back({-a * s.value, 2});
  }
  return normalize(std::move(out));
}

CountResult count_M(int n, std::int64_t B, const ExecPolicy& policy) {
  validate_n_B(n, B);
  const auto start = Clock::now();
  const auto d_max = static_cast<std::int64_t>(isqrt(static_cast<std::uint64_t>(B)));
  const Count c = moebius_count(
      d_max,
      [&](std::int64_t d) {
        return std::vector<CoordinateList>(static_cast<std::size_t>(n + 1),
                                           signed_squareful(B, d, 2));
      },
      policy);
  return {c, HeightBound::integer(B), seconds_since(start)};
}

CountResult count_orbifold(int n, std::int64_t B, const ExecPolicy& policy) {
  validate_n_B(n, B);
  const auto start = Clock::now();
  const auto d_max = static_cast<std::int64_t>(isqrt(static_cast<std::uint64_t>(B)));
  const Count affine = moebius_count(
      d_max,
      [&](std::int64_t d) {
        return std::vector<CoordinateList>(static_cast<std::size_t>(n + 1),
                                           signed_squareful(B, d, 1));
      },
      policy);
  if (affine % 2 != 0) {
    throw InconsistencyError("affine orbifold count is odd");
  }
  return {affine / 2, HeightBound::integer(B), seconds_since(start)};
}

CountResult count_M_at_coprime(const DiagonalInstance& inst, HeightBound B,
                               std::span<const std::int64_t> coprime_to,
                               const ExecPolicy& policy) {
  inst.validate();
  require(coprime_to.empty() || coprime_to.size() == inst.a.size(),
          "coprimality vector must have n+1 entries");
  const auto start = Clock::now();
  const std::int64_t bound = B.floor();
  std::vector<CoordinateList> lists;
  for (std::size_t i = 0; i < inst.a.size(); ++i) {
    lists.push_back(coefficient_list(inst.a[i], bound,
                                     coprime_to.empty() ? 1 : coprime_to[i]));
  }
  const Count c = count_sum(lists, inst.t, policy);
  return {c, B, seconds_since(start)};
}

CountResult count_M_at(const DiagonalInstance& inst, HeightBound B,
                       const ExecPolicy& policy) {
  return count_M_at_coprime(inst, B, {}, policy);
}

CountResult count_N(std::span<const std::int64_t> e,
                    std::span<const std::int64_t> f, std::int64_t B,
                    const ExecPolicy& policy) {
  validate_couple(e, f);
  require(B >= 1, "B must be >= 1");
  const auto start = Clock::now();
  std::vector<CoordinateList> lists;
  const auto mu = moebius_table(icbrt(static_cast<std::uint64_t>(B)));
  for (std::size_t i = 0; i < e.size(); ++i) {
    std::vector<WeightedValue> vals;
    const std::int64_t ymax = static_cast<std::int64_t>(icbrt(static_cast<std::uint64_t>(B)));
    for (std::int64_t y = f[i]; y <= ymax; y += f[i]) {
      if (mu[static_cast<std::size_t>(y)] == 0) continue;
      const std::int64_t cube = y * y * y;
      const std::int64_t xmax = static_cast<std::int64_t>(isqrt(static_cast<std::uint64_t>(B / cube)));
      for (std::int64_t x = e[i]; x <= xmax; x += e[i]) {
        vals.push_back({x * x * cube, 2});
        vals.push_back({-x * x * cube, 2});
      }
    }
    lists.push_back(normalize(std::move(vals)));
  }
  const Count c = count_sum(lists, 0, policy);
  return {c, HeightBound::integer(B), seconds_since(start)};
}

Rescaling rescale_couple(std::span<const std::int64_t> e,
                         std::span<const std::int64_t> f) {
  validate_couple(e, f);
  Rescaling r;
  std::int64_t g = 0;
  for (std::size_t i = 0; i < e.size(); ++i) g = std::gcd(g, e[i] * f[i]);
  r.g = g;
  for (std::size_t i = 0; i < e.size(); ++i) {
    const std::int64_t w = e[i] * e[i] * f[i] * f[i] * f[i];
    if (w % (g * g) != 0) throw InconsistencyError("rescaling is not integral");
    r.v.push_back(w / (g * g));
  }
  return r;
}

CountResult count_N_rescaled(std::span<const std::int64_t> e,
                             std::span<const std::int64_t> f, std::int64_t B,
                             const ExecPolicy& policy) {
  const auto r = rescale_couple(e, f);
  DiagonalInstance inst{static_cast<int>(e.size()) - 1, r.v, 0};
  return count_M_at(inst, HeightBound{B, r.g * r.g}, policy);
}

CountResult count_N_rescaled_coprime(std::span<const std::int64_t> e,
                                     std::span<const std::int64_t> f,
                                     std::int64_t B, const ExecPolicy& policy) {
  const auto r = rescale_couple(e, f);
  DiagonalInstance inst{static_cast<int>(e.size()) - 1, r.v, 0};
  return count_M_at_coprime(inst, HeightBound{B, r.g * r.g}, f, policy);
}

CountResult count_quadric_points(std::span<const std::int64_t> y,
                                 std::int64_t B, const ExecPolicy& policy) {
  require(y.size() >= 3, "y must have n+1 >= 3 entries");
  for (auto yi : y) require(yi != 0 && is_squarefree(yi), "y_i must be nonzero squarefree");
  require(B >= 1, "B must be >= 1");
  const auto start = Clock::now();
  // d | x_i y_i for all i  <=>  d / gcd(d, y_i) | x_i  (d squarefree).
  std::int64_t d_max = std::numeric_limits<std::int64_t>::max();
  for (auto yi : y) {
    d_max = std::min<std::int64_t>(
        d_max, static_cast<std::int64_t>(isqrt(static_cast<std::uint64_t>(B / abs64(yi)))));
  }
  const Count c = moebius_count(
      std::max<std::int64_t>(d_max, 1),
      [&](std::int64_t d) {
        std::vector<CoordinateList> lists;
        for (auto yi : y) {
          const std::int64_t cube = yi * yi * yi;
          const std::int64_t step = d / std::gcd(d, abs64(yi));
          std::vector<WeightedValue> vals;
          for (std::int64_t x = step; x * x <= B / abs64(cube); x += step) {
            vals.push_back({cube * x * x, 1});
          }
          lists.push_back(normalize(std::move(vals)));
        }
        return lists;
      },
      policy);
  return {c, HeightBound::integer(B), seconds_since(start)};
}

namespace {

struct Pair {
  std::int64_t x;
  std::int64_t y;
  std::int64_t value;
};

// All (x, y) with x, y nonzero, y squarefree, |a x^2 y^3| <= bound, sorted by
// (x, y). Built by direct scan, independent of squareful_up_to.
std::vector<Pair> direct_pairs(std::int64_t a, std::int64_t bound,
                               std::int64_t e = 1, std::int64_t f = 1) {
  std::vector<Pair> out;
  const std::int64_t lim = bound / abs64(a);
  for (std::int64_t y = -lim; y <= lim; ++y) {
    if (y == 0 || y % f != 0 || !is_squarefree(y)) continue;
    const std::int64_t cube = abs64(y * y * y);
    if (cube > lim) continue;
    for (std::int64_t x = -lim; x <= lim; ++x) {
      if (x == 0 || x % e != 0) continue;
      if (x * x > lim / cube) continue;
      out.push_back({x, y, a * x * x * y * y * y});
    }
  }
  std::sort(out.begin(), out.end(), [](const Pair& l, const Pair& r) {
    return l.x != r.x ? l.x < r.x : l.y < r.y;
  });
  return out;
}

// Depth-first over all but the last coordinate; the last is matched through a
// value index. `visit` returns false to stop.
template <typename Visit>
bool for_each_solution(const std::vector<std::vector<Pair>>& lists,
                       std::int64_t target, Visit&& visit) {
  const std::size_t k = lists.size();
  std::map<std::int64_t, std::vector<std::size_t>> last;
  for (std::size_t j = 0; j < lists[k - 1].size(); ++j) {
    last[lists[k - 1][j].value].push_back(j);
  }
  std::vector<const Pair*> chosen(k, nullptr);
  auto rec = [&](auto&& self, std::size_t depth, std::int64_t remaining) -> bool {
    if (depth + 1 == k) {
      auto it = last.find(remaining);
      if (it == last.end()) return true;
      for (auto j : it->second) {
        chosen[depth] = &lists[depth][j];
        if (!visit(chosen)) return false;
      }
      return true;
    }
    for (const auto& p : lists[depth]) {
      chosen[depth] = &p;
      if (!self(self, depth + 1, remaining - p.value)) return false;
    }
    return true;
  };
  return rec(rec, 0, target);
}

}  // namespace

SolutionList enumerate_solutions(const DiagonalInstance& inst, HeightBound B,
                                 std::size_t cap) {
  inst.validate();
  const std::int64_t bound = B.floor();
  std::vector<std::vector<Pair>> lists;
  for (auto a : inst.a) lists.push_back(direct_pairs(a, bound));
  SolutionList out;
  for (const auto& l : lists) {
    if (l.empty()) return out;
  }
  for_each_solution(lists, inst.t, [&](const std::vector<const Pair*>& tuple) {
    if (out.solutions.size() == cap) {
      out.truncated = true;
      return false;
    }
    Solution s;
    for (const Pair* p : tuple) {
      s.x.push_back(p->x);
      s.y.push_back(p->y);
    }
    out.solutions.push_back(std::move(s));
    return true;
  });
  return out;
}

ResidueTable residue_distribution(int n, std::int64_t B, std::int64_t modulus,
                                  int coordinate, const ExecPolicy& policy) {
  validate_n_B(n, B);
  require(modulus >= 1, "modulus must be positive");
  require(coordinate >= 0 && coordinate <= n, "coordinate out of range");
  ResidueTable table;
  table.modulus = modulus;
  table.coordinate = coordinate;
  const auto d_max = static_cast<std::int64_t>(isqrt(static_cast<std::uint64_t>(B)));
  for (std::int64_t r = 0; r < modulus; ++r) {
    const Count c = moebius_count(
        d_max,
        [&](std::int64_t d) {
          std::vector<CoordinateList> lists(static_cast<std::size_t>(n + 1),
                                            signed_squareful(B, d, 1));
          auto& own = lists[static_cast<std::size_t>(coordinate)];
          std::erase_if(own, [&](const WeightedValue& w) {
            return ((w.value % modulus) + modulus) % modulus != r;
          });
          return lists;
        },
        policy);
    table.counts.push_back(c);
    table.total += c;
  }
  if (table.total == 0) {
    throw ValidationError("no orbifold points at this height; distribution undefined");
  }
  return table;
}

namespace reference {

Count count_M_at(const DiagonalInstance& inst, HeightBound B) {
  inst.validate();
  std::vector<std::vector<Pair>> lists;
  for (auto a : inst.a) lists.push_back(direct_pairs(a, B.floor()));
  for (const auto& l : lists) {
    if (l.empty()) return 0;
  }
  Count total = 0;
  for_each_solution(lists, inst.t, [&](const auto&) {
    ++total;
    return true;
  });
  return total;
}

Count count_M(int n, std::int64_t B) {
  validate_n_B(n, B);
  std::vector<std::vector<Pair>> lists(static_cast<std::size_t>(n + 1),
                                       direct_pairs(1, B));
  Count total = 0;
  std::vector<std::int64_t> xy(static_cast<std::size_t>(n + 1));
  for_each_solution(lists, 0, [&](const std::vector<const Pair*>& tuple) {
    for (std::size_t i = 0; i < tuple.size(); ++i) xy[i] = tuple[i]->x * tuple[i]->y;
    if (gcd_of(xy) == 1) ++total;
    return true;
  });
  return total;
}

Count count_N(std::span<const std::int64_t> e, std::span<const std::int64_t> f,
              std::int64_t B) {
  validate_couple(e, f);
  std::vector<std::vector<Pair>> lists;
  for (std::size_t i = 0; i < e.size(); ++i) lists.push_back(direct_pairs(1, B, e[i], f[i]));
  for (const auto& l : lists) {
    if (l.empty()) return 0;
  }
  Count total = 0;
  for_each_solution(lists, 0, [&](const auto&) {
    ++total;
    return true;
  });
  return total;
}

Count count_orbifold(int n, std::int64_t B) {
  validate_n_B(n, B);
  // Squareful values by predicate, independent of the (x, y) chart.
  std::vector<Pair> values;
  for (std::int64_t v = -B; v <= B; ++v) {
    if (v != 0 && is_squareful(v)) values.push_back({v, 1, v});
  }
  std::vector<std::vector<Pair>> lists(static_cast<std::size_t>(n + 1), values);
  Count affine = 0;
  std::vector<std::int64_t> a(static_cast<std::size_t>(n + 1));
  for_each_solution(lists, 0, [&](const std::vector<const Pair*>& tuple) {
    for (std::size_t i = 0; i < tuple.size(); ++i) a[i] = tuple[i]->value;
    if (gcd_of(a) == 1) ++affine;
    return true;
  });
  return affine / 2;
}

Count count_quadric_points(std::span<const std::int64_t> y, std::int64_t B) {
  std::vector<std::vector<Pair>> lists;
  for (auto yi : y) {
    std::vector<Pair> l;
    const std::int64_t cube = yi * yi * yi;
    for (std::int64_t x = 1; x * x * abs64(cube) <= B; ++x) l.push_back({x, yi, cube * x * x});
    lists.push_back(std::move(l));
  }
  for (const auto& l : lists) {
    if (l.empty()) return 0;
  }
  Count total = 0;
  std::vector<std::int64_t> xy(y.size());
  for_each_solution(lists, 0, [&](const std::vector<const Pair*>& tuple) {
    for (std::size_t i = 0; i < tuple.size(); ++i) xy[i] = tuple[i]->x * tuple[i]->y;
    if (gcd_of(xy) == 1) ++total;
    return true;
  });
  return total;
}

}  // namespace reference
}  // namespace orbicount
