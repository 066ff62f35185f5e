#include "orbicount/sum_count.hpp"

#include <algorithm>
#include <omp.h>

#include "orbicount/errors.hpp"

namespace orbicount {
namespace {

constexpr std::int64_t kDenseLimit = std::int64_t{1} << 26;

struct DenseHistogram {
  std::int64_t lo = 0;
  std::int64_t hi = -1;
  std::vector<std::int64_t> cells;

  std::int64_t at(std::int64_t v) const {
    return (v < lo || v > hi) ? 0 : cells[static_cast<std::size_t>(v - lo)];
  }
};

std::int64_t span_lo(std::span<const CoordinateList> coords) {
  std::int64_t lo = 0;
  for (const auto& c : coords) lo += c.front().value;
  return lo;
}

std::int64_t span_hi(std::span<const CoordinateList> coords) {
  std::int64_t hi = 0;
  for (const auto& c : coords) hi += c.back().value;
  return hi;
}

DenseHistogram dense_histogram(std::span<const CoordinateList> coords) {
  DenseHistogram h;
  h.lo = span_lo(coords);
  h.hi = span_hi(coords);
  h.cells.assign(static_cast<std::size_t>(h.hi - h.lo + 1), 0);
  std::vector<std::int64_t> next;
  // Offsets are relative to h.lo.
  std::vector<std::int64_t> cur{1};
  for (const auto& c : coords) {
    const std::int64_t clo = c.front().value;
    const std::int64_t width = c.back().value - clo;
    next.assign(cur.size() + static_cast<std::size_t>(width), 0);
    for (std::size_t i = 0; i < cur.size(); ++i) {
      if (cur[i] == 0) continue;
      for (const auto& wv : c) {
        next[i + static_cast<std::size_t>(wv.value - clo)] += cur[i] * wv.weight;
      }
    }
    cur.swap(next);
  }
  std::copy(cur.begin(), cur.end(), h.cells.begin());
  return h;
}

}  // namespace

CoordinateList normalize(std::vector<WeightedValue> values) {
  std::sort(values.begin(), values.end(),
            [](const auto& l, const auto& r) { return l.value < r.value; });
  CoordinateList out;
  for (const auto& v : values) {
    if (v.weight == 0) continue;
    if (!out.empty() && out.back().value == v.value) {
      out.back().weight += v.weight;
    } else {
      out.push_back(v);
    }
  }
  return out;
}

CoordinateList sum_histogram(std::span<const CoordinateList> coords) {
  for (const auto& c : coords) {
    if (c.empty()) return {};
  }
  if (coords.empty()) return {{0, 1}};
  const std::int64_t range = span_hi(coords) - span_lo(coords);
  CoordinateList out;
  if (range < kDenseLimit) {
    const auto h = dense_histogram(coords);
    for (std::size_t i = 0; i < h.cells.size(); ++i) {
      if (h.cells[i] != 0) {
        out.push_back({h.lo + static_cast<std::int64_t>(i), h.cells[i]});
      }
    }
    return out;
  }
  std::vector<WeightedValue> cur{{0, 1}};
  for (const auto& c : coords) {
    std::vector<WeightedValue> next;
    next.reserve(cur.size() * c.size());
    for (const auto& a : cur) {
      for (const auto& b : c) next.push_back({a.value + b.value, a.weight * b.weight});
    }
    cur = normalize(std::move(next));
  }
  return cur;
}

double estimate_sum_work(std::span<const CoordinateList> coords) {
  const std::size_t k = coords.size();
  if (k == 0) return 1.0;
  double sizes = 0.0;
  for (const auto& c : coords) sizes += static_cast<double>(c.size());
  if (k == 1) return sizes;
  const std::size_t g3 = k / 3;
  const std::size_t g1 = (k - g3) / 2;
  auto product = [&](std::size_t from, std::size_t to) {
    double p = 1.0;
    for (std::size_t i = from; i < to; ++i) p *= static_cast<double>(coords[i].size());
    return p;
  };
  const double h1 = product(0, g1);
  const double h2 = product(g1, k - g3);
  const double h3 = product(k - g3, k);
  return h1 + h2 + h3 + h1 * h3 + sizes;
}

Count count_sum(std::span<const CoordinateList> coords, std::int64_t target,
                const ExecPolicy& policy) {
  const std::size_t k = coords.size();
  for (const auto& c : coords) {
    if (c.empty()) return 0;
  }
  if (k == 0) return target == 0 ? 1 : 0;
  const double work = estimate_sum_work(coords);
  if (work > policy.budget) {
    throw BudgetExceeded("estimated enumeration work exceeds budget", work,
                         policy.budget);
  }
  if (k == 1) {
    const auto& c = coords[0];
    auto it = std::lower_bound(
        c.begin(), c.end(), target,
        [](const WeightedValue& w, std::int64_t v) { return w.value < v; });
    return (it != c.end() && it->value == target) ? Count{it->weight} : Count{0};
  }

  const std::size_t g3 = k / 3;
  const std::size_t g1 = (k - g3) / 2;
  const auto h1 = sum_histogram(coords.subspan(0, g1));
  const auto g2span = coords.subspan(g1, k - g3 - g1);
  const auto h3 = sum_histogram(coords.subspan(k - g3, g3));

  const std::int64_t range2 = span_hi(g2span) - span_lo(g2span);
  const bool dense = range2 < kDenseLimit;
  DenseHistogram h2dense;
  CoordinateList h2sparse;
  if (dense) {
    h2dense = dense_histogram(g2span);
  } else {
    h2sparse = sum_histogram(g2span);
  }
  const std::int64_t lo2 = span_lo(g2span);
  const std::int64_t hi2 = span_hi(g2span);

  const int workers = std::max(1, policy.workers);
  std::vector<Count> partial(static_cast<std::size_t>(workers), 0);
  const auto n3 = static_cast<std::int64_t>(h3.size());

#pragma omp parallel num_threads(workers)
  {
    Count local = 0;
#pragma omp for schedule(dynamic, 16)
    for (std::int64_t j = 0; j < n3; ++j) {
      const std::int64_t rest = target - h3[static_cast<std::size_t>(j)].value;
      // s1 must satisfy lo2 <= rest - s1 <= hi2.
      auto first = std::lower_bound(
          h1.begin(), h1.end(), rest - hi2,
          [](const WeightedValue& w, std::int64_t v) { return w.value < v; });
      Count inner = 0;
      for (auto it = first; it != h1.end() && it->value <= rest - lo2; ++it) {
        const std::int64_t want = rest - it->value;
        std::int64_t w2;
        if (dense) {
          w2 = h2dense.cells[static_cast<std::size_t>(want - lo2)];
        } else {
          auto f2 = std::lower_bound(
              h2sparse.begin(), h2sparse.end(), want,
              [](const WeightedValue& w, std::int64_t v) { return w.value < v; });
          w2 = (f2 != h2sparse.end() && f2->value == want) ? f2->weight : 0;
        }
        if (w2 != 0) inner += static_cast<Count>(it->weight) * w2;
      }
      local += inner * h3[static_cast<std::size_t>(j)].weight;
    }
    partial[static_cast<std::size_t>(omp_get_thread_num())] = local;
  }
  Count total = 0;
  for (auto p : partial) total += p;
  return total;
}

namespace {

Count serial_rec(std::span<const CoordinateList> coords, std::size_t depth,
                 std::int64_t remaining) {
  const auto& c = coords[depth];
  if (depth + 1 == coords.size()) {
    for (const auto& wv : c) {
      if (wv.value == remaining) return wv.weight;
    }
    return 0;
  }
  Count total = 0;
  for (const auto& wv : c) {
    const Count sub = serial_rec(coords, depth + 1, remaining - wv.value);
    if (sub != 0) total += sub * wv.weight;
  }
  return total;
}

}  // namespace

Count count_sum_serial(std::span<const CoordinateList> coords,
                       std::int64_t target) {
  if (coords.empty()) return target == 0 ? 1 : 0;
  for (const auto& c : coords) {
    if (c.empty()) return 0;
  }
  return serial_rec(coords, 0, target);
}

}  // namespace orbicount
