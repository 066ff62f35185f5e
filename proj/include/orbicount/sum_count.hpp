#pragma once

// Counting kernel for  sum_i v_i = target  with each v_i drawn from a finite
// weighted list. Every point counter reduces to this.
//
// count_sum splits the coordinates into three groups G1 | G2 | G3, builds the
// sum histograms H1 (sparse), H2 (dense when the range allows) and H3
// (sparse), and evaluates
//
//     sum_{s3} H3(s3) * sum_{s1} H1(s1) * H2(target - s3 - s1)
//
// in parallel over s3. count_sum_serial is the plain nested-loop reference.

#include <cstdint>
#include <span>
#include <vector>

#include "orbicount/int128.hpp"

namespace orbicount {

struct WeightedValue {
  std::int64_t value;
  std::int64_t weight;
};

// Sorted by value, values distinct, weights positive.
using CoordinateList = std::vector<WeightedValue>;

struct ExecPolicy {
  int workers = 1;
  double budget = 1e11;  // estimated elementary operations
};

// Merge duplicates and sort.
CoordinateList normalize(std::vector<WeightedValue> values);

double estimate_sum_work(std::span<const CoordinateList> coords);

Count count_sum(std::span<const CoordinateList> coords, std::int64_t target,
                const ExecPolicy& policy);

Count count_sum_serial(std::span<const CoordinateList> coords,
                       std::int64_t target);

// Sum histogram of a group of coordinates, sorted by value.
CoordinateList sum_histogram(std::span<const CoordinateList> coords);

}  // namespace orbicount
