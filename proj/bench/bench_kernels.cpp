// Serial reference kernels against the parallel ones. Prints one line per
// kernel: name, size, serial seconds, parallel seconds per worker count.
//
//   bench_kernels [max_workers]

#include <omp.h>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <string>
#include <vector>

#include "orbicount/constants.hpp"
#include "orbicount/enumerate.hpp"
#include "orbicount/expsums.hpp"
#include "orbicount/sum_count.hpp"

using namespace orbicount;

namespace {

double seconds(const std::function<Count()>& f, Count& result) {
  const auto t0 = std::chrono::steady_clock::now();
  result = f();
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

void row(const std::string& name, const std::string& size, const std::function<Count()>& serial,
         const std::function<Count(int)>& parallel, const std::vector<int>& workers) {
  Count ref = 0, got = 0;
  const double ts = seconds(serial, ref);
  std::printf("%-16s %-12s serial %9.4fs", name.c_str(), size.c_str(), ts);
  for (int w : workers) {
    const double tp = seconds([&] { return parallel(w); }, got);
    std::printf("  w=%d %9.4fs%s", w, tp, got == ref ? "" : " MISMATCH");
  }
  std::printf("\n");
  if (got != ref) std::exit(1);
}

}  // namespace

int main(int argc, char** argv) {
  const int max_w = argc > 1 ? std::atoi(argv[1]) : omp_get_max_threads();
  std::vector<int> workers{1};
  for (int w = 2; w <= max_w; w *= 2) workers.push_back(w);
  std::printf("hardware threads: %d\n", omp_get_max_threads());

  for (std::int64_t B : {150, 400}) {
    std::vector<CoordinateList> coords(5, coefficient_list(1, B));
    row("count_sum", "B=" + std::to_string(B), [&] { return count_sum_serial(coords, 0); },
        [&](int w) { return count_sum(coords, 0, ExecPolicy{w, 1e15}); }, workers);
  }
  for (std::int64_t B : {100, 200}) {
    row("count_M", "B=" + std::to_string(B), [&] { return reference::count_M(4, B); },
        [&](int w) { return count_M(4, B, ExecPolicy{w, 1e15}).count; }, workers);
  }
  for (std::int64_t B : {100000, 1000000}) {
    row("fourth_moment", "B=" + std::to_string(B), [&] { return fourth_moment_serial(1, B); },
        [&](int w) { return fourth_moment(1, B, ExecPolicy{w, 1e15}); }, workers);
  }
  // Constant: the first call fills the J cache, so "serial" here is a cold
  // run; the worker results must be bit-identical to it.
  ConstantParams p;
  p.y_max = 20;
  Count dummy = 0;
  double ref = 0;
  const double ts = seconds([&] { ref = constant_D(4, p).value; return Count(0); }, dummy);
  std::printf("%-16s %-12s serial %9.4fs", "constant_D", "ymax=20", ts);
  for (int w : workers) {
    p.workers = w;
    double v = 0;
    const double tp = seconds([&] { v = constant_D(4, p).value; return Count(0); }, dummy);
    std::printf("  w=%d %9.4fs%s", w, tp, v == ref ? "" : " MISMATCH");
  }
  std::printf("\n");
  return 0;
}
