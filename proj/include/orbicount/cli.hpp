#pragma once

// Command dispatch for the orbicount tool. execute() returns the result
// record; run_cli() parses argv, prints the record (JSON or CSV) and maps
// errors to exit codes 0 / 2 validation / 3 budget / 4 inconsistency.

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "json.hpp"

namespace orbicount {

inline constexpr int kSchemaVersion = 1;
inline constexpr const char* kToolVersion = "0.1.0";

struct RunConfig {
  std::string command;
  std::optional<int> n;
  std::optional<std::string> B;  // integer for counts, real for predict/integral
  std::vector<std::int64_t> a, y, e, f;
  std::int64_t t = 0;
  int ymax = 40;
  std::int64_t qmax = 2000;
  std::int64_t ebound = 20;
  std::int64_t pmax = 1000;
  std::optional<double> delta;
  std::optional<double> P;
  int workers = 1;
  std::uint64_t seed = 1;
  std::string format = "json";
  std::string cache_dir;
  std::optional<double> budget;
  // command specific
  std::string kind = "C";          // constant / predict: C_at, D, C, C_Q
  std::string flavour = "coprime"; // D: coprime | literal
  std::string method = "euler";    // C_at: euler | truncated
  std::string angle;               // sigma: r/q
  std::int64_t modulus = 2;
  int coord = 0;
  std::int64_t samples = 1000;
  std::int64_t grid = 0;
};

nlohmann::json execute(const RunConfig& config);

std::string to_csv(const nlohmann::json& record);

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace orbicount
