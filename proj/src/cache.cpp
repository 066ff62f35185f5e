#include "orbicount/cache.hpp"

#include <chrono>
#include <ctime>
#include <fstream>
#include <iostream>
#include <vector>

#include "orbicount/errors.hpp"

namespace orbicount {

std::string canonical_key(const nlohmann::json& key) { return key.dump(); }

ConstantCache::ConstantCache(std::filesystem::path dir)
    : dir_(std::move(dir)), file_(dir_ / "constants.jsonl") {}

std::optional<nlohmann::json> ConstantCache::scan(const std::string& key) {
  std::ifstream in(file_);
  if (!in) return std::nullopt;
  std::vector<std::string> good, bad;
  std::optional<nlohmann::json> found;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    nlohmann::json rec = nlohmann::json::parse(line, nullptr, false);
    if (rec.is_discarded() || !rec.is_object() || !rec.contains("key") || !rec.contains("value")) {
      bad.push_back(line);
      continue;
    }
    good.push_back(line);
    if (!found && canonical_key(rec["key"]) == key) found = rec["value"];
  }
  in.close();
  if (!bad.empty()) {
    std::ofstream q(file_.string() + ".quarantine", std::ios::app);
    for (const auto& b : bad) q << b << '\n';
    const auto tmp = file_.string() + ".tmp";
    {
      std::ofstream out(tmp, std::ios::trunc);
      for (const auto& g : good) out << g << '\n';
    }
    std::filesystem::rename(tmp, file_);
    quarantined_ += bad.size();
    std::cerr << "warning: quarantined " << bad.size() << " corrupt cache record(s) from "
              << file_.string() << '\n';
  }
  return found;
}

std::optional<nlohmann::json> ConstantCache::lookup(const nlohmann::json& key) {
  return scan(canonical_key(key));
}

nlohmann::json ConstantCache::store(const nlohmann::json& key, const nlohmann::json& value) {
  const auto k = canonical_key(key);
  if (auto old = scan(k)) return *old;
  std::error_code ec;
  std::filesystem::create_directories(dir_, ec);
  std::ofstream out(file_, std::ios::app);
  if (!out) throw ValidationError("cache directory not writable: " + dir_.string());
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
  nlohmann::json rec{{"created", buf}, {"key", key}, {"value", value}};
  out << rec.dump() << '\n';
  return value;
}

}  // namespace orbicount
