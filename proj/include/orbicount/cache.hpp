#pragma once

// Append-only store of computed constants, one JSON object per line:
//   {"created": ..., "key": {...}, "value": {...}}
// Keys are compared in canonical form (object members sorted). The first
// record for a key wins; later stores return it unchanged. Lines that do not
// parse are moved to <file>.quarantine with a warning on stderr.

#include <filesystem>
#include <optional>
#include <string>

#include "json.hpp"

namespace orbicount {

std::string canonical_key(const nlohmann::json& key);

class ConstantCache {
 public:
  explicit ConstantCache(std::filesystem::path dir);

  std::optional<nlohmann::json> lookup(const nlohmann::json& key);
  // Returns the retained value: `value` on first store, the old one otherwise.
  nlohmann::json store(const nlohmann::json& key, const nlohmann::json& value);

  const std::filesystem::path& file() const { return file_; }
  std::size_t quarantined() const { return quarantined_; }

 private:
  std::optional<nlohmann::json> scan(const std::string& key);

  std::filesystem::path dir_, file_;
  std::size_t quarantined_ = 0;
};

}  // namespace orbicount
