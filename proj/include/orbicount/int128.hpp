#pragma once

#include <cstdint>
#include <string>

namespace orbicount {

// Exact counts. Point counts at desk scale fit in 64 bits, but partial sums of
// the inclusion-exclusion and p-adic solution counts do not.
using Count = __int128;

std::string to_string(Count value);
Count parse_count(const std::string& text);

}  // namespace orbicount
