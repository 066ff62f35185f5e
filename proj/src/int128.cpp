#include "orbicount/int128.hpp"

#include <algorithm>

#include "orbicount/errors.hpp"

namespace orbicount {

std::string to_string(Count value) {
  if (value == 0) return "0";
  const bool negative = value < 0;
  unsigned __int128 magnitude =
      negative ? static_cast<unsigned __int128>(-(value + 1)) + 1
               : static_cast<unsigned __int128>(value);
  std::string digits;
  while (magnitude > 0) {
    digits.push_back(static_cast<char>('0' + static_cast<int>(magnitude % 10)));
    magnitude /= 10;
  }
  if (negative) digits.push_back('-');
  std::reverse(digits.begin(), digits.end());
  return digits;
}

Count parse_count(const std::string& text) {
  if (text.empty()) throw ValidationError("empty integer literal");
  std::size_t pos = 0;
  bool negative = false;
  if (text[0] == '-' || text[0] == '+') {
    negative = text[0] == '-';
    pos = 1;
  }
  if (pos == text.size()) throw ValidationError("malformed integer: " + text);
  Count value = 0;
  for (; pos < text.size(); ++pos) {
    const char c = text[pos];
    if (c < '0' || c > '9') throw ValidationError("malformed integer: " + text);
    value = value * 10 + (c - '0');
  }
  return negative ? -value : value;
}

}  // namespace orbicount
