#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace cleanreg {

using u128 = unsigned __int128;
using i128 = __int128;

inline std::string to_string(u128 v) {
  if (v == 0) return "0";
  char buf[48];
  int pos = 48;
  while (v > 0) {
    buf[--pos] = char('0' + int(v % 10));
    v /= 10;
  }
  return std::string(buf + pos, buf + 48);
}

inline std::string to_string(i128 v) {
  if (v < 0) return "-" + to_string(u128(-v));
  return to_string(u128(v));
}

inline u128 parse_u128(const std::string& s) {
  if (s.empty()) throw std::invalid_argument("empty integer literal");
  u128 v = 0;
  for (char c : s) {
    if (c < '0' || c > '9') throw std::invalid_argument("bad integer literal: " + s);
    u128 next = v * 10 + u128(c - '0');
    if (next < v) throw std::overflow_error("integer literal too large: " + s);
    v = next;
  }
  return v;
}

inline int bit_length(u128 v) {
  int n = 0;
  while (v > 0) { ++n; v >>= 1; }
  return n;
}

}  // namespace cleanreg
