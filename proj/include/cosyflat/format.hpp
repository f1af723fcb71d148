#pragma once

#include <charconv>
#include <string>

namespace cosyflat {

/// Shortest decimal representation that round-trips the double exactly.
/// Exponents are emitted without sign padding or leading zeros (1e-8, not
/// 1e-08), matching the shortest form proper.
inline std::string format_shortest(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  std::string s(buf, res.ptr);
  const std::size_t e = s.find('e');
  if (e != std::string::npos) {
    std::size_t k = e + 1;
    std::string exp_digits;
    bool negative = false;
    for (; k < s.size(); ++k) {
      if (s[k] == '-') negative = true;
      else if (s[k] != '+') exp_digits += s[k];
    }
    std::size_t nz = exp_digits.find_first_not_of('0');
    exp_digits = nz == std::string::npos ? "0" : exp_digits.substr(nz);
    s = s.substr(0, e + 1) + (negative ? "-" : "") + exp_digits;
  }
  return s;
}

}  // namespace cosyflat
