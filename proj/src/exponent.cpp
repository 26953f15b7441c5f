#include "multivision/exponent.hpp"

namespace multivision {

bool parse_decimal(std::string_view text, Exponent& out) {
  bool negative = false;
  if (!text.empty() && text.front() == '-') {
    negative = true;
    text.remove_prefix(1);
  }
  if (text.empty()) return false;
  Exponent value = 0;
  // Chunks of 18 digits keep the big-integer multiply count low.
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t len = std::min<std::size_t>(18, text.size() - pos);
    std::uint64_t chunk = 0;
    std::uint64_t scale = 1;
    for (std::size_t i = 0; i < len; ++i) {
      char c = text[pos + i];
      if (c < '0' || c > '9') return false;
      chunk = chunk * 10 + static_cast<std::uint64_t>(c - '0');
      scale *= 10;
    }
    value = value * scale + chunk;
    pos += len;
  }
  out = negative ? Exponent(-value) : value;
  return true;
}

std::string to_decimal(const Exponent& value) { return value.str(); }

std::uint64_t mod_k(const Exponent& value, std::uint64_t k) {
  Exponent r = value % k;
  if (r < 0) r += k;
  return r.convert_to<std::uint64_t>();
}

}  // namespace multivision
