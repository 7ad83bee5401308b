#include "khss/field.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>

namespace khss {

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  if (n % 2 == 0) return n == 2;
  for (std::uint64_t d = 3; d * d <= n; d += 2) {
    if (n % d == 0) return false;
  }
  return true;
}

Field Field::gfp(std::uint64_t p) {
  if (p == 2) return gf2();
  if (p >= (std::uint64_t{1} << 31) || !is_prime(p)) {
    throw FieldError("unsupported field characteristic " + std::to_string(p));
  }
  return {Kind::gfp, static_cast<std::uint32_t>(p)};
}

Field Field::parse(std::string_view text) {
  std::string s;
  for (char c : text) {
    if (!std::isspace(static_cast<unsigned char>(c))) s.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  }
  if (s == "q" || s == "qq" || s == "rational" || s == "rationals") return rationals();
  std::string digits;
  if (s.rfind("gf(", 0) == 0 && s.back() == ')') {
    digits = s.substr(3, s.size() - 4);
  } else if (s.rfind("gf", 0) == 0) {
    digits = s.substr(2);
  } else if (s.rfind("f", 0) == 0) {
    digits = s.substr(1);
  } else {
    throw FieldError("unknown field '" + std::string(text) + "'");
  }
  std::uint64_t p = 0;
  auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), p);
  if (ec != std::errc() || ptr != digits.data() + digits.size() || digits.empty()) {
    throw FieldError("unknown field '" + std::string(text) + "'");
  }
  return gfp(p);
}

std::string Field::name() const {
  switch (kind) {
    case Kind::gf2:
      return "GF(2)";
    case Kind::gfp:
      return "GF(" + std::to_string(characteristic) + ")";
    case Kind::rational:
      break;
  }
  return "Q";
}

std::string Field::short_name() const {
  switch (kind) {
    case Kind::gf2:
      return "f2";
    case Kind::gfp:
      return "f" + std::to_string(characteristic);
    case Kind::rational:
      break;
  }
  return "q";
}

namespace fields {

Gfp::value_type Gfp::inv(value_type a) const {
  if (a == 0) throw FieldError("GF(p): inverse of zero");
  // Fermat: a^(p-2)
  std::uint64_t result = 1;
  std::uint64_t base = a;
  std::uint64_t e = p - 2;
  while (e > 0) {
    if (e & 1) result = (result * base) % p;
    base = (base * base) % p;
    e >>= 1;
  }
  return static_cast<value_type>(result);
}

}  // namespace fields
}  // namespace khss
