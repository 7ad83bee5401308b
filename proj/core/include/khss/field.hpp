// Coefficient fields: GF(2), GF(p) for small primes p, and the rationals.
#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

#include "khss/rational.hpp"

namespace khss {

class FieldError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Field {
  enum class Kind { gf2, gfp, rational };

  Kind kind = Kind::rational;
  std::uint32_t characteristic = 0;  // 0 for Q

  static Field gf2() { return {Kind::gf2, 2}; }
  static Field rationals() { return {Kind::rational, 0}; }
  // Throws FieldError unless p is a prime below 2^31.
  static Field gfp(std::uint64_t p);

  // Accepts "f2", "gf2", "GF(2)", "f<p>", "GF(<p>)", "q", "Q".
  static Field parse(std::string_view text);

  // Canonical display name: "GF(2)", "GF(p)", "Q".
  [[nodiscard]] std::string name() const;
  // Short CLI spelling: "f2", "f<p>", "q".
  [[nodiscard]] std::string short_name() const;

  friend bool operator==(const Field&, const Field&) = default;
};

bool is_prime(std::uint64_t n);

namespace fields {

// Arithmetic policy objects. Each exposes value_type plus the handful of
// operations the elimination kernels need.

struct Gf2 {
  using value_type = std::uint8_t;
  [[nodiscard]] static value_type zero() { return 0; }
  [[nodiscard]] static value_type one() { return 1; }
  [[nodiscard]] static bool is_zero(value_type a) { return a == 0; }
  [[nodiscard]] static value_type add(value_type a, value_type b) { return a ^ b; }
  [[nodiscard]] static value_type sub(value_type a, value_type b) { return a ^ b; }
  [[nodiscard]] static value_type mul(value_type a, value_type b) { return a & b; }
  [[nodiscard]] static value_type neg(value_type a) { return a; }
  [[nodiscard]] static value_type inv(value_type a) {
    if (a == 0) throw FieldError("GF(2): inverse of zero");
    return 1;
  }
  [[nodiscard]] static value_type from_int(std::int64_t v) { return static_cast<value_type>(v & 1); }
  [[nodiscard]] static value_type from_rational(const Rational& r) { return static_cast<value_type>(r.mod(2)); }
  [[nodiscard]] static Rational to_rational(value_type a) { return Rational(a); }
  [[nodiscard]] static Field descriptor() { return Field::gf2(); }
};

struct Gfp {
  using value_type = std::uint32_t;
  std::uint32_t p;

  [[nodiscard]] value_type zero() const { return 0; }
  [[nodiscard]] value_type one() const { return 1; }
  [[nodiscard]] static bool is_zero(value_type a) { return a == 0; }
  [[nodiscard]] value_type add(value_type a, value_type b) const {
    const std::uint64_t s = std::uint64_t{a} + b;
    return static_cast<value_type>(s >= p ? s - p : s);
  }
  [[nodiscard]] value_type sub(value_type a, value_type b) const { return a >= b ? a - b : a + (p - b); }
  [[nodiscard]] value_type mul(value_type a, value_type b) const {
    return static_cast<value_type>((std::uint64_t{a} * b) % p);
  }
  [[nodiscard]] value_type neg(value_type a) const { return a == 0 ? 0 : p - a; }
  [[nodiscard]] value_type inv(value_type a) const;
  [[nodiscard]] value_type from_int(std::int64_t v) const {
    std::int64_t r = v % static_cast<std::int64_t>(p);
    if (r < 0) r += p;
    return static_cast<value_type>(r);
  }
  [[nodiscard]] value_type from_rational(const Rational& r) const { return r.mod(p); }
  [[nodiscard]] static Rational to_rational(value_type a) { return Rational(static_cast<std::int64_t>(a)); }
  [[nodiscard]] Field descriptor() const { return Field::gfp(p); }
};

struct Q {
  using value_type = Rational;
  [[nodiscard]] static value_type zero() { return {}; }
  [[nodiscard]] static value_type one() { return Rational(1); }
  [[nodiscard]] static bool is_zero(const value_type& a) { return a.is_zero(); }
  [[nodiscard]] static value_type add(const value_type& a, const value_type& b) { return a + b; }
  [[nodiscard]] static value_type sub(const value_type& a, const value_type& b) { return a - b; }
  [[nodiscard]] static value_type mul(const value_type& a, const value_type& b) { return a * b; }
  [[nodiscard]] static value_type neg(const value_type& a) { return -a; }
  [[nodiscard]] static value_type inv(const value_type& a) {
    if (a.is_zero()) throw FieldError("Q: inverse of zero");
    return a.inverse();
  }
  [[nodiscard]] static value_type from_int(std::int64_t v) { return Rational(v); }
  [[nodiscard]] static value_type from_rational(const Rational& r) { return r; }
  [[nodiscard]] static Rational to_rational(const value_type& a) { return a; }
  [[nodiscard]] static Field descriptor() { return Field::rationals(); }
};

}  // namespace fields

// Calls fn with the arithmetic policy matching the descriptor.
template <class Fn>
decltype(auto) visit_field(const Field& field, Fn&& fn) {
  switch (field.kind) {
    case Field::Kind::gf2:
      return fn(fields::Gf2{});
    case Field::Kind::gfp:
      return fn(fields::Gfp{field.characteristic});
    case Field::Kind::rational:
      break;
  }
  return fn(fields::Q{});
}

}  // namespace khss
