#include "khss/rational.hpp"

#include <limits>
#include <numeric>
#include <ostream>
#include <stdexcept>

namespace khss {
namespace {

using i128 = __int128;

constexpr i128 kMax = std::numeric_limits<std::int64_t>::max();
constexpr i128 kMin = std::numeric_limits<std::int64_t>::min();

bool fits(i128 v) { return v <= kMax && v > kMin; }

i128 gcd128(i128 a, i128 b) {
  if (a < 0) a = -a;
  if (b < 0) b = -b;
  while (b != 0) {
    i128 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

mpz_class to_mpz(i128 v) {
  const bool neg = v < 0;
  unsigned __int128 u = neg ? static_cast<unsigned __int128>(-(v + 1)) + 1 : static_cast<unsigned __int128>(v);
  mpz_class hi(static_cast<unsigned long>(static_cast<std::uint64_t>(u >> 64)));
  mpz_class lo(static_cast<unsigned long>(static_cast<std::uint64_t>(u)));
  mpz_class r = (hi << 64) + lo;
  return neg ? mpz_class(-r) : r;
}

}  // namespace

Rational::Rational(std::int64_t num, std::int64_t den) {
  if (den == 0) throw std::domain_error("Rational: zero denominator");
  i128 n = num;
  i128 d = den;
  if (d < 0) {
    n = -n;
    d = -d;
  }
  const i128 g = gcd128(n, d);
  if (g > 1) {
    n /= g;
    d /= g;
  }
  if (fits(n) && fits(d)) {
    num_ = static_cast<std::int64_t>(n);
    den_ = static_cast<std::int64_t>(d);
  } else {
    set_big(mpq_class(to_mpz(n), to_mpz(d)));
  }
}

Rational::Rational(const mpq_class& value) { set_big(value); }

Rational::Rational(const Rational& other) : num_(other.num_), den_(other.den_) {
  if (other.big_) big_ = std::make_unique<mpq_class>(*other.big_);
}

Rational& Rational::operator=(const Rational& other) {
  if (this == &other) return *this;
  num_ = other.num_;
  den_ = other.den_;
  if (other.big_) {
    big_ = std::make_unique<mpq_class>(*other.big_);
  } else {
    big_.reset();
  }
  return *this;
}

Rational Rational::parse(std::string_view text) {
  mpq_class q;
  if (q.set_str(std::string(text), 10) != 0) {
    throw std::invalid_argument("Rational: cannot parse '" + std::string(text) + "'");
  }
  q.canonicalize();
  return Rational(q);
}

void Rational::set_big(mpq_class value) {
  value.canonicalize();
  big_ = std::make_unique<mpq_class>(std::move(value));
  normalize_big();
}

void Rational::normalize_big() {
  if (!big_) return;
  const mpz_class& n = big_->get_num();
  const mpz_class& d = big_->get_den();
  if (n.fits_slong_p() && d.fits_slong_p()) {
    num_ = n.get_si();
    den_ = d.get_si();
    if (num_ != std::numeric_limits<std::int64_t>::min()) {
      big_.reset();
      return;
    }
  }
}

bool Rational::is_integer() const { return big_ ? big_->get_den() == 1 : den_ == 1; }

int Rational::sign() const {
  if (big_) return sgn(*big_);
  return (num_ > 0) - (num_ < 0);
}

mpq_class Rational::to_mpq() const {
  if (big_) return *big_;
  mpq_class q(mpz_class(static_cast<long>(num_)), mpz_class(static_cast<long>(den_)));
  return q;
}

mpz_class Rational::numerator() const { return big_ ? big_->get_num() : mpz_class(static_cast<long>(num_)); }

mpz_class Rational::denominator() const { return big_ ? big_->get_den() : mpz_class(static_cast<long>(den_)); }

std::string Rational::to_string() const {
  if (big_) return big_->get_str();
  if (den_ == 1) return std::to_string(num_);
  return std::to_string(num_) + "/" + std::to_string(den_);
}

std::uint32_t Rational::mod(std::uint32_t p) const {
  mpz_class n = numerator() % p;
  if (n < 0) n += p;
  mpz_class d = denominator() % p;
  if (d == 0) throw std::domain_error("Rational: denominator vanishes mod " + std::to_string(p));
  mpz_class inv;
  mpz_invert(inv.get_mpz_t(), d.get_mpz_t(), mpz_class(p).get_mpz_t());
  mpz_class r = (n * inv) % p;
  return static_cast<std::uint32_t>(r.get_ui());
}

Rational Rational::operator-() const {
  Rational r;
  if (big_) {
    r.set_big(-*big_);
  } else if (num_ == std::numeric_limits<std::int64_t>::min()) {
    r.set_big(-to_mpq());
  } else {
    r.num_ = -num_;
    r.den_ = den_;
  }
  return r;
}

Rational& Rational::operator+=(const Rational& rhs) {
  if (!big_ && !rhs.big_) {
    if (den_ == 1 && rhs.den_ == 1) {
      const i128 s = static_cast<i128>(num_) + rhs.num_;
      if (fits(s)) {
        num_ = static_cast<std::int64_t>(s);
        return *this;
      }
    }
    const i128 n = static_cast<i128>(num_) * rhs.den_ + static_cast<i128>(rhs.num_) * den_;
    const i128 d = static_cast<i128>(den_) * rhs.den_;
    const i128 g = gcd128(n, d);
    const i128 rn = g > 1 ? n / g : n;
    const i128 rd = g > 1 ? d / g : d;
    if (fits(rn) && fits(rd)) {
      num_ = static_cast<std::int64_t>(rn);
      den_ = static_cast<std::int64_t>(rd);
      return *this;
    }
    set_big(mpq_class(to_mpz(rn), to_mpz(rd)));
    return *this;
  }
  set_big(to_mpq() + rhs.to_mpq());
  return *this;
}

Rational& Rational::operator-=(const Rational& rhs) { return *this += -rhs; }

Rational& Rational::operator*=(const Rational& rhs) {
  if (!big_ && !rhs.big_) {
    const i128 n = static_cast<i128>(num_) * rhs.num_;
    const i128 d = static_cast<i128>(den_) * rhs.den_;
    if (d == 1 && fits(n)) {
      num_ = static_cast<std::int64_t>(n);
      den_ = 1;
      return *this;
    }
    const i128 g = gcd128(n, d);
    const i128 rn = g > 1 ? n / g : n;
    const i128 rd = g > 1 ? d / g : d;
    if (fits(rn) && fits(rd)) {
      num_ = static_cast<std::int64_t>(rn);
      den_ = static_cast<std::int64_t>(rd);
      return *this;
    }
    set_big(mpq_class(to_mpz(rn), to_mpz(rd)));
    return *this;
  }
  set_big(to_mpq() * rhs.to_mpq());
  return *this;
}

Rational Rational::inverse() const {
  if (is_zero()) throw std::domain_error("Rational: inverse of zero");
  if (!big_) return Rational(den_, num_);
  return Rational(mpq_class(1) / *big_);
}

Rational& Rational::operator/=(const Rational& rhs) { return *this *= rhs.inverse(); }

bool operator==(const Rational& a, const Rational& b) {
  if (!a.big_ && !b.big_) return a.num_ == b.num_ && a.den_ == b.den_;
  return a.to_mpq() == b.to_mpq();
}

std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
  if (!a.big_ && !b.big_) {
    const i128 l = static_cast<i128>(a.num_) * b.den_;
    const i128 r = static_cast<i128>(b.num_) * a.den_;
    return l <=> r;
  }
  const int c = cmp(a.to_mpq(), b.to_mpq());
  return c <=> 0;
}

std::ostream& operator<<(std::ostream& os, const Rational& value) { return os << value.to_string(); }

}  // namespace khss
