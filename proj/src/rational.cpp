#include "rrk/rational.hpp"

#include <numeric>
#include <ostream>
#include <stdexcept>

namespace rrk {

namespace {

__extension__ typedef __int128 i128;

std::int64_t narrow(i128 v) {
  if (v > INT64_MAX || v < -static_cast<i128>(INT64_MAX)) throw std::overflow_error("rational overflow");
  return static_cast<std::int64_t>(v);
}

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

void reduce(i128& n, i128& d) {
  if (d == 0) throw std::domain_error("rational with zero denominator");
  if (d < 0) {
    n = -n;
    d = -d;
  }
  i128 g = gcd128(n, d);
  if (g > 1) {
    n /= g;
    d /= g;
  }
  if (n == 0) d = 1;
}

}  // namespace

Rational::Rational(std::int64_t n, std::int64_t d) {
  i128 nn = n, dd = d;
  reduce(nn, dd);
  num_ = narrow(nn);
  den_ = narrow(dd);
}

Rational Rational::operator-() const {
  Rational r;
  r.num_ = narrow(-static_cast<i128>(num_));
  r.den_ = den_;
  return r;
}

Rational& Rational::operator+=(const Rational& o) {
  i128 n = static_cast<i128>(num_) * o.den_ + static_cast<i128>(o.num_) * den_;
  i128 d = static_cast<i128>(den_) * o.den_;
  reduce(n, d);
  num_ = narrow(n);
  den_ = narrow(d);
  return *this;
}

Rational& Rational::operator-=(const Rational& o) { return *this += -o; }

Rational& Rational::operator*=(const Rational& o) {
  i128 n = static_cast<i128>(num_) * o.num_;
  i128 d = static_cast<i128>(den_) * o.den_;
  reduce(n, d);
  num_ = narrow(n);
  den_ = narrow(d);
  return *this;
}

Rational& Rational::operator/=(const Rational& o) {
  if (o.num_ == 0) throw std::domain_error("rational division by zero");
  i128 n = static_cast<i128>(num_) * o.den_;
  i128 d = static_cast<i128>(den_) * o.num_;
  reduce(n, d);
  num_ = narrow(n);
  den_ = narrow(d);
  return *this;
}

std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
  i128 l = static_cast<i128>(a.num_) * b.den_;
  i128 r = static_cast<i128>(b.num_) * a.den_;
  if (l < r) return std::strong_ordering::less;
  if (l > r) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

std::string Rational::str() const {
  if (den_ == 1) return std::to_string(num_);
  return std::to_string(num_) + "/" + std::to_string(den_);
}

Rational Rational::parse(const std::string& text) {
  auto slash = text.find('/');
  try {
    std::size_t used = 0;
    if (slash == std::string::npos) {
      std::int64_t n = std::stoll(text, &used);
      if (used != text.size()) throw std::invalid_argument(text);
      return Rational(n);
    }
    std::string ns = text.substr(0, slash), ds = text.substr(slash + 1);
    std::int64_t n = std::stoll(ns, &used);
    if (used != ns.size()) throw std::invalid_argument(text);
    std::int64_t d = std::stoll(ds, &used);
    if (used != ds.size()) throw std::invalid_argument(text);
    return Rational(n, d);
  } catch (const std::logic_error&) {
    throw std::invalid_argument("not a rational: '" + text + "'");
  }
}

Rational abs(const Rational& r) { return r.sign() < 0 ? -r : r; }

std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

}  // namespace rrk
