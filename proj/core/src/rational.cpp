#include "coarse/rational.hpp"

#include <cctype>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace coarse {
namespace {

using wide = detail::int128;

constexpr wide kMax = std::numeric_limits<std::int64_t>::max();
constexpr wide kMin = std::numeric_limits<std::int64_t>::min();

wide wide_abs(wide v) { return v < 0 ? -v : v; }

wide wide_gcd(wide a, wide b) {
  a = wide_abs(a);
  b = wide_abs(b);
  while (b != 0) {
    const wide t = a % b;
    a = b;
    b = t;
  }
  return a;
}

// Multiplication that must stay inside 128 bits; operands come from int64 products.
wide checked_mul(wide a, wide b) {
  if (a == 0 || b == 0) return 0;
  constexpr wide kWideMax = (static_cast<wide>(1) << 126);
  if (wide_abs(a) > kWideMax / wide_abs(b)) throw std::overflow_error("rational: intermediate overflow");
  return a * b;
}

}  // namespace

Rational::Rational(std::int64_t numerator, std::int64_t denominator) {
  if (denominator == 0) throw std::domain_error("rational: zero denominator");
  *this = from_wide(numerator, denominator);
}

Rational Rational::from_wide(wide numerator, wide denominator) {
  if (denominator == 0) throw std::domain_error("rational: zero denominator");
  if (denominator < 0) {
    numerator = -numerator;
    denominator = -denominator;
  }
  const wide g = wide_gcd(numerator, denominator);
  if (g > 1) {
    numerator /= g;
    denominator /= g;
  }
  if (numerator > kMax || numerator < kMin || denominator > kMax) {
    throw std::overflow_error("rational: value does not fit in 64 bits");
  }
  Rational r;
  r.num_ = static_cast<std::int64_t>(numerator);
  r.den_ = static_cast<std::int64_t>(denominator);
  return r;
}

std::int64_t Rational::floor() const {
  std::int64_t q = num_ / den_;
  if ((num_ % den_ != 0) && (num_ < 0)) --q;
  return q;
}

std::int64_t Rational::ceil() const {
  std::int64_t q = num_ / den_;
  if ((num_ % den_ != 0) && (num_ > 0)) ++q;
  return q;
}

double Rational::to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }

std::string Rational::to_string() const {
  if (den_ == 1) return std::to_string(num_);
  return std::to_string(num_) + "/" + std::to_string(den_);
}

Rational Rational::operator-() const {
  if (num_ == std::numeric_limits<std::int64_t>::min()) throw std::overflow_error("rational: negation overflow");
  Rational r = *this;
  r.num_ = -num_;
  return r;
}

Rational& Rational::operator+=(const Rational& other) {
  if (den_ == 1 && other.den_ == 1) {
    return *this = from_wide(static_cast<wide>(num_) + other.num_, 1);
  }
  const wide n = static_cast<wide>(num_) * other.den_ + static_cast<wide>(other.num_) * den_;
  const wide d = static_cast<wide>(den_) * other.den_;
  return *this = from_wide(n, d);
}

Rational& Rational::operator-=(const Rational& other) { return *this += -other; }

Rational& Rational::operator*=(const Rational& other) {
  if (den_ == 1 && other.den_ == 1) {
    return *this = from_wide(static_cast<wide>(num_) * other.num_, 1);
  }
  return *this = from_wide(static_cast<wide>(num_) * other.num_, static_cast<wide>(den_) * other.den_);
}

Rational& Rational::operator/=(const Rational& other) {
  if (other.num_ == 0) throw std::domain_error("rational: division by zero");
  return *this = from_wide(static_cast<wide>(num_) * other.den_, static_cast<wide>(den_) * other.num_);
}

std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
  if (a.den_ == b.den_) return a.num_ <=> b.num_;
  const wide lhs = checked_mul(a.num_, b.den_);
  const wide rhs = checked_mul(b.num_, a.den_);
  if (lhs < rhs) return std::strong_ordering::less;
  if (lhs > rhs) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

Rational Rational::parse(std::string_view text) {
  auto fail = [&]() -> Rational {
    throw std::invalid_argument("rational: cannot parse '" + std::string(text) + "'");
  };
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);
  if (text.empty()) return fail();

  if (const auto slash = text.find('/'); slash != std::string_view::npos) {
    const Rational p = parse(text.substr(0, slash));
    const Rational q = parse(text.substr(slash + 1));
    if (q.is_zero()) return fail();
    return p / q;
  }

  bool negative = false;
  std::size_t pos = 0;
  if (text[pos] == '+' || text[pos] == '-') {
    negative = text[pos] == '-';
    ++pos;
  }
  wide mantissa = 0;
  int scale = 0;
  bool any_digit = false;
  bool after_point = false;
  for (; pos < text.size(); ++pos) {
    const char c = text[pos];
    if (c == '.') {
      if (after_point) return fail();
      after_point = true;
      continue;
    }
    if (c == 'e' || c == 'E') break;
    if (!std::isdigit(static_cast<unsigned char>(c))) return fail();
    any_digit = true;
    mantissa = mantissa * 10 + (c - '0');
    if (mantissa > (static_cast<wide>(1) << 100)) throw std::overflow_error("rational: literal too long");
    if (after_point) --scale;
  }
  if (!any_digit) return fail();
  if (pos < text.size()) {
    ++pos;  // skip exponent marker
    if (pos >= text.size()) return fail();
    bool exp_negative = false;
    if (text[pos] == '+' || text[pos] == '-') {
      exp_negative = text[pos] == '-';
      ++pos;
    }
    if (pos >= text.size()) return fail();
    int exponent = 0;
    for (; pos < text.size(); ++pos) {
      if (!std::isdigit(static_cast<unsigned char>(text[pos]))) return fail();
      exponent = exponent * 10 + (text[pos] - '0');
      if (exponent > 40) throw std::overflow_error("rational: exponent too large");
    }
    scale += exp_negative ? -exponent : exponent;
  }
  wide numerator = negative ? -mantissa : mantissa;
  wide denominator = 1;
  for (; scale > 0; --scale) numerator = checked_mul(numerator, 10);
  for (; scale < 0; ++scale) denominator = checked_mul(denominator, 10);
  return from_wide(numerator, denominator);
}

std::int64_t isqrt(std::int64_t value) {
  if (value < 0) throw std::domain_error("isqrt: negative argument");
  auto r = static_cast<std::int64_t>(std::sqrt(static_cast<long double>(value)));
  while (r > 0 && static_cast<wide>(r) * r > value) --r;
  while (static_cast<wide>(r + 1) * (r + 1) <= value) ++r;
  return r;
}

}  // namespace coarse
