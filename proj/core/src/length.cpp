#include "coarse/length.hpp"

#include <array>
#include <cmath>
#include <optional>
#include <stdexcept>

namespace coarse {
namespace {

std::optional<Rational> exact_root(const Rational& square) {
  const std::int64_t n = isqrt(square.num());
  const std::int64_t d = isqrt(square.den());
  if (n * n != square.num() || d * d != square.den()) return std::nullopt;
  return Rational(n, d);
}

// A signed square-root term s * sqrt(q) with q >= 0.
struct Term {
  int sign;
  Rational square;
};

Term as_term(const Length& l, int orientation) {
  const int s = l.sign() * orientation;
  return {s, l.square()};
}

// Compares sqrt(a) + sqrt(b) against sqrt(c) exactly (all squares >= 0).
std::strong_ordering compare_two_roots_vs_one(const Rational& a, const Rational& b, const Rational& c) {
  // sqrt(a) + sqrt(b) vs sqrt(c)  <=>  a + b + 2 sqrt(ab) vs c.
  const Rational gap = c - a - b;
  if (gap.sign() < 0) return std::strong_ordering::greater;
  // 2 sqrt(ab) vs gap, both sides non-negative.
  const Rational lhs = Rational(4) * a * b;
  const Rational rhs = gap * gap;
  return lhs <=> rhs;
}

// Sign of a sum of at most three signed root terms.
int sign_of_sum(std::array<Term, 3> terms) {
  std::array<Rational, 3> pos{};
  std::array<Rational, 3> neg{};
  std::size_t np = 0;
  std::size_t nn = 0;
  for (const auto& t : terms) {
    if (t.sign > 0) pos[np++] = t.square;
    if (t.sign < 0) neg[nn++] = t.square;
  }
  if (nn == 0) return np == 0 ? 0 : 1;
  if (np == 0) return -1;
  if (np == 1 && nn == 1) {
    const auto c = pos[0] <=> neg[0];
    return c > 0 ? 1 : (c < 0 ? -1 : 0);
  }
  if (np == 2) {
    const auto c = compare_two_roots_vs_one(pos[0], pos[1], neg[0]);
    return c > 0 ? 1 : (c < 0 ? -1 : 0);
  }
  const auto c = compare_two_roots_vs_one(neg[0], neg[1], pos[0]);
  return c > 0 ? -1 : (c < 0 ? 1 : 0);
}

}  // namespace

Length Length::sqrt_of(const Rational& square) {
  if (square.sign() < 0) throw std::domain_error("length: square root of a negative value");
  Length l;
  l.value_ = square;
  l.root_ = true;
  return l;
}

bool Length::is_rational() const { return !root_ || exact_root(value_).has_value(); }

Rational Length::rational() const {
  if (!root_) return value_;
  if (auto r = exact_root(value_)) return *r;
  throw std::domain_error("length: sqrt(" + value_.to_string() + ") is irrational");
}

std::int64_t Length::floor_div(const Rational& divisor) const {
  if (divisor.sign() <= 0) throw std::domain_error("length: non-positive divisor");
  if (!root_) return (value_ / divisor).floor();
  // floor(sqrt(q) / w) = floor(sqrt(q / w^2)) = isqrt(floor(q / w^2)).
  return isqrt((value_ / (divisor * divisor)).floor());
}

double Length::to_double() const { return root_ ? std::sqrt(value_.to_double()) : value_.to_double(); }

std::string Length::to_string() const {
  if (!root_) return value_.to_string();
  if (auto r = exact_root(value_)) return r->to_string();
  return "sqrt(" + value_.to_string() + ")";
}

Length Length::parse(const std::string& text) {
  constexpr std::string_view kPrefix = "sqrt(";
  if (text.rfind(kPrefix, 0) == 0 && !text.empty() && text.back() == ')') {
    return sqrt_of(Rational::parse(std::string_view(text).substr(kPrefix.size(), text.size() - kPrefix.size() - 1)));
  }
  return Length(Rational::parse(text));
}

Rational rational_upper(const Length& l) {
  if (l.is_rational()) return l.rational();
  return Rational(l.floor_div(Rational(1)) + 1);
}

Length operator+(const Length& a, const Length& b) {
  if (a.sign() == 0) return b;
  if (b.sign() == 0) return a;
  return Length(a.rational() + b.rational());
}

Length operator*(const Length& a, const Rational& k) {
  if (!a.root_) return Length(a.value_ * k);
  if (k.sign() < 0) throw std::domain_error("length: negative scaling of a root");
  return Length::sqrt_of(a.value_ * k * k);
}

std::strong_ordering operator<=>(const Length& a, const Length& b) {
  if (!a.root_ && !b.root_) return a.value_ <=> b.value_;
  const int s = sign_of_sum({as_term(a, 1), as_term(b, -1), Term{0, Rational{}}});
  if (s > 0) return std::strong_ordering::greater;
  if (s < 0) return std::strong_ordering::less;
  return std::strong_ordering::equal;
}

bool sum_at_least(const Length& a, const Length& b, const Length& c) {
  if (!a.is_root_form() && !b.is_root_form() && !c.is_root_form()) {
    return a.rational() + b.rational() >= c.rational();
  }
  return sign_of_sum({as_term(a, 1), as_term(b, 1), as_term(c, -1)}) >= 0;
}

}  // namespace coarse
