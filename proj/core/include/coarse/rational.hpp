#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <string>
#include <string_view>

namespace coarse {

namespace detail {
__extension__ typedef __int128 int128;
}  // namespace detail

/// Exact rational number over 64-bit integers.
///
/// Always stored in lowest terms with a positive denominator. Every
/// operation computes in 128-bit intermediates and throws
/// std::overflow_error if the reduced result does not fit.
class Rational {
 public:
  constexpr Rational() = default;
  constexpr Rational(std::int64_t value) : num_(value) {}  // NOLINT(implicit)
  Rational(std::int64_t numerator, std::int64_t denominator);

  [[nodiscard]] constexpr std::int64_t num() const { return num_; }
  [[nodiscard]] constexpr std::int64_t den() const { return den_; }

  [[nodiscard]] constexpr bool is_integer() const { return den_ == 1; }
  [[nodiscard]] constexpr bool is_zero() const { return num_ == 0; }
  [[nodiscard]] constexpr int sign() const { return (num_ > 0) - (num_ < 0); }

  [[nodiscard]] std::int64_t floor() const;
  [[nodiscard]] std::int64_t ceil() const;
  [[nodiscard]] Rational abs() const { return num_ < 0 ? -*this : *this; }
  [[nodiscard]] double to_double() const;

  /// "p" for integers, "p/q" otherwise.
  [[nodiscard]] std::string to_string() const;

  /// Accepts "p", "p/q" and finite decimals such as "-1.25" or "3e-2".
  static Rational parse(std::string_view text);

  Rational operator-() const;
  Rational& operator+=(const Rational& other);
  Rational& operator-=(const Rational& other);
  Rational& operator*=(const Rational& other);
  Rational& operator/=(const Rational& other);

  friend Rational operator+(Rational a, const Rational& b) { return a += b; }
  friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
  friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
  friend Rational operator/(Rational a, const Rational& b) { return a /= b; }

  friend bool operator==(const Rational& a, const Rational& b) = default;
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b);

 private:
  static Rational from_wide(detail::int128 numerator, detail::int128 denominator);

  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

[[nodiscard]] inline Rational min(const Rational& a, const Rational& b) { return b < a ? b : a; }
[[nodiscard]] inline Rational max(const Rational& a, const Rational& b) { return a < b ? b : a; }

/// Largest integer k with k*k <= value; value must be non-negative.
[[nodiscard]] std::int64_t isqrt(std::int64_t value);

}  // namespace coarse

template <>
struct std::hash<coarse::Rational> {
  std::size_t operator()(const coarse::Rational& r) const noexcept {
    return std::hash<std::int64_t>{}(r.num()) * 31u + std::hash<std::int64_t>{}(r.den());
  }
};
