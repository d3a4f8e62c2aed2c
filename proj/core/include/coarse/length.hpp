#pragma once

#include <compare>
#include <string>

#include "coarse/rational.hpp"

namespace coarse {

/// An exact distance value.
///
/// A Length is either a rational number or the square root of a
/// non-negative rational. The second form appears in l2 product metrics;
/// comparisons between any two forms are exact (they go through squares),
/// so disjointness and mesh checks never round. Addition is only defined
/// when both operands are rational (or one is zero).
class Length {
 public:
  constexpr Length() = default;
  Length(Rational value) : value_(value) {}  // NOLINT(implicit)
  Length(std::int64_t value) : value_(value) {}  // NOLINT(implicit)

  /// sqrt(square); square must be non-negative.
  static Length sqrt_of(const Rational& square);

  [[nodiscard]] bool is_root_form() const { return root_; }

  /// True if the value is rational (roots of perfect squares count).
  [[nodiscard]] bool is_rational() const;

  /// The rational value; throws std::domain_error for irrational roots.
  [[nodiscard]] Rational rational() const;

  /// The square of the value (sign is lost for negative rationals).
  [[nodiscard]] Rational square() const { return root_ ? value_ : value_ * value_; }

  [[nodiscard]] int sign() const { return value_.sign(); }

  /// floor(value / divisor) for a positive rational divisor.
  [[nodiscard]] std::int64_t floor_div(const Rational& divisor) const;

  [[nodiscard]] double to_double() const;

  /// "p", "p/q", or "sqrt(p/q)".
  [[nodiscard]] std::string to_string() const;
  static Length parse(const std::string& text);

  friend Length operator+(const Length& a, const Length& b);
  friend Length operator*(const Length& a, const Rational& k);

  friend bool operator==(const Length& a, const Length& b) { return (a <=> b) == 0; }
  friend std::strong_ordering operator<=>(const Length& a, const Length& b);

 private:
  Rational value_{};
  bool root_ = false;
};

[[nodiscard]] inline Length max(const Length& a, const Length& b) { return a < b ? b : a; }
[[nodiscard]] inline Length min(const Length& a, const Length& b) { return b < a ? b : a; }

/// The length itself when rational, otherwise floor + 1.
[[nodiscard]] Rational rational_upper(const Length& l);

/// Exact test of a + b >= c for arbitrary Length values.
[[nodiscard]] bool sum_at_least(const Length& a, const Length& b, const Length& c);

}  // namespace coarse
