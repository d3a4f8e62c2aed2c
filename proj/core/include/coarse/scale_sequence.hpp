#pragma once

#include <atomic>
#include <cstddef>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "coarse/rational.hpp"

namespace coarse {

/// A non-decreasing stream of scales R_1, R_2, ... given by an explicit
/// prefix and a rule for the tail.
///
/// Indices are 1-based. Every copy of a sequence shares one read counter,
/// so consumed() reports the largest index any holder has asked for.
class ScaleSequence {
 public:
  enum class Extension { repeat_last, arithmetic, geometric };

  explicit ScaleSequence(std::vector<Rational> prefix, Extension extension = Extension::repeat_last,
                         Rational parameter = 0);

  /// A stream defined pointwise (used for columns and diagonals of another
  /// stream). The function must be non-decreasing in k.
  static ScaleSequence from_function(std::function<Rational(std::size_t)> fn, std::string description);

  /// R_k for k >= 1.
  [[nodiscard]] Rational at(std::size_t k) const;
  /// R_1 .. R_n.
  [[nodiscard]] std::vector<Rational> first(std::size_t n) const;

  [[nodiscard]] std::size_t consumed() const { return counter_->load(); }
  /// A copy with its own read counter.
  [[nodiscard]] ScaleSequence fresh() const;

  [[nodiscard]] const std::vector<Rational>& prefix() const { return prefix_; }
  [[nodiscard]] Extension extension() const { return extension_; }
  [[nodiscard]] const Rational& parameter() const { return parameter_; }
  [[nodiscard]] std::string describe() const;

 private:
  ScaleSequence() = default;

  std::vector<Rational> prefix_;
  Extension extension_ = Extension::repeat_last;
  Rational parameter_;
  std::function<Rational(std::size_t)> fn_;
  std::string description_;
  std::shared_ptr<std::atomic<std::size_t>> counter_ = std::make_shared<std::atomic<std::size_t>>(0);
};

/// Parses "repeat", "arith:<step>" or "geom:<factor>".
ScaleSequence::Extension parse_extension(const std::string& text, Rational& parameter);
std::string extension_name(ScaleSequence::Extension extension, const Rational& parameter);

}  // namespace coarse
