#include "coarse/scale_sequence.hpp"

#include "coarse/error.hpp"

namespace coarse {

ScaleSequence::ScaleSequence(std::vector<Rational> prefix, Extension extension, Rational parameter)
    : prefix_(std::move(prefix)), extension_(extension), parameter_(parameter) {
  if (prefix_.empty()) throw InputError("scales: the prefix must not be empty");
  if (prefix_.front().sign() < 0) throw InputError("scales: scales must be non-negative");
  for (std::size_t i = 1; i < prefix_.size(); ++i) {
    if (prefix_[i] < prefix_[i - 1]) {
      throw InputError("scales: prefix decreases at position " + std::to_string(i + 1));
    }
  }
  if (extension_ == Extension::arithmetic && parameter_.sign() < 0) throw InputError("scales: negative step");
  if (extension_ == Extension::geometric && parameter_ < Rational(1)) throw InputError("scales: factor below 1");
}

ScaleSequence ScaleSequence::from_function(std::function<Rational(std::size_t)> fn, std::string description) {
  ScaleSequence s;
  s.fn_ = std::move(fn);
  s.description_ = std::move(description);
  return s;
}

Rational ScaleSequence::at(std::size_t k) const {
  if (k == 0) throw std::out_of_range("scales are indexed from 1");
  std::size_t seen = counter_->load();
  while (seen < k && !counter_->compare_exchange_weak(seen, k)) {
  }
  if (fn_) return fn_(k);
  if (k <= prefix_.size()) return prefix_[k - 1];
  const Rational& last = prefix_.back();
  const auto extra = static_cast<std::int64_t>(k - prefix_.size());
  switch (extension_) {
    case Extension::repeat_last:
      return last;
    case Extension::arithmetic:
      return last + parameter_ * Rational(extra);
    case Extension::geometric: {
      Rational r = last;
      for (std::int64_t i = 0; i < extra; ++i) r *= parameter_;
      return r;
    }
  }
  return last;
}

std::vector<Rational> ScaleSequence::first(std::size_t n) const {
  std::vector<Rational> out;
  out.reserve(n);
  for (std::size_t k = 1; k <= n; ++k) out.push_back(at(k));
  return out;
}

ScaleSequence ScaleSequence::fresh() const {
  ScaleSequence copy = *this;
  copy.counter_ = std::make_shared<std::atomic<std::size_t>>(0);
  return copy;
}

std::string ScaleSequence::describe() const {
  if (fn_) return description_;
  std::string out = "(";
  for (std::size_t i = 0; i < prefix_.size(); ++i) out += (i ? "," : "") + prefix_[i].to_string();
  return out + "; " + extension_name(extension_, parameter_) + ")";
}

ScaleSequence::Extension parse_extension(const std::string& text, Rational& parameter) {
  if (text.empty() || text == "repeat") {
    parameter = 0;
    return ScaleSequence::Extension::repeat_last;
  }
  const auto colon = text.find(':');
  const std::string kind = text.substr(0, colon);
  if (colon == std::string::npos) throw InputError("extension '" + text + "' needs a parameter");
  try {
    parameter = Rational::parse(text.substr(colon + 1));
  } catch (const std::exception& e) {
    throw InputError("extension '" + text + "': " + e.what());
  }
  if (kind == "arith") return ScaleSequence::Extension::arithmetic;
  if (kind == "geom") return ScaleSequence::Extension::geometric;
  throw InputError("unknown extension rule '" + kind + "'");
}

std::string extension_name(ScaleSequence::Extension extension, const Rational& parameter) {
  switch (extension) {
    case ScaleSequence::Extension::repeat_last:
      return "repeat";
    case ScaleSequence::Extension::arithmetic:
      return "arith:" + parameter.to_string();
    case ScaleSequence::Extension::geometric:
      return "geom:" + parameter.to_string();
  }
  return "repeat";
}

}  // namespace coarse
