#include "coarse/generators.hpp"

#include <algorithm>
#include <limits>
#include <random>
#include <string>

#include "coarse/error.hpp"

namespace coarse {
namespace {

void check_cap(std::size_t n, std::size_t cap, const char* what) {
  if (n > cap) {
    throw InputError(std::string(what) + ": " + std::to_string(n) + " points exceed the cap of " + std::to_string(cap));
  }
}

std::int64_t abs_diff(std::int64_t a, std::int64_t b) { return a < b ? b - a : a - b; }

}  // namespace

SpacePtr interval_space(std::int64_t lo, std::int64_t hi, std::size_t cap) {
  if (hi < lo) throw InputError("interval: hi < lo");
  const auto n = static_cast<std::uint64_t>(hi - lo) + 1;
  check_cap(n, cap, "interval");
  std::vector<std::string> labels;
  labels.reserve(n);
  for (std::int64_t v = lo; v <= hi; ++v) labels.push_back(std::to_string(v));
  auto space = make_space(std::move(labels), [](PointIndex p, PointIndex q) {
    return Length(abs_diff(p, q));
  });
  std::const_pointer_cast<FiniteMetricSpace>(space)->set_generator(
      R"({"type":"interval","lo":)" + std::to_string(lo) + R"(,"hi":)" + std::to_string(hi) + "}");
  return space;
}

SpacePtr grid_space(const std::vector<std::int64_t>& extents, std::size_t cap) {
  if (extents.empty()) throw InputError("grid: no dimensions");
  std::uint64_t n = 1;
  for (auto e : extents) {
    if (e <= 0) throw InputError("grid: extents must be positive");
    if (n > cap / static_cast<std::uint64_t>(e) + 1) check_cap(cap + 1, cap, "grid");
    n *= static_cast<std::uint64_t>(e);
  }
  check_cap(n, cap, "grid");
  const std::size_t d = extents.size();
  auto coords = std::make_shared<std::vector<std::int64_t>>(n * d);
  std::vector<std::string> labels;
  labels.reserve(n);
  std::vector<std::int64_t> c(d, 0);
  for (std::uint64_t i = 0; i < n; ++i) {
    std::string label = "(";
    for (std::size_t k = 0; k < d; ++k) {
      (*coords)[i * d + k] = c[k];
      if (k) label += ",";
      label += std::to_string(c[k]);
    }
    labels.push_back(label + ")");
    for (std::size_t k = d; k-- > 0;) {
      if (++c[k] < extents[k]) break;
      c[k] = 0;
    }
  }
  auto space = make_space(std::move(labels), [coords, d](PointIndex p, PointIndex q) {
    std::int64_t sum = 0;
    for (std::size_t k = 0; k < d; ++k) sum += abs_diff((*coords)[p * d + k], (*coords)[q * d + k]);
    return Length(sum);
  });
  std::string spec = R"({"type":"grid","extents":[)";
  for (std::size_t k = 0; k < d; ++k) spec += (k ? "," : "") + std::to_string(extents[k]);
  std::const_pointer_cast<FiniteMetricSpace>(space)->set_generator(spec + "]}");
  return space;
}

SpacePtr path_space(std::size_t n, const Rational& spacing, std::size_t cap) {
  check_cap(n, cap, "path");
  if (spacing.sign() <= 0) throw InputError("path: spacing must be positive");
  std::vector<std::string> labels;
  labels.reserve(n);
  for (std::size_t i = 0; i < n; ++i) labels.push_back(std::to_string(i));
  auto space = make_space(std::move(labels), [spacing](PointIndex p, PointIndex q) {
    return Length(Rational(abs_diff(p, q)) * spacing);
  });
  std::const_pointer_cast<FiniteMetricSpace>(space)->set_generator(
      R"({"type":"path","n":)" + std::to_string(n) + R"(,"spacing":")" + spacing.to_string() + "\"}");
  return space;
}

SpacePtr cycle_space(std::size_t n, std::size_t cap) {
  check_cap(n, cap, "cycle");
  std::vector<std::string> labels;
  labels.reserve(n);
  for (std::size_t i = 0; i < n; ++i) labels.push_back(std::to_string(i));
  const auto len = static_cast<std::int64_t>(n);
  auto space = make_space(std::move(labels), [len](PointIndex p, PointIndex q) {
    const std::int64_t d = abs_diff(p, q);
    return Length(std::min(d, len - d));
  });
  std::const_pointer_cast<FiniteMetricSpace>(space)->set_generator(R"({"type":"cycle","n":)" + std::to_string(n) + "}");
  return space;
}

SpacePtr star_space(std::size_t leaves, std::size_t cap) {
  check_cap(leaves + 1, cap, "star");
  std::vector<std::string> labels{"c"};
  for (std::size_t i = 1; i <= leaves; ++i) labels.push_back("l" + std::to_string(i));
  auto space = make_space(
      std::move(labels),
      [](PointIndex p, PointIndex q) {
        if (p == q) return Length(0);
        return Length(p == 0 || q == 0 ? 1 : 2);
      },
      PointIndex{0});
  std::const_pointer_cast<FiniteMetricSpace>(space)->set_generator(R"({"type":"star","leaves":)" + std::to_string(leaves) + "}");
  return space;
}

SpacePtr hypercube_union(int max_n, std::size_t cap) {
  if (max_n < 0) throw InputError("hypercube_union: negative size");
  if (max_n > 24) check_cap(cap + 1, cap, "hypercube_union");
  std::uint64_t total = 0;
  for (int n = 1; n <= max_n; ++n) total += std::uint64_t{1} << n;
  check_cap(total, cap, "hypercube_union");
  struct Point {
    int cube;
    std::uint32_t bits;
  };
  auto points = std::make_shared<std::vector<Point>>();
  std::vector<std::string> labels;
  for (int n = 1; n <= max_n; ++n) {
    for (std::uint32_t b = 0; b < (1u << n); ++b) {
      points->push_back({n, b});
      std::string bits;
      for (int k = n - 1; k >= 0; --k) bits += ((b >> k) & 1u) ? '1' : '0';
      labels.push_back(std::to_string(n) + ":" + bits);
    }
  }
  auto space = make_space(std::move(labels), [points](PointIndex p, PointIndex q) {
    const Point& x = (*points)[p];
    const Point& y = (*points)[q];
    if (x.cube == y.cube) return Length(std::int64_t{__builtin_popcount(x.bits ^ y.bits)});
    const std::int64_t gap = abs_diff(std::int64_t{x.cube} * x.cube, std::int64_t{y.cube} * y.cube);
    return Length(std::int64_t{__builtin_popcount(x.bits)} + __builtin_popcount(y.bits) + gap);
  });
  std::const_pointer_cast<FiniteMetricSpace>(space)->set_generator(R"({"type":"hypercube_union","n":)" + std::to_string(max_n) + "}");
  return space;
}

int hypercube_of(const FiniteMetricSpace& space, PointIndex p) {
  const std::string& label = space.label(p);
  return std::stoi(label.substr(0, label.find(':')));
}

SpacePtr random_graph_space(std::size_t n, std::uint64_t seed, int max_weight, double edge_probability) {
  constexpr std::int64_t kInf = std::numeric_limits<std::int64_t>::max() / 4;
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> weight(1, max_weight);
  std::bernoulli_distribution edge(edge_probability);
  std::vector<std::int64_t> d(n * n, kInf);
  for (std::size_t i = 0; i < n; ++i) d[i * n + i] = 0;
  auto connect = [&](std::size_t i, std::size_t j) {
    const std::int64_t w = weight(rng);
    d[i * n + j] = std::min(d[i * n + j], w);
    d[j * n + i] = d[i * n + j];
  };
  // A random spanning tree keeps the graph connected.
  for (std::size_t i = 1; i < n; ++i) connect(i, std::uniform_int_distribution<std::size_t>(0, i - 1)(rng));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (edge(rng)) connect(i, j);
    }
  }
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) d[i * n + j] = std::min(d[i * n + j], d[i * n + k] + d[k * n + j]);
    }
  }
  std::vector<std::string> labels;
  std::vector<std::vector<Length>> rows(n, std::vector<Length>(n));
  for (std::size_t i = 0; i < n; ++i) {
    labels.push_back("p" + std::to_string(i));
    for (std::size_t j = 0; j < n; ++j) rows[i][j] = Length(d[i * n + j]);
  }
  return matrix_space(std::move(labels), std::move(rows));
}

}  // namespace coarse
