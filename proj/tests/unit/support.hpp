#pragma once

// Hand-rolled generators and brute-force oracles shared by the unit tests.
// The oracles deliberately avoid the library's own routines (union-find,
// component search, diameters) so that a bug there cannot hide itself.

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "coarse/metric_space.hpp"
#include "coarse/rational.hpp"
#include "coarse/tree.hpp"

namespace coarse::testing {

using Rng = std::mt19937_64;

/// Family from a braced list of sets (Family's own constructor is ambiguous
/// for one-element lists).
inline Family fam(std::vector<PointSet> sets) { return Family(std::move(sets)); }

inline Rational random_rational(Rng& rng, std::int64_t max_num = 40, std::int64_t max_den = 12) {
  std::uniform_int_distribution<std::int64_t> num(-max_num, max_num);
  std::uniform_int_distribution<std::int64_t> den(1, max_den);
  return Rational(num(rng), den(rng));
}

/// Shortest-path metric of a random connected weighted graph, computed by
/// Floyd-Warshall on plain integers.
inline std::vector<std::vector<std::int64_t>> random_graph_metric(Rng& rng, std::size_t n, int max_weight = 4) {
  const std::int64_t inf = 1'000'000;
  std::vector<std::vector<std::int64_t>> d(n, std::vector<std::int64_t>(n, inf));
  std::uniform_int_distribution<int> w(1, max_weight);
  std::bernoulli_distribution extra(0.3);
  for (std::size_t i = 0; i < n; ++i) d[i][i] = 0;
  for (std::size_t i = 1; i < n; ++i) {
    const std::size_t j = std::uniform_int_distribution<std::size_t>(0, i - 1)(rng);
    d[i][j] = d[j][i] = w(rng);
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (extra(rng)) d[i][j] = d[j][i] = std::min<std::int64_t>(d[i][j], w(rng));
    }
  }
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) d[i][j] = std::min(d[i][j], d[i][k] + d[k][j]);
    }
  }
  return d;
}

inline SpacePtr space_from_table(const std::vector<std::vector<std::int64_t>>& d) {
  std::vector<std::string> labels;
  std::vector<std::vector<Length>> rows;
  for (std::size_t i = 0; i < d.size(); ++i) {
    labels.push_back("p" + std::to_string(i));
    rows.emplace_back();
    for (auto v : d[i]) rows.back().push_back(Length(v));
  }
  return matrix_space(std::move(labels), std::move(rows));
}

/// Parent array of a random rooted tree (vertex 0 is the root).
inline std::vector<std::uint32_t> random_parents(Rng& rng, std::size_t n) {
  std::vector<std::uint32_t> parent(n, RootedTree::kNone);
  for (std::size_t v = 1; v < n; ++v) {
    // Mix shallow and deep attachment so that both bushy and path-like
    // trees show up.
    const std::size_t lo = (rng() % 3 == 0) ? v - 1 : 0;
    parent[v] = static_cast<std::uint32_t>(std::uniform_int_distribution<std::size_t>(lo, v - 1)(rng));
  }
  return parent;
}

inline RootedTree tree_from_parents(const std::vector<std::uint32_t>& parent) {
  std::vector<std::string> labels;
  for (std::size_t v = 0; v < parent.size(); ++v) labels.push_back("t" + std::to_string(v));
  return RootedTree(labels, parent);
}

/// Tree distances by walking parent pointers (no LCA tables).
inline std::int64_t naive_tree_distance(const std::vector<std::uint32_t>& parent, std::uint32_t u, std::uint32_t v) {
  std::vector<std::uint32_t> up;
  for (std::uint32_t x = u; x != RootedTree::kNone; x = parent[x]) up.push_back(x);
  std::int64_t steps_v = 0;
  for (std::uint32_t y = v; y != RootedTree::kNone; y = parent[y], ++steps_v) {
    const auto it = std::find(up.begin(), up.end(), y);
    if (it != up.end()) return steps_v + (it - up.begin());
  }
  return -1;
}

/// Max pairwise distance by a double loop.
inline Length naive_diameter(const FiniteMetricSpace& space, const PointSet& s) {
  Length best(0);
  for (PointIndex a : s) {
    for (PointIndex b : s) best = max(best, space.dist(a, b));
  }
  return best;
}

/// Chain-connected pieces at scale r by repeated flood fill on a boolean
/// adjacency matrix. Pieces are sorted by smallest member.
inline std::vector<PointSet> naive_components(const FiniteMetricSpace& space, const PointSet& s, const Rational& r) {
  std::vector<char> done(s.size(), 0);
  std::vector<PointSet> out;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (done[i]) continue;
    PointSet piece{s[i]};
    done[i] = 1;
    for (std::size_t head = 0; head < piece.size(); ++head) {
      for (std::size_t j = 0; j < s.size(); ++j) {
        if (!done[j] && space.dist(piece[head], s[j]) <= Length(r)) {
          done[j] = 1;
          piece.push_back(s[j]);
        }
      }
    }
    std::sort(piece.begin(), piece.end());
    out.push_back(piece);
  }
  std::sort(out.begin(), out.end());
  return out;
}

/// Every point appears in some member of some family.
inline bool naive_covers(std::size_t n, const std::vector<Family>& families) {
  std::vector<char> hit(n, 0);
  for (const auto& f : families) {
    for (const auto& s : f.sets) {
      for (PointIndex p : s) hit.at(p) = 1;
    }
  }
  return std::all_of(hit.begin(), hit.end(), [](char c) { return c != 0; });
}

/// Distinct members are more than r apart, pair by pair.
inline bool naive_disjoint(const FiniteMetricSpace& space, const Family& f, const Rational& r) {
  for (std::size_t i = 0; i < f.sets.size(); ++i) {
    for (std::size_t j = i + 1; j < f.sets.size(); ++j) {
      for (PointIndex a : f.sets[i]) {
        for (PointIndex b : f.sets[j]) {
          if (space.dist(a, b) <= Length(r)) return false;
        }
      }
    }
  }
  return true;
}

}  // namespace coarse::testing
