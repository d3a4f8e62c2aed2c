#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "coarse/metric_space.hpp"

namespace coarse {

/// Rooted tree with unit edge lengths.
class RootedTree {
 public:
  static constexpr std::uint32_t kNone = UINT32_MAX;

  /// parent[v] == kNone for the root only. Throws InputError unless the
  /// parent map describes a single tree.
  RootedTree(std::vector<std::string> labels, std::vector<std::uint32_t> parent);

  /// Builds a tree from (parent, child) label pairs.
  static RootedTree from_edges(const std::string& root, const std::vector<std::pair<std::string, std::string>>& edges);

  [[nodiscard]] std::size_t size() const { return labels_.size(); }
  [[nodiscard]] std::uint32_t root() const { return root_; }
  [[nodiscard]] std::uint32_t parent(std::uint32_t v) const { return parent_.at(v); }
  [[nodiscard]] std::int64_t depth(std::uint32_t v) const { return depth_.at(v); }
  [[nodiscard]] std::int64_t height() const { return height_; }
  [[nodiscard]] const std::vector<std::uint32_t>& children(std::uint32_t v) const { return children_.at(v); }
  [[nodiscard]] const std::string& label(std::uint32_t v) const { return labels_.at(v); }
  [[nodiscard]] const std::vector<std::string>& labels() const { return labels_; }
  /// Vertices in breadth-first order from the root.
  [[nodiscard]] const std::vector<std::uint32_t>& bfs_order() const { return order_; }

  /// Deepest common ancestor.
  [[nodiscard]] std::uint32_t meet(std::uint32_t u, std::uint32_t v) const;
  /// Ancestor of v at the given depth (depth <= depth(v)).
  [[nodiscard]] std::uint32_t ancestor_at(std::uint32_t v, std::int64_t target_depth) const;
  [[nodiscard]] std::int64_t distance(std::uint32_t u, std::uint32_t v) const;

  [[nodiscard]] std::vector<std::pair<std::uint32_t, std::uint32_t>> edges() const;

  /// The vertex set with the path metric.
  [[nodiscard]] SpacePtr as_space() const;

 private:
  std::vector<std::string> labels_;
  std::vector<std::uint32_t> parent_;
  std::vector<std::int64_t> depth_;
  std::vector<std::vector<std::uint32_t>> children_;
  std::vector<std::uint32_t> order_;
  std::vector<std::vector<std::uint32_t>> jump_;  // jump_[k][v] = 2^k-th ancestor (root maps to itself)
  std::uint32_t root_ = 0;
  std::int64_t height_ = 0;
};

enum class TreeShape { recursive, caterpillar, broom, star, binary };

/// Random tree on n vertices labelled "v0".."v{n-1}" with root v0.
RootedTree random_tree(std::size_t n, std::uint64_t seed, TreeShape shape = TreeShape::recursive);
RootedTree path_tree(std::size_t n);
/// The tree whose path metric is the given metric: each point's parent is
/// the point at distance 1 that is one closer to the root. Vertex v is
/// point v. Throws InputError if the metric is not such a tree metric.
RootedTree tree_from_metric(const FiniteMetricSpace& space, PointIndex root);
RootedTree star_tree(std::size_t leaves);

/// Two families covering the tree: the r-components of the even and of the
/// odd annuli {v : i r <= depth(v) < (i+1) r}. Both families are
/// r-disjoint and every member has diameter at most mesh_bound, which is
/// 3r - 2 for integer r.
struct TreeCover {
  Rational r;
  Family even;
  Family odd;
  Length mesh_bound;
  std::vector<std::int64_t> annulus;  // per vertex
};

TreeCover tree_cover(const RootedTree& tree, const Rational& r);

/// floor(depth / r) for every vertex.
std::vector<std::int64_t> annulus_index(const RootedTree& tree, const Rational& r);

/// 2 ceil(r) + floor(r) - 2: the bound met by tree_cover.
Length tree_cover_bound(const Rational& r);

/// Depth of the vertex whose subtree contains every component of annulus i.
std::int64_t anchor_depth(const Rational& r, std::int64_t annulus);

/// Maximal s-connected groups (tree distance <= s) of the marked vertices,
/// computed in O(n s) time.
std::vector<PointSet> tree_components(const RootedTree& tree, const std::vector<char>& marked, std::int64_t s);

}  // namespace coarse
