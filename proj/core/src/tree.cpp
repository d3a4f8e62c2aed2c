#include "coarse/tree.hpp"

#include <algorithm>
#include <random>
#include <unordered_map>

#include "coarse/error.hpp"
#include "coarse/union_find.hpp"

namespace coarse {

RootedTree::RootedTree(std::vector<std::string> labels, std::vector<std::uint32_t> parent)
    : labels_(std::move(labels)), parent_(std::move(parent)) {
  const std::size_t n = labels_.size();
  if (n == 0) throw InputError("tree: no vertices");
  if (parent_.size() != n) throw InputError("tree: parent map has the wrong size");
  std::size_t roots = 0;
  children_.assign(n, {});
  for (std::uint32_t v = 0; v < n; ++v) {
    if (parent_[v] == kNone) {
      ++roots;
      root_ = v;
    } else {
      if (parent_[v] >= n) throw InputError("tree: parent of '" + labels_[v] + "' is not a vertex");
      children_[parent_[v]].push_back(v);
    }
  }
  if (roots != 1) throw InputError("tree: expected exactly one root, found " + std::to_string(roots));
  depth_.assign(n, -1);
  order_.reserve(n);
  order_.push_back(root_);
  depth_[root_] = 0;
  for (std::size_t k = 0; k < order_.size(); ++k) {
    const std::uint32_t v = order_[k];
    for (std::uint32_t c : children_[v]) {
      depth_[c] = depth_[v] + 1;
      height_ = std::max(height_, depth_[c]);
      order_.push_back(c);
    }
  }
  if (order_.size() != n) throw InputError("tree: parent map has a cycle or a vertex that does not reach the root");

  std::vector<std::uint32_t> up(n);
  for (std::uint32_t v = 0; v < n; ++v) up[v] = parent_[v] == kNone ? v : parent_[v];
  jump_.push_back(std::move(up));
  for (std::int64_t span = 2; span <= height_; span *= 2) {
    const auto& prev = jump_.back();
    std::vector<std::uint32_t> next(n);
    for (std::uint32_t v = 0; v < n; ++v) next[v] = prev[prev[v]];
    jump_.push_back(std::move(next));
  }
}

RootedTree RootedTree::from_edges(const std::string& root, const std::vector<std::pair<std::string, std::string>>& edges) {
  std::vector<std::string> labels{root};
  std::unordered_map<std::string, std::uint32_t> index{{root, 0}};
  auto id = [&](const std::string& l) {
    auto [it, fresh] = index.emplace(l, static_cast<std::uint32_t>(labels.size()));
    if (fresh) labels.push_back(l);
    return it->second;
  };
  std::vector<std::pair<std::uint32_t, std::uint32_t>> pairs;
  for (const auto& [p, c] : edges) pairs.emplace_back(id(p), id(c));
  std::vector<std::uint32_t> parent(labels.size(), kNone);
  for (const auto& [p, c] : pairs) {
    if (c == 0) throw InputError("tree: the root '" + root + "' appears as a child");
    if (parent[c] != kNone) throw InputError("tree: vertex '" + labels[c] + "' has two parents");
    parent[c] = p;
  }
  return RootedTree(std::move(labels), std::move(parent));
}

std::uint32_t RootedTree::ancestor_at(std::uint32_t v, std::int64_t target_depth) const {
  if (target_depth < 0 || target_depth > depth_.at(v)) throw std::out_of_range("tree: bad ancestor depth");
  std::int64_t climb = depth_[v] - target_depth;
  for (std::size_t k = 0; climb > 0; ++k, climb >>= 1) {
    if (climb & 1) v = jump_[k][v];
  }
  return v;
}

std::uint32_t RootedTree::meet(std::uint32_t u, std::uint32_t v) const {
  if (depth_.at(u) < depth_.at(v)) std::swap(u, v);
  u = ancestor_at(u, depth_[v]);
  if (u == v) return u;
  for (std::size_t k = jump_.size(); k-- > 0;) {
    if (jump_[k][u] != jump_[k][v]) {
      u = jump_[k][u];
      v = jump_[k][v];
    }
  }
  return parent_[u];
}

std::int64_t RootedTree::distance(std::uint32_t u, std::uint32_t v) const {
  return depth_.at(u) + depth_.at(v) - 2 * depth_[meet(u, v)];
}

std::vector<std::pair<std::uint32_t, std::uint32_t>> RootedTree::edges() const {
  std::vector<std::pair<std::uint32_t, std::uint32_t>> out;
  for (std::uint32_t v : order_) {
    if (parent_[v] != kNone) out.emplace_back(parent_[v], v);
  }
  return out;
}

SpacePtr RootedTree::as_space() const {
  auto self = std::make_shared<const RootedTree>(*this);
  return make_space(labels_, [self](PointIndex p, PointIndex q) { return Length(self->distance(p, q)); }, PointIndex{root_});
}

RootedTree random_tree(std::size_t n, std::uint64_t seed, TreeShape shape) {
  if (n == 0) throw InputError("random_tree: no vertices");
  std::mt19937_64 rng(seed);
  std::vector<std::uint32_t> parent(n, RootedTree::kNone);
  auto pick = [&](std::size_t below) { return static_cast<std::uint32_t>(std::uniform_int_distribution<std::size_t>(0, below - 1)(rng)); };
  const std::size_t spine = std::max<std::size_t>(1, n / 3);
  for (std::size_t v = 1; v < n; ++v) {
    switch (shape) {
      case TreeShape::recursive:
        parent[v] = pick(v);
        break;
      case TreeShape::caterpillar:
        parent[v] = v < spine ? static_cast<std::uint32_t>(v - 1) : pick(spine);
        break;
      case TreeShape::broom:
        parent[v] = v < spine ? static_cast<std::uint32_t>(v - 1) : static_cast<std::uint32_t>(spine - 1);
        break;
      case TreeShape::star:
        parent[v] = 0;
        break;
      case TreeShape::binary:
        parent[v] = static_cast<std::uint32_t>((v - 1) / 2);
        break;
    }
  }
  std::vector<std::string> labels;
  labels.reserve(n);
  for (std::size_t v = 0; v < n; ++v) labels.push_back("v" + std::to_string(v));
  return RootedTree(std::move(labels), std::move(parent));
}

RootedTree path_tree(std::size_t n) {
  std::vector<std::uint32_t> parent(n, RootedTree::kNone);
  std::vector<std::string> labels;
  for (std::size_t v = 0; v < n; ++v) {
    labels.push_back("v" + std::to_string(v));
    if (v) parent[v] = static_cast<std::uint32_t>(v - 1);
  }
  return RootedTree(std::move(labels), std::move(parent));
}

RootedTree tree_from_metric(const FiniteMetricSpace& space, PointIndex root) {
  space.require(root);
  const std::size_t n = space.size();
  std::vector<std::uint32_t> parent(n, RootedTree::kNone);
  for (PointIndex v = 0; v < n; ++v) {
    if (v == root) continue;
    const Length depth = space.dist(root, v);
    for (PointIndex u = 0; u < n && parent[v] == RootedTree::kNone; ++u) {
      if (space.dist(u, v) == Length(1) && space.dist(root, u) + Length(1) == depth) parent[v] = u;
    }
    if (parent[v] == RootedTree::kNone) {
      throw InputError("tree_from_metric: '" + space.label(v) + "' has no neighbour closer to the root");
    }
  }
  RootedTree tree(space.labels(), std::move(parent));
  for (PointIndex u = 0; u < n; ++u) {
    for (PointIndex v = u + 1; v < n; ++v) {
      if (!(space.dist(u, v) == Length(tree.distance(u, v)))) {
        throw InputError("tree_from_metric: distance between '" + space.label(u) + "' and '" + space.label(v) +
                         "' is not the tree distance");
      }
    }
  }
  return tree;
}

RootedTree star_tree(std::size_t leaves) {
  std::vector<std::uint32_t> parent(leaves + 1, 0);
  parent[0] = RootedTree::kNone;
  std::vector<std::string> labels{"root"};
  for (std::size_t i = 1; i <= leaves; ++i) labels.push_back("leaf" + std::to_string(i));
  return RootedTree(std::move(labels), std::move(parent));
}

std::vector<std::int64_t> annulus_index(const RootedTree& tree, const Rational& r) {
  if (r < Rational(1)) throw InputError("tree_cover: r must be at least 1");
  std::vector<std::int64_t> out(tree.size());
  for (std::uint32_t v = 0; v < tree.size(); ++v) out[v] = (Rational(tree.depth(v)) / r).floor();
  return out;
}

Length tree_cover_bound(const Rational& r) { return Length(Rational(2 * r.ceil() + r.floor() - 2)); }

std::int64_t anchor_depth(const Rational& r, std::int64_t annulus) {
  const std::int64_t top = (r * Rational(annulus)).ceil();
  return std::max<std::int64_t>(0, top - r.floor() / 2);
}

std::vector<PointSet> tree_components(const RootedTree& tree, const std::vector<char>& marked, std::int64_t s) {
  const std::size_t n = tree.size();
  constexpr std::uint32_t kNone = RootedTree::kNone;
  // Nearest marked vertex below each vertex, and the nearest one in a
  // different child branch. branch == kNone means the vertex itself.
  struct Near {
    std::int64_t dist = -1;
    std::uint32_t vertex = kNone;
    std::uint32_t branch = kNone;
  };
  std::vector<Near> best(n);
  std::vector<Near> second(n);
  auto better = [](const Near& a, const Near& b) {
    if (b.dist < 0) return a.dist >= 0;
    if (a.dist < 0) return false;
    return a.dist < b.dist || (a.dist == b.dist && a.vertex < b.vertex);
  };
  const auto& order = tree.bfs_order();
  for (std::size_t k = n; k-- > 0;) {
    const std::uint32_t x = order[k];
    std::vector<Near> candidates;
    if (marked[x]) candidates.push_back({0, x, kNone});
    for (std::uint32_t c : tree.children(x)) {
      if (best[c].dist >= 0) candidates.push_back({best[c].dist + 1, best[c].vertex, c});
    }
    for (const auto& cand : candidates) {
      if (better(cand, best[x])) best[x] = cand;
    }
    for (const auto& cand : candidates) {
      if (cand.branch != best[x].branch && better(cand, second[x])) second[x] = cand;
    }
  }

  UnionFind uf(n);
  for (std::uint32_t u = 0; u < n; ++u) {
    if (!marked[u]) continue;
    std::uint32_t prev = u;
    std::uint32_t x = tree.parent(u);
    for (std::int64_t h = 1; h <= s && x != kNone; ++h, prev = x, x = tree.parent(x)) {
      const Near& cand = best[x].branch != prev ? best[x] : second[x];
      if (cand.dist >= 0 && h + cand.dist <= s) uf.unite(u, cand.vertex);
    }
  }
  std::vector<PointSet> out;
  std::vector<std::size_t> slot(n, SIZE_MAX);
  for (std::uint32_t v = 0; v < n; ++v) {
    if (!marked[v]) continue;
    const std::size_t root = uf.find(v);
    if (slot[root] == SIZE_MAX) {
      slot[root] = out.size();
      out.emplace_back();
    }
    out[slot[root]].push_back(v);
  }
  return out;
}

TreeCover tree_cover(const RootedTree& tree, const Rational& r) {
  TreeCover out;
  out.r = r;
  out.annulus = annulus_index(tree, r);
  out.mesh_bound = tree_cover_bound(r);
  out.even.label = "even";
  out.odd.label = "odd";
  const std::int64_t s = r.floor();
  for (int parity = 0; parity < 2; ++parity) {
    std::vector<char> marked(tree.size(), 0);
    for (std::uint32_t v = 0; v < tree.size(); ++v) marked[v] = (out.annulus[v] % 2) == parity;
    Family& target = parity == 0 ? out.even : out.odd;
    for (auto& piece : tree_components(tree, marked, s)) target.add(std::move(piece));
  }
  return out;
}

}  // namespace coarse
