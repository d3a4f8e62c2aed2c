#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "coarse/length.hpp"
#include "coarse/rational.hpp"

namespace coarse {

using PointIndex = std::uint32_t;
using DistanceFn = std::function<Length(PointIndex, PointIndex)>;

/// A finite set of labelled points with a distance function.
///
/// Points are addressed by dense indices 0..size()-1; labels are the
/// opaque ids used in files. The distance function is assumed to be a
/// metric; validate_metric() checks that assumption. Instances are
/// immutable and shared through SpacePtr.
class FiniteMetricSpace {
 public:
  FiniteMetricSpace(std::vector<std::string> labels, DistanceFn dist, std::optional<PointIndex> basepoint = {});

  [[nodiscard]] std::size_t size() const { return labels_.size(); }
  [[nodiscard]] const std::string& label(PointIndex p) const { return labels_.at(p); }
  [[nodiscard]] const std::vector<std::string>& labels() const { return labels_; }
  [[nodiscard]] std::optional<PointIndex> find(const std::string& label) const;
  /// Index of a label; throws InputError for unknown labels.
  [[nodiscard]] PointIndex index_of(const std::string& label) const;

  [[nodiscard]] Length dist(PointIndex p, PointIndex q) const { return dist_(p, q); }
  [[nodiscard]] const DistanceFn& distance_fn() const { return dist_; }

  [[nodiscard]] std::optional<PointIndex> basepoint() const { return basepoint_; }

  /// Generator description used when the space is saved; empty for
  /// matrix-backed spaces.
  [[nodiscard]] const std::string& generator() const { return generator_; }
  void set_generator(std::string spec) { generator_ = std::move(spec); }

  /// Throws InputError if p is not a point of this space.
  void require(PointIndex p) const;

 private:
  std::vector<std::string> labels_;
  std::unordered_map<std::string, PointIndex> index_;
  DistanceFn dist_;
  std::optional<PointIndex> basepoint_;
  std::string generator_;
};

using SpacePtr = std::shared_ptr<const FiniteMetricSpace>;

SpacePtr make_space(std::vector<std::string> labels, DistanceFn dist, std::optional<PointIndex> basepoint = {});

/// Space backed by an explicit symmetric-or-not distance matrix (rows are
/// stored as given so that validate_metric can report asymmetry).
SpacePtr matrix_space(std::vector<std::string> labels, std::vector<std::vector<Length>> rows,
                      std::optional<PointIndex> basepoint = {});

/// Copies all distances into a dense table; useful for spaces with
/// expensive distance functions that are queried many times.
SpacePtr materialize(const SpacePtr& space);

/// The same space with a different basepoint.
SpacePtr with_basepoint(const SpacePtr& space, PointIndex basepoint);

/// Sorted, duplicate-free list of point indices.
using PointSet = std::vector<PointIndex>;

PointSet make_point_set(std::vector<PointIndex> members);
PointSet all_points(const FiniteMetricSpace& space);
PointSet set_union(const PointSet& a, const PointSet& b);
PointSet set_intersection(const PointSet& a, const PointSet& b);
bool contains(const PointSet& s, PointIndex p);

/// A list of nonempty point sets. Empty sets are dropped on construction.
struct Family {
  std::vector<PointSet> sets;
  std::string label;

  Family() = default;
  explicit Family(std::vector<PointSet> members, std::string name = {});

  void add(PointSet s);
  [[nodiscard]] bool empty() const { return sets.empty(); }
  [[nodiscard]] std::size_t size() const { return sets.size(); }
  /// Puts the sets into a canonical order (by smallest member).
  void canonicalize();
};

/// Pair of points witnessing a distance fact.
struct PointPair {
  PointIndex a = 0;
  PointIndex b = 0;
  Length distance;
};

/// Minimum cross distance; std::nullopt stands for +infinity (an empty side).
std::optional<Length> set_distance(const FiniteMetricSpace& space, const PointSet& s, const PointSet& t);
Length set_diameter(const FiniteMetricSpace& space, const PointSet& s);
/// Farthest pair of a set (nullopt for sets with fewer than two points).
std::optional<PointPair> diameter_pair(const FiniteMetricSpace& space, const PointSet& s);
Length mesh(const FiniteMetricSpace& space, const Family& family);

/// True iff every cross pair is at distance strictly greater than r.
bool is_r_disjoint(const FiniteMetricSpace& space, const PointSet& s, const PointSet& t, const Rational& r);

struct DisjointnessViolation {
  std::size_t set_a = 0;
  std::size_t set_b = 0;
  PointPair pair;
};

/// First violating pair of distinct members (in a deterministic order), or
/// nullopt if the family is r-disjoint.
std::optional<DisjointnessViolation> family_disjointness(const FiniteMetricSpace& space, const Family& family,
                                                         const Rational& r);
inline bool family_is_r_disjoint(const FiniteMetricSpace& space, const Family& family, const Rational& r) {
  return !family_disjointness(space, family, r).has_value();
}

/// Maximal r-connected pieces of s (chain steps of length <= r), ordered by
/// smallest member.
std::vector<PointSet> r_components(const FiniteMetricSpace& space, const PointSet& s, const Rational& r);

/// Result of validate_metric.
struct MetricReport {
  struct Issue {
    std::string axiom;  // "identity", "symmetry", "non-negativity", "separation", "triangle", "basepoint"
    std::vector<PointIndex> points;
    std::string detail;
  };
  bool valid = true;
  std::vector<Issue> issues;
  bool pairs_exhaustive = true;
  bool triangles_exhaustive = true;
  std::uint64_t pairs_checked = 0;
  std::uint64_t triangles_checked = 0;
};

struct ValidationLimits {
  std::size_t exhaustive_pairs_up_to = 4096;     // points
  std::size_t exhaustive_triangles_up_to = 256;  // points
  std::uint64_t sampled_pairs = 500'000;
  std::uint64_t sampled_triangles = 500'000;
  std::uint64_t seed = 1;
};

MetricReport validate_metric(const FiniteMetricSpace& space, const ValidationLimits& limits = {});

/// How two factor distances combine in a product space.
enum class ProductMetric { l2, l1 };

/// X x Y with points (x, y) at index x * |Y| + y and labels "(x,y)".
SpacePtr product_space(const SpacePtr& x, const SpacePtr& y, ProductMetric kind = ProductMetric::l2);

/// The subspace on the given points, relabelled densely in set order.
SpacePtr subspace(const SpacePtr& space, const PointSet& points);

}  // namespace coarse
