#pragma once

#include <cstdint>
#include <vector>

#include "coarse/metric_space.hpp"

namespace coarse {

/// Upper bound on the number of points a generator may produce.
inline constexpr std::size_t kDefaultPointCap = 1'000'000;

/// Integers lo..hi with |a - b|. Labels are the integers.
SpacePtr interval_space(std::int64_t lo, std::int64_t hi, std::size_t cap = kDefaultPointCap);

/// Grid {0..e1-1} x ... x {0..ed-1} with the l1 metric, row-major (last
/// coordinate fastest). Labels "(x1,...,xd)".
SpacePtr grid_space(const std::vector<std::int64_t>& extents, std::size_t cap = kDefaultPointCap);

/// Points 0..n-1 at positions i * spacing on the line.
SpacePtr path_space(std::size_t n, const Rational& spacing = 1, std::size_t cap = kDefaultPointCap);

/// Cycle graph on n vertices with the shortest-path metric.
SpacePtr cycle_space(std::size_t n, std::size_t cap = kDefaultPointCap);

/// Star with center "c" and leaves "l1".."lk" (unit edges). Basepoint c.
SpacePtr star_space(std::size_t leaves, std::size_t cap = kDefaultPointCap);

/// Disjoint union of the cubes {0,1}^n for n = 1..max_n. Inside a cube the
/// metric is l1; across cubes m < n it is |x| + |y| + |n^2 - m^2| where |.|
/// counts ones. Labels "n:bits".
SpacePtr hypercube_union(int max_n, std::size_t cap = kDefaultPointCap);

/// Dimension of the cube containing a hypercube_union point.
int hypercube_of(const FiniteMetricSpace& space, PointIndex p);

/// Random graph metric on n points: shortest paths of a connected random
/// graph with integer edge weights in [1, max_weight].
SpacePtr random_graph_space(std::size_t n, std::uint64_t seed, int max_weight = 4, double edge_probability = 0.35);

}  // namespace coarse
