#include "coarse/solver.hpp"

#include <algorithm>
#include <bit>
#include <numeric>
#include <random>
#include <set>

#include "coarse/error.hpp"

namespace coarse {
namespace {

constexpr std::size_t kHardCap = 64;

using Mask = std::uint64_t;

// Branch and bound over assignments of points to families. A family is
// "good" when each of its r-components has diameter <= bound; goodness is
// inherited by subsets, so a bad partial assignment is pruned at once.
class PartitionSearch {
 public:
  PartitionSearch(const FiniteMetricSpace& space, const PointSet& points, const std::vector<Rational>& scales,
                  const Length& bound)
      : points_(points), scales_(scales) {
    const std::size_t n = points.size();
    far_.assign(n, 0);
    std::vector<Rational> distinct(scales.begin(), scales.end());
    std::sort(distinct.begin(), distinct.end());
    distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
    near_.assign(distinct.size(), std::vector<Mask>(n, 0));
    for (const auto& s : scales) {
      scale_slot_.push_back(static_cast<std::size_t>(std::lower_bound(distinct.begin(), distinct.end(), s) - distinct.begin()));
    }
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        if (i == j) continue;
        const Length d = space.dist(points[i], points[j]);
        if (d > bound) far_[i] |= Mask{1} << j;
        for (std::size_t s = 0; s < distinct.size(); ++s) {
          if (d <= Length(distinct[s])) near_[s][i] |= Mask{1} << j;
        }
      }
    }
    masks_.assign(scales.size(), 0);
  }

  bool run() { return place(0); }
  [[nodiscard]] std::uint64_t nodes() const { return nodes_; }

  std::vector<Family> families() const {
    std::vector<Family> out;
    for (std::size_t t = 0; t < masks_.size(); ++t) {
      Family f;
      Mask rest = masks_[t];
      while (rest) {
        const Mask comp = component(t, static_cast<std::size_t>(std::countr_zero(rest)), masks_[t]);
        PointSet s;
        for (Mask m = comp; m; m &= m - 1) s.push_back(points_[static_cast<std::size_t>(std::countr_zero(m))]);
        f.add(make_point_set(std::move(s)));
        rest &= ~comp;
      }
      out.push_back(std::move(f));
    }
    return out;
  }

 private:
  Mask component(std::size_t t, std::size_t start, Mask within) const {
    const auto& near = near_[scale_slot_[t]];
    Mask comp = Mask{1} << start;
    Mask frontier = comp;
    while (frontier) {
      const auto p = static_cast<std::size_t>(std::countr_zero(frontier));
      frontier &= frontier - 1;
      const Mask fresh = near[p] & within & ~comp;
      comp |= fresh;
      frontier |= fresh;
    }
    return comp;
  }

  bool good_after_adding(std::size_t t, std::size_t p) const {
    const Mask comp = component(t, p, masks_[t]);
    for (Mask m = comp; m; m &= m - 1) {
      if (far_[static_cast<std::size_t>(std::countr_zero(m))] & comp) return false;
    }
    return true;
  }

  bool place(std::size_t p) {
    if (p == points_.size()) return true;
    for (std::size_t t = 0; t < masks_.size(); ++t) {
      if (masks_[t] == 0) {
        // Empty families with the same scale are interchangeable.
        bool duplicate = false;
        for (std::size_t u = 0; u < t && !duplicate; ++u) duplicate = masks_[u] == 0 && scales_[u] == scales_[t];
        if (duplicate) continue;
      }
      ++nodes_;
      masks_[t] |= Mask{1} << p;
      if (good_after_adding(t, p) && place(p + 1)) return true;
      masks_[t] &= ~(Mask{1} << p);
    }
    return false;
  }

  const PointSet& points_;
  std::vector<Rational> scales_;
  std::vector<std::size_t> scale_slot_;
  std::vector<std::vector<Mask>> near_;
  std::vector<Mask> far_;
  std::vector<Mask> masks_;
  std::uint64_t nodes_ = 0;
};

void check_cap(std::size_t n, const SolverOptions& options) {
  const std::size_t cap = std::min(options.point_cap, kHardCap);
  if (n > cap) {
    throw InputError("exact solver: " + std::to_string(n) + " points exceed the cap of " + std::to_string(cap) +
                     "; use the greedy solver for larger spaces");
  }
}

// Greedy state for one family: its r-components so far.
struct GreedyFamily {
  std::vector<PointSet> components;
};

bool try_add(const FiniteMetricSpace& space, GreedyFamily& family, PointIndex p, const Rational& r,
             const Length& bound) {
  const Length reach(r);
  std::vector<std::size_t> touching;
  for (std::size_t c = 0; c < family.components.size(); ++c) {
    for (PointIndex q : family.components[c]) {
      if (space.dist(p, q) <= reach) {
        touching.push_back(c);
        break;
      }
    }
  }
  // The merged component is p plus every touched component; pairs inside a
  // single old component were already within the bound.
  std::vector<const PointSet*> parts;
  for (std::size_t c : touching) parts.push_back(&family.components[c]);
  for (std::size_t a = 0; a < parts.size(); ++a) {
    for (PointIndex q : *parts[a]) {
      if (space.dist(p, q) > bound) return false;
      for (std::size_t b = a + 1; b < parts.size(); ++b) {
        for (PointIndex s : *parts[b]) {
          if (space.dist(q, s) > bound) return false;
        }
      }
    }
  }
  PointSet merged{p};
  for (std::size_t c : touching) merged = set_union(merged, family.components[c]);
  for (std::size_t k = touching.size(); k-- > 0;) family.components.erase(family.components.begin() + static_cast<std::ptrdiff_t>(touching[k]));
  family.components.push_back(std::move(merged));
  return true;
}

std::vector<Length> candidate_bounds(const FiniteMetricSpace& space) {
  std::vector<Length> out{Length(0)};
  for (PointIndex i = 0; i < space.size(); ++i) {
    for (PointIndex j = i + 1; j < space.size(); ++j) out.push_back(space.dist(i, j));
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace

std::optional<std::vector<Family>> exact_cover_with(const FiniteMetricSpace& space, const PointSet& points,
                                                    const std::vector<Rational>& scales, const Length& bound,
                                                    const SolverOptions& options, std::uint64_t* nodes) {
  check_cap(points.size(), options);
  for (PointIndex p : points) space.require(p);
  if (scales.empty()) {
    if (points.empty()) return std::vector<Family>{};
    return std::nullopt;
  }
  PartitionSearch search(space, points, scales, bound);
  const bool found = search.run();
  if (nodes) *nodes += search.nodes();
  if (!found) return std::nullopt;
  return search.families();
}

SolveResult min_families_with_scales(const FiniteMetricSpace& space, const std::function<Rational(std::size_t)>& scale_of,
                                     const Length& bound, const SolverOptions& options) {
  check_cap(space.size(), options);
  const PointSet points = all_points(space);
  SolveResult result;
  if (points.empty()) return result;
  std::vector<Rational> scales;
  for (std::size_t n = 1; n <= points.size(); ++n) {
    scales.push_back(scale_of(n));
    std::uint64_t nodes = 0;
    auto cover = exact_cover_with(space, points, scales, bound, options, &nodes);
    result.nodes += nodes;
    if (cover) {
      result.families = n;
      result.cover = std::move(*cover);
      return result;
    }
    result.negative = NegativeCertificate{scales, bound, nodes};
  }
  // Singleton families always succeed once n reaches the point count.
  throw std::logic_error("exact solver: no cover found with one family per point");
}

SolveResult min_families_at_scale(const FiniteMetricSpace& space, const Rational& r, const Length& bound,
                                  const SolverOptions& options) {
  if (r.sign() < 0) throw InputError("exact solver: negative scale");
  return min_families_with_scales(space, [&r](std::size_t) { return r; }, bound, options);
}

SolveResult greedy_families_at_scale(const FiniteMetricSpace& space, const Rational& r, const Length& bound,
                                     std::optional<std::uint64_t> seed) {
  if (r.sign() < 0) throw InputError("greedy solver: negative scale");
  PointSet order = all_points(space);
  if (seed) {
    std::mt19937_64 rng(*seed);
    std::shuffle(order.begin(), order.end(), rng);
  }
  std::vector<GreedyFamily> families;
  for (PointIndex p : order) {
    bool placed = false;
    for (auto& f : families) {
      if (try_add(space, f, p, r, bound)) {
        placed = true;
        break;
      }
    }
    if (!placed) {
      families.emplace_back();
      families.back().components.push_back(PointSet{p});
    }
  }
  SolveResult result;
  result.families = families.size();
  for (auto& f : families) {
    Family out(std::move(f.components));
    out.canonicalize();
    result.cover.push_back(std::move(out));
  }
  return result;
}

ReplayResult replay_negative_certificate(const FiniteMetricSpace& space, const NegativeCertificate& certificate,
                                         std::uint64_t assignment_limit) {
  ReplayResult result;
  const std::size_t n = space.size();
  const std::size_t k = certificate.scales.size();
  if (k == 0) {
    result.replayed = true;
    result.confirmed = n > 0;
    return result;
  }
  std::uint64_t total = 1;
  for (std::size_t i = 0; i < n; ++i) {
    if (total > assignment_limit / k) {
      result.note = "enumeration exceeds the assignment limit";
      return result;
    }
    total *= k;
  }
  result.replayed = true;
  std::vector<std::size_t> digit(n, 0);
  for (std::uint64_t a = 0; a < total; ++a) {
    ++result.assignments;
    bool ok = true;
    for (std::size_t t = 0; t < k && ok; ++t) {
      PointSet members;
      for (std::size_t i = 0; i < n; ++i) {
        if (digit[i] == t) members.push_back(static_cast<PointIndex>(i));
      }
      for (const auto& piece : r_components(space, members, certificate.scales[t])) {
        if (set_diameter(space, piece) > certificate.bound) {
          ok = false;
          break;
        }
      }
    }
    if (ok) {
      result.confirmed = false;
      result.note = "assignment " + std::to_string(a) + " satisfies the constraints";
      return result;
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (++digit[i] < k) break;
      digit[i] = 0;
    }
  }
  result.confirmed = true;
  return result;
}

MinimalBound exact_minimal_bound(const FiniteMetricSpace& space, const Rational& r, std::size_t k,
                                 const SolverOptions& options) {
  check_cap(space.size(), options);
  const PointSet points = all_points(space);
  const std::vector<Rational> scales(k, r);
  MinimalBound out;
  for (const Length& b : candidate_bounds(space)) {
    auto cover = exact_cover_with(space, points, scales, b, options, &out.nodes);
    if (cover) {
      out.bound = b;
      out.cover = std::move(*cover);
      return out;
    }
  }
  throw InputError("exact solver: no bound admits a cover with " + std::to_string(k) + " families");
}

MinimalBound greedy_minimal_bound(const FiniteMetricSpace& space, const Rational& r, std::size_t k,
                                  std::optional<std::uint64_t> seed) {
  MinimalBound out;
  for (const Length& b : candidate_bounds(space)) {
    auto result = greedy_families_at_scale(space, r, b, seed);
    if (result.families <= k) {
      out.bound = b;
      out.cover = std::move(result.cover);
      return out;
    }
  }
  throw InputError("greedy solver: no bound admits a cover with " + std::to_string(k) + " families");
}

}  // namespace coarse
