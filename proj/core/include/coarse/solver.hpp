#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "coarse/cover.hpp"
#include "coarse/metric_space.hpp"

namespace coarse {

struct SolverOptions {
  /// Largest space the exact solver accepts (hard limit 64).
  std::size_t point_cap = 16;
};

/// Proof object for "no cover with this many families exists": the search
/// parameters plus the number of search nodes the exhaustive search
/// visited. replay_negative_certificate re-derives the claim independently.
struct NegativeCertificate {
  std::vector<Rational> scales;  // one scale per family; size = family count
  Length bound;
  std::uint64_t nodes = 0;
};

struct SolveResult {
  std::size_t families = 0;
  /// The witnessing families; family t is scales[t]-disjoint with mesh <= bound.
  std::vector<Family> cover;
  /// Certificate for families - 1 (absent when families == 1).
  std::optional<NegativeCertificate> negative;
  std::uint64_t nodes = 0;
};

/// Decides whether the points can be split into scales.size() families,
/// family t being scales[t]-disjoint with all members of diameter <= bound.
/// Returns the families if so. `nodes` accumulates the search effort.
std::optional<std::vector<Family>> exact_cover_with(const FiniteMetricSpace& space, const PointSet& points,
                                                    const std::vector<Rational>& scales, const Length& bound,
                                                    const SolverOptions& options = {}, std::uint64_t* nodes = nullptr);

/// Minimal n such that n r-disjoint families with mesh <= bound cover the
/// space, found by branch and bound. Throws InputError above the point cap.
SolveResult min_families_at_scale(const FiniteMetricSpace& space, const Rational& r, const Length& bound,
                                  const SolverOptions& options = {});

/// Like min_families_at_scale, but family t must be scales(t)-disjoint
/// where scales(t) is the t-th element (1-based) of the given list
/// generator; used by the exact oracle.
SolveResult min_families_with_scales(const FiniteMetricSpace& space, const std::function<Rational(std::size_t)>& scale_of,
                                     const Length& bound, const SolverOptions& options = {});

/// First-fit heuristic. Points are visited in index order, or in a seeded
/// random order when a seed is given. Always returns a valid cover.
SolveResult greedy_families_at_scale(const FiniteMetricSpace& space, const Rational& r, const Length& bound,
                                     std::optional<std::uint64_t> seed = {});

struct ReplayResult {
  bool replayed = false;   // false when the enumeration would exceed the limit
  bool confirmed = false;  // no assignment satisfied the constraints
  std::uint64_t assignments = 0;
  std::string note;
};

/// Re-checks a negative certificate by enumerating every assignment of
/// points to families and testing each with the generic component and
/// diameter routines (no shared code with the branch and bound).
ReplayResult replay_negative_certificate(const FiniteMetricSpace& space, const NegativeCertificate& certificate,
                                         std::uint64_t assignment_limit = 5'000'000);

/// Smallest mesh bound B (over the distances occurring in the space) for
/// which at most k r-disjoint families suffice, with the witnessing cover.
struct MinimalBound {
  Length bound;
  std::vector<Family> cover;
  std::uint64_t nodes = 0;
};
MinimalBound exact_minimal_bound(const FiniteMetricSpace& space, const Rational& r, std::size_t k,
                                 const SolverOptions& options = {});
MinimalBound greedy_minimal_bound(const FiniteMetricSpace& space, const Rational& r, std::size_t k,
                                  std::optional<std::uint64_t> seed = {});

}  // namespace coarse
