#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "coarse/cover.hpp"
#include "coarse/metric_space.hpp"
#include "coarse/scale_sequence.hpp"

namespace coarse {

/// Cantor enumeration of N+ x N+: k(i,j) = (d-1)(d-2)/2 + i with d = i + j.
std::size_t triangular_index(std::size_t i, std::size_t j);
std::pair<std::size_t, std::size_t> triangular_inverse(std::size_t k);

/// Column i of a stream: j -> R_{k(i,j)}. Non-decreasing since k(i,.) is.
ScaleSequence column_stream(const ScaleSequence& scales, std::size_t i);

/// Non-decreasing modulus rho for uniformly expansive maps.
using Modulus = std::function<Length(const Length&)>;
Modulus identity_modulus();
/// rho(t) = floor(t / step) * gain.
Modulus step_modulus(const Rational& step, const Rational& gain);

/// A point map between finite spaces with its expansion modulus.
struct UniformlyExpansiveMap {
  SpacePtr source;
  SpacePtr target;
  std::vector<PointIndex> image;  // image[x] = f(x)
  Modulus rho;
};

struct PredicateResult {
  bool ok = true;
  std::vector<PointIndex> witness;  // violating pair (source) or point (target)
  std::string detail;
};

/// d(f x, f x') <= rho(d(x, x')) for every pair.
PredicateResult check_uniformly_expansive(const UniformlyExpansiveMap& map);
/// Every target point lies within r of the image.
PredicateResult check_coarsely_surjective(const UniformlyExpansiveMap& map, const Rational& r);

/// What a combinator read from its inputs.
struct CombinatorLog {
  std::size_t columns = 0;                 // m: families returned by the outer oracle
  std::vector<std::size_t> column_counts;  // n_i per column
  std::vector<Rational> diagonal;          // scales passed to the outer oracle
  std::size_t scales_consumed = 0;         // largest index read from the input stream
};

struct ProductResult {
  SpacePtr space;
  CoverWitness witness;
  CombinatorLog log;
};

/// Cover of X x Y from covers of the factors. Column i of the stream goes
/// to oracle_x (n_i families U_{i,j}); the diagonal R_{i,n_i} goes to
/// oracle_y (families V_1..V_m); {U x V} lands in slot k(i,j). The
/// diagonal is passed as its running maximum so that oracle_y sees a
/// non-decreasing stream. Throws OracleViolation if a factor oracle
/// returns an invalid witness.
ProductResult product_cover(const ApcOracle& oracle_x, const ApcOracle& oracle_y, const ScaleSequence& scales,
                            ProductMetric kind = ProductMetric::l2);

struct FiberAudit {
  std::size_t column = 0;
  Rational fiber_scale;  // M_i
  Length bound;          // B(M_i)
  std::size_t fibers = 0;
  Length max_mesh;       // largest member diameter seen over all fibers
};

struct FiberingResult {
  CoverWitness witness;
  CombinatorLog log;
  std::vector<FiberAudit> audit;
};

/// Cover of the source of a uniformly expansive map whose coarse fibers
/// are uniformly covered by `scheme`. Throws InputError if the modulus is
/// violated and OracleViolation if the target oracle or the scheme breaks
/// its contract.
FiberingResult fibering_cover(const UniformlyExpansiveMap& map, const ApcOracle& oracle_y,
                              const FiberSchemeFactory& scheme, const ScaleSequence& scales);

struct SubCover {
  Length bound;
  std::vector<Family> families;
};

/// Input of the decomposition combinator: families U_1..U_n where U_i is
/// disjoint at the i-th scale of the stream it is given, plus a way to
/// re-cover each member by k families whose bound depends only on the
/// family index and the scale.
struct DecomposableOracle {
  std::function<std::vector<Family>(const ScaleSequence&)> families;
  std::function<SubCover(std::size_t family_index, const PointSet& member, const Rational& r)> subcover;
};

struct DecomposeAudit {
  std::size_t family_index = 0;
  Rational scale;
  Length bound;
  std::size_t members = 0;
  Length max_mesh;
};

struct DecomposeResult {
  CoverWitness witness;
  std::vector<DecomposeAudit> audit;
  std::size_t scales_consumed = 0;
};

/// Queries the hypothesis with R_k, R_2k, ...; each member of U_i is
/// re-covered at R_ik and the j-th pieces go to slot (i-1)k + j.
DecomposeResult decompose(const SpacePtr& space, std::size_t k, const DecomposableOracle& hypothesis,
                          const ScaleSequence& scales);

/// Per-fiber covers by n+1 families disjoint at a given scale, with a bound
/// that depends on (M, R) only.
struct AsdimProvider {
  std::function<Length(const Rational& m, const Rational& r)> bound;
  std::function<std::vector<Family>(const PointSet& a, const Rational& m, const Rational& r)> cover;
};

/// Scheme factory with k = n+1 that reads R_{n+1} from the column stream.
FiberSchemeFactory fiber_scheme_from_asdim(std::size_t n, AsdimProvider provider);

}  // namespace coarse
