#pragma once

#include <vector>

#include "coarse/cover.hpp"
#include "coarse/solver.hpp"
#include "coarse/tree.hpp"

namespace coarse {

/// Oracle for a space that sits isometrically on the line at the given
/// coordinates. With R = max(R_1, R_2) and block length L = max(1, ceil(R)),
/// points are grouped into half-open blocks of length L; even blocks form
/// family 1, odd blocks family 2. Blocks of equal parity are more than L
/// apart, so both families are R-disjoint.
ApcOracle line_oracle(const SpacePtr& space, std::vector<Rational> coordinates);

/// line_oracle for an integer interval or path space, reading coordinates
/// from the labels (scaled by the spacing).
ApcOracle interval_oracle(const SpacePtr& space, const Rational& spacing = 1);

/// Oracle for grid_space(extents): interval oracles combined by
/// product_cover with the l1 product metric, one dimension at a time.
ApcOracle grid_oracle(const SpacePtr& grid, const std::vector<std::int64_t>& extents);

/// tree_cover at r = max(ceil(R_2), 1): even family in slot 1, odd in slot 2.
ApcOracle tree_oracle(const RootedTree& tree);

/// Exact minimal cover: the smallest n such that families 1..n, family t
/// R_t-disjoint with singleton members (mesh 0), cover the space.
ApcOracle exact_oracle(const SpacePtr& space, const SolverOptions& options = {});

/// One family holding the whole space.
ApcOracle trivial_oracle(const SpacePtr& space);

/// Witness from a tree cover, slot 1 even and slot 2 odd, both at scale r.
CoverWitness tree_cover_witness(const TreeCover& cover);

}  // namespace coarse
