#include "coarse/oracles.hpp"

#include <map>

#include "coarse/combinators.hpp"
#include "coarse/error.hpp"
#include "coarse/generators.hpp"

namespace coarse {

ApcOracle line_oracle(const SpacePtr& space, std::vector<Rational> coordinates) {
  if (coordinates.size() != space->size()) throw InputError("line oracle: one coordinate per point required");
  auto coords = std::make_shared<const std::vector<Rational>>(std::move(coordinates));
  ApcOracle oracle;
  oracle.space = space;
  oracle.name = "line";
  oracle.cover = [space, coords](const ScaleSequence& scales) {
    CoverWitness w;
    if (space->size() == 0) return w;
    const Rational r = max(scales.at(1), scales.at(2));
    const Rational length(std::max<std::int64_t>(1, r.ceil()));
    Rational lowest = (*coords)[0];
    for (const auto& c : *coords) lowest = min(lowest, c);
    std::map<std::int64_t, PointSet> blocks;
    for (PointIndex p = 0; p < space->size(); ++p) blocks[(((*coords)[p] - lowest) / length).floor()].push_back(p);
    w.entries.resize(2);
    for (std::size_t t = 0; t < 2; ++t) w.entries[t].scale = scales.at(t + 1);
    for (auto& [b, members] : blocks) {
      WitnessEntry& e = w.entries[static_cast<std::size_t>(b % 2)];
      e.mesh_bound = max(e.mesh_bound, set_diameter(*space, members));
      e.family.add(std::move(members));
    }
    return w;
  };
  return oracle;
}

ApcOracle interval_oracle(const SpacePtr& space, const Rational& spacing) {
  std::vector<Rational> coords;
  coords.reserve(space->size());
  for (const auto& l : space->labels()) {
    try {
      coords.push_back(Rational::parse(l) * spacing);
    } catch (const std::exception&) {
      throw InputError("interval oracle: point id '" + l + "' is not a number");
    }
  }
  ApcOracle oracle = line_oracle(space, std::move(coords));
  oracle.name = "interval";
  return oracle;
}

ApcOracle grid_oracle(const SpacePtr& grid, const std::vector<std::int64_t>& extents) {
  if (extents.empty()) throw InputError("grid oracle: no dimensions");
  std::size_t n = 1;
  for (auto e : extents) n *= static_cast<std::size_t>(e);
  if (n != grid->size()) throw InputError("grid oracle: extents do not match the space");
  SpacePtr first = interval_space(0, extents[0] - 1);
  ApcOracle current = interval_oracle(first);
  for (std::size_t k = 1; k < extents.size(); ++k) {
    const ApcOracle left = current;
    const ApcOracle right = interval_oracle(interval_space(0, extents[k] - 1));
    SpacePtr space = product_space(left.space, right.space, ProductMetric::l1);
    current.space = space;
    current.name = "grid";
    current.cover = [left, right](const ScaleSequence& scales) {
      return product_cover(left, right, scales, ProductMetric::l1).witness;
    };
  }
  // Row-major indices of the folded product agree with grid_space.
  ApcOracle oracle;
  oracle.space = grid;
  oracle.name = "grid";
  oracle.cover = current.cover;
  return oracle;
}

CoverWitness tree_cover_witness(const TreeCover& cover) {
  CoverWitness w;
  w.entries.push_back({cover.r, cover.even, cover.mesh_bound});
  w.entries.push_back({cover.r, cover.odd, cover.mesh_bound});
  return w;
}

ApcOracle tree_oracle(const RootedTree& tree) {
  auto shared = std::make_shared<const RootedTree>(tree);
  ApcOracle oracle;
  oracle.space = tree.as_space();
  oracle.name = "tree";
  oracle.cover = [shared](const ScaleSequence& scales) {
    const Rational r(std::max<std::int64_t>(1, max(scales.at(1), scales.at(2)).ceil()));
    CoverWitness w = tree_cover_witness(tree_cover(*shared, r));
    w.entries[0].scale = scales.at(1);
    w.entries[1].scale = scales.at(2);
    return w;
  };
  return oracle;
}

ApcOracle exact_oracle(const SpacePtr& space, const SolverOptions& options) {
  ApcOracle oracle;
  oracle.space = space;
  oracle.name = "exact";
  oracle.cover = [space, options](const ScaleSequence& scales) {
    const SolveResult result =
        min_families_with_scales(*space, [&scales](std::size_t t) { return scales.at(t); }, Length(0), options);
    CoverWitness w;
    for (std::size_t t = 0; t < result.cover.size(); ++t) {
      w.entries.push_back({scales.at(t + 1), result.cover[t], Length(0)});
    }
    return w;
  };
  return oracle;
}

ApcOracle trivial_oracle(const SpacePtr& space) {
  ApcOracle oracle;
  oracle.space = space;
  oracle.name = "trivial";
  oracle.cover = [space](const ScaleSequence& scales) {
    CoverWitness w;
    const PointSet all = all_points(*space);
    w.entries.push_back({scales.at(1), Family({all}), set_diameter(*space, all)});
    return w;
  };
  return oracle;
}

}  // namespace coarse
