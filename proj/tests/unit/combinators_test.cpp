#include <gtest/gtest.h>

#include <set>

#include "coarse/combinators.hpp"
#include "coarse/error.hpp"
#include "coarse/generators.hpp"
#include "coarse/groups.hpp"
#include "coarse/oracles.hpp"
#include "support.hpp"

namespace coarse {
namespace {

using testing::Rng;

TEST(TriangularIndex, FirstValues) {
  EXPECT_EQ(triangular_index(1, 1), 1u);
  EXPECT_EQ(triangular_index(1, 2), 2u);
  EXPECT_EQ(triangular_index(2, 1), 3u);
  EXPECT_EQ(triangular_index(1, 3), 4u);
  EXPECT_EQ(triangular_index(3, 1), 6u);
  EXPECT_THROW(triangular_index(0, 1), std::out_of_range);
}

TEST(TriangularIndexProperty, BijectionOnASquare) {
  std::set<std::size_t> seen;
  for (std::size_t i = 1; i <= 60; ++i) {
    for (std::size_t j = 1; j <= 60; ++j) {
      const std::size_t k = triangular_index(i, j);
      EXPECT_TRUE(seen.insert(k).second);
      EXPECT_EQ(triangular_inverse(k), std::make_pair(i, j));
      EXPECT_LT(triangular_index(i, j), triangular_index(i, j + 1));
    }
  }
  // Every index up to the first full antidiagonal outside the square is hit.
  for (std::size_t k = 1; k <= 60 * 61 / 2; ++k) EXPECT_TRUE(seen.count(k)) << k;
}

TEST(ColumnStream, ReadsTheRightScales) {
  const ScaleSequence scales({1, 2, 3, 4, 5, 6, 7, 8, 9, 10});
  const ScaleSequence col = column_stream(scales, 2);
  EXPECT_EQ(col.at(1), scales.at(triangular_index(2, 1)));
  EXPECT_EQ(col.at(3), scales.at(triangular_index(2, 3)));
}

/// diam(W)^2 <= mesh(U)^2 + mesh(V)^2 checked on the factor projections of
/// every member W of every slot.
void expect_l2_mesh_inequality(const ProductResult& r, const FiniteMetricSpace& x, const FiniteMetricSpace& y) {
  for (const auto& entry : r.witness.entries) {
    for (const auto& w : entry.family.sets) {
      PointSet u;
      PointSet v;
      for (PointIndex p : w) {
        u.push_back(p / static_cast<PointIndex>(y.size()));
        v.push_back(p % static_cast<PointIndex>(y.size()));
      }
      u = make_point_set(u);
      v = make_point_set(v);
      const Rational du = testing::naive_diameter(x, u).square();
      const Rational dv = testing::naive_diameter(y, v).square();
      EXPECT_LE(testing::naive_diameter(*r.space, w).square(), du + dv);
      EXPECT_LE(testing::naive_diameter(*r.space, w), entry.mesh_bound);
    }
  }
}

TEST(Product, IntervalsVerifyAndMeetTheMeshInequality) {
  const ApcOracle ox = interval_oracle(interval_space(0, 20));
  const ApcOracle oy = interval_oracle(interval_space(0, 20));
  const ScaleSequence scales({1, 2, 4, 8, 16});
  const ProductResult r = product_cover(ox, oy, scales);
  const VerificationReport report = verify_apc_witness(*r.space, scales.fresh(), r.witness);
  ASSERT_TRUE(report.ok) << report.summary(*r.space);
  expect_l2_mesh_inequality(r, *ox.space, *oy.space);
  // Each slot is judged at its own scale, independently of the verifier.
  for (std::size_t t = 0; t < r.witness.size(); ++t) {
    EXPECT_TRUE(testing::naive_disjoint(*r.space, r.witness.entries[t].family, scales.at(t + 1)));
  }
  EXPECT_EQ(r.log.columns, 2u);
  EXPECT_EQ(r.log.column_counts, (std::vector<std::size_t>{2, 2}));
}

TEST(Product, DiagonalIsNonDecreasing) {
  Rng rng(4);
  for (int trial = 0; trial < 20; ++trial) {
    const ApcOracle ox = exact_oracle(testing::space_from_table(testing::random_graph_metric(rng, 2 + rng() % 6)));
    const ApcOracle oy = exact_oracle(testing::space_from_table(testing::random_graph_metric(rng, 2 + rng() % 6)));
    const ProductResult r = product_cover(ox, oy, ScaleSequence({1}, ScaleSequence::Extension::arithmetic, 1));
    for (std::size_t i = 1; i < r.log.diagonal.size(); ++i) EXPECT_LE(r.log.diagonal[i - 1], r.log.diagonal[i]);
  }
}

TEST(ProductProperty, RandomFactorsBothMetrics) {
  Rng rng(12);
  for (int trial = 0; trial < 30; ++trial) {
    const SpacePtr x = testing::space_from_table(testing::random_graph_metric(rng, 2 + rng() % 5));
    const SpacePtr y = testing::space_from_table(testing::random_graph_metric(rng, 2 + rng() % 5));
    std::vector<Rational> prefix;
    Rational s(static_cast<std::int64_t>(rng() % 2));
    for (int k = 0; k < 4; ++k) {
      s += Rational(static_cast<std::int64_t>(rng() % 3));
      prefix.push_back(s);
    }
    const ScaleSequence scales(prefix);
    for (auto kind : {ProductMetric::l1, ProductMetric::l2}) {
      const std::vector<ApcOracle> xs{exact_oracle(x), trivial_oracle(x)};
      for (const auto& ox : xs) {
        const ProductResult r = product_cover(ox, exact_oracle(y), scales, kind);
        const VerificationReport report = verify_apc_witness(*r.space, scales.fresh(), r.witness);
        EXPECT_TRUE(report.ok) << report.summary(*r.space);
        if (kind == ProductMetric::l2) expect_l2_mesh_inequality(r, *x, *y);
      }
    }
  }
}

TEST(Product, RejectsAnInvalidFactorOracle) {
  const SpacePtr line = interval_space(0, 4);
  ApcOracle liar;
  liar.space = line;
  liar.name = "liar";
  liar.cover = [line](const ScaleSequence& s) {
    CoverWitness w;
    w.entries.push_back({s.at(1), Family({all_points(*line)}), Length(0)});  // mesh is really 4
    return w;
  };
  EXPECT_THROW(product_cover(liar, interval_oracle(line), ScaleSequence({1})), OracleViolation);
  EXPECT_THROW(product_cover(interval_oracle(line), liar, ScaleSequence({1})), OracleViolation);
}

UniformlyExpansiveMap collapse_map(const SpacePtr& cubes, const SpacePtr& squares) {
  UniformlyExpansiveMap map{cubes, squares, {}, identity_modulus()};
  for (PointIndex p = 0; p < cubes->size(); ++p) {
    const std::int64_t n = hypercube_of(*cubes, p);
    map.image.push_back(squares->index_of(std::to_string(n * n)));
  }
  return map;
}

TEST(Expansive, HypercubeCollapseIsUniformlyExpansive) {
  const SpacePtr cubes = hypercube_union(4);
  const SpacePtr squares = interval_space(0, 16);
  UniformlyExpansiveMap map = collapse_map(cubes, squares);
  EXPECT_TRUE(check_uniformly_expansive(map).ok);
  map.rho = step_modulus(2, 1);  // rho(t) = floor(t/2) is too small
  const PredicateResult bad = check_uniformly_expansive(map);
  EXPECT_FALSE(bad.ok);
  EXPECT_EQ(bad.witness.size(), 2u);
  // The image {1, 4, 9, 16} misses 12 by 3.
  EXPECT_TRUE(check_coarsely_surjective(map, 4).ok);
  EXPECT_FALSE(check_coarsely_surjective(map, 2).ok);
}

TEST(Fibering, HypercubeCollapseWithWholeFibers) {
  const SpacePtr cubes = hypercube_union(3);
  const SpacePtr squares = interval_space(0, 9);
  const UniformlyExpansiveMap map = collapse_map(cubes, squares);
  const Length diameter = testing::naive_diameter(*cubes, all_points(*cubes));
  FiberSchemeFactory scheme = [diameter](const ScaleSequence&) {
    FiberCoverScheme s;
    s.bound_for_scale = [diameter](const Rational&) { return diameter; };
    s.cover = [](const PointSet& a, const Rational&) { return std::vector<Family>{Family({a})}; };
    return s;
  };
  const ScaleSequence scales({1, 2, 3});
  const FiberingResult r = fibering_cover(map, interval_oracle(squares), scheme, scales);
  EXPECT_TRUE(verify_apc_witness(*cubes, scales.fresh(), r.witness).ok);
}

TEST(Fibering, ProjectionOfAProduct) {
  const SpacePtr x = interval_space(0, 12);
  const SpacePtr y = interval_space(0, 12);
  const SpacePtr xy = product_space(x, y, ProductMetric::l1);
  const UniformlyExpansiveMap map = projection_map(xy, x, y);
  EXPECT_TRUE(check_uniformly_expansive(map).ok);
  const ScaleSequence scales({1, 2, 3, 5, 8});
  const FiberingResult r =
      fibering_cover(map, interval_oracle(y), projection_fiber_scheme(interval_oracle(x), y->size()), scales);
  const VerificationReport report = verify_apc_witness(*xy, scales.fresh(), r.witness);
  EXPECT_TRUE(report.ok) << report.summary(*xy);
  for (const auto& a : r.audit) EXPECT_LE(a.max_mesh, a.bound);
}

TEST(Fibering, RejectsSchemesThatBreakTheirBound) {
  const SpacePtr x = interval_space(0, 6);
  const SpacePtr y = interval_space(0, 6);
  UniformlyExpansiveMap map{x, y, {0, 1, 2, 3, 4, 5, 6}, identity_modulus()};
  FiberSchemeFactory tight = [](const ScaleSequence&) {
    FiberCoverScheme s;
    s.bound_for_scale = [](const Rational&) { return Length(0); };
    s.cover = [](const PointSet& a, const Rational&) { return std::vector<Family>{Family({a})}; };
    return s;
  };
  EXPECT_THROW(fibering_cover(map, interval_oracle(y), tight, ScaleSequence({3})), OracleViolation);
  FiberSchemeFactory lossy = [](const ScaleSequence&) {
    FiberCoverScheme s;
    s.bound_for_scale = [](const Rational&) { return Length(100); };
    s.cover = [](const PointSet&, const Rational&) { return std::vector<Family>{Family()}; };
    return s;
  };
  EXPECT_THROW(fibering_cover(map, interval_oracle(y), lossy, ScaleSequence({3})), OracleViolation);
  map.rho = step_modulus(10, 0);
  EXPECT_THROW(fibering_cover(map, interval_oracle(y), tight, ScaleSequence({3})), InputError);
}

DecomposableOracle line_hypothesis(const SpacePtr& line) {
  const ApcOracle oracle = interval_oracle(line);
  DecomposableOracle h;
  h.families = [oracle](const ScaleSequence& s) {
    std::vector<Family> out;
    for (auto& e : oracle(s).entries) out.push_back(e.family);
    return out;
  };
  h.subcover = [line](std::size_t, const PointSet& u, const Rational& r) {
    const std::int64_t l = std::max<std::int64_t>(1, r.ceil());
    SubCover sub{Length(l), {Family(), Family()}};
    std::map<std::int64_t, PointSet> blocks;
    for (PointIndex p : u) blocks[(Rational::parse(line->label(p)) / Rational(l)).floor()].push_back(p);
    for (auto& [j, b] : blocks) sub.families[static_cast<std::size_t>(((j % 2) + 2) % 2)].add(b);
    return sub;
  };
  return h;
}

TEST(Decompose, LineIntoTwoPerFamily) {
  const SpacePtr line = interval_space(0, 40);
  const ScaleSequence scales({1, 2, 3, 4, 6, 8});
  const DecomposeResult r = decompose(line, 2, line_hypothesis(line), scales);
  EXPECT_EQ(r.witness.size(), 4u);
  const VerificationReport report = verify_apc_witness(*line, scales.fresh(), r.witness);
  EXPECT_TRUE(report.ok) << report.summary(*line);
  // The hypothesis saw R_2 and R_4.
  ASSERT_EQ(r.audit.size(), 2u);
  EXPECT_EQ(r.audit[0].scale, Rational(2));
  EXPECT_EQ(r.audit[1].scale, Rational(4));
  EXPECT_EQ(r.scales_consumed, 4u);
}

TEST(Decompose, RejectsBrokenSubcovers) {
  const SpacePtr line = interval_space(0, 20);
  DecomposableOracle h = line_hypothesis(line);
  auto counter = std::make_shared<int>(0);
  DecomposableOracle varying = h;
  varying.subcover = [h, counter](std::size_t i, const PointSet& u, const Rational& r) {
    SubCover s = h.subcover(i, u, r);
    s.bound = s.bound + Length((*counter)++);
    return s;
  };
  EXPECT_THROW(decompose(line, 2, varying, ScaleSequence({1})), OracleViolation);
  EXPECT_THROW(decompose(line, 3, h, ScaleSequence({1})), OracleViolation);
  DecomposableOracle sloppy = h;
  sloppy.families = [line](const ScaleSequence&) { return std::vector<Family>{testing::fam({all_points(*line)}), testing::fam({{0}})}; };
  EXPECT_NO_THROW(decompose(line, 2, sloppy, ScaleSequence({1})));
  sloppy.families = [](const ScaleSequence&) { return std::vector<Family>{testing::fam({{0}, {1}})}; };
  EXPECT_THROW(decompose(line, 2, sloppy, ScaleSequence({1})), OracleViolation);
}

TEST(AsdimAdapter, ChecksFamilyCount) {
  AsdimProvider provider;
  provider.bound = [](const Rational& m, const Rational&) { return Length(m); };
  provider.cover = [](const PointSet& a, const Rational&, const Rational&) { return std::vector<Family>{Family({a})}; };
  const FiberCoverScheme ok = fiber_scheme_from_asdim(0, provider)(ScaleSequence({1}));
  EXPECT_EQ(ok.family_count, 1u);
  EXPECT_EQ(ok.cover({1, 2}, 3).size(), 1u);
  const FiberCoverScheme wrong = fiber_scheme_from_asdim(1, provider)(ScaleSequence({1}));
  EXPECT_THROW(wrong.cover({1, 2}, 3), OracleViolation);
}

}  // namespace
}  // namespace coarse
