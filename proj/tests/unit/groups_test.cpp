#include <gtest/gtest.h>

#include <set>

#include "coarse/error.hpp"
#include "coarse/groups.hpp"
#include "coarse/oracles.hpp"
#include "support.hpp"

namespace coarse {
namespace {

using testing::Rng;

WindowPtr window_of(const GroupPtr& group, const Rational& radius) {
  return std::make_shared<const CayleyWindow>(WeightedGeneratingSet::standard(group), radius);
}

/// Reduced words over a, A, b, B of length <= n, built letter by letter.
std::vector<std::string> reduced_words(std::size_t n) {
  auto inverse = [](char c) { return static_cast<char>(std::islower(c) ? std::toupper(c) : std::tolower(c)); };
  std::vector<std::string> all{""};
  std::vector<std::string> layer{""};
  for (std::size_t k = 0; k < n; ++k) {
    std::vector<std::string> next;
    for (const auto& w : layer) {
      for (char c : std::string("aAbB")) {
        if (!w.empty() && w.back() == inverse(c)) continue;
        next.push_back(w + c);
      }
    }
    all.insert(all.end(), next.begin(), next.end());
    layer = std::move(next);
  }
  return all;
}

TEST(FreeGroup, BallSizesMatchReducedWords) {
  const GroupPtr f2 = free_group(2);
  const std::vector<std::size_t> expected{1, 5, 17, 53};
  for (std::size_t n = 0; n <= 3; ++n) {
    const auto words = reduced_words(n);
    ASSERT_EQ(words.size(), expected[n]);
    const WindowPtr w = window_of(f2, static_cast<std::int64_t>(n));
    EXPECT_EQ(w->size(), words.size());
    for (const auto& word : words) {
      const Element g = f2->from_json("\"" + word + "\"");
      ASSERT_TRUE(w->index_of(g).has_value()) << word;
      EXPECT_EQ(w->norm(g), Rational(static_cast<std::int64_t>(word.size())));
    }
  }
}

TEST(FreeGroup, MultiplicationReduces) {
  const GroupPtr f2 = free_group(2);
  const Element ab = f2->from_json("\"ab\"");
  const Element binv = f2->from_json("\"B\"");
  EXPECT_EQ(f2->multiply(ab, binv), f2->from_json("\"a\""));
  EXPECT_TRUE(f2->is_identity(f2->multiply(ab, f2->inverse(ab))));
  EXPECT_THROW(f2->from_json("\"ac\""), InputError);
}

TEST(GroupModels, AxiomsHoldOnSamples) {
  const std::vector<GroupPtr> groups{
      integer_lattice(3), free_group(2),
      table_group({{0, 1, 2}, {1, 2, 0}, {2, 0, 1}}),
      direct_product({integer_lattice(1), free_group(1)}),
      free_product_group({table_group({{0, 1}, {1, 0}}), table_group({{0, 1}, {1, 0}})})};
  for (const auto& g : groups) {
    const WindowPtr w = window_of(g, 3);
    ElementSet elements;
    for (PointIndex p = 0; p < w->size(); ++p) elements.push_back(w->element(p));
    EXPECT_TRUE(check_group_axioms(*g, elements, 2000, 1).ok) << g->name();
    for (const auto& e : elements) EXPECT_EQ(g->from_json(g->to_json(e)), e) << g->name();
  }
}

TEST(GroupModels, TableGroupRejectsNonGroups) {
  EXPECT_THROW(table_group({{0, 1}, {1, 1}}), InputError);
  EXPECT_THROW(table_group({{0, 1, 2}, {1, 0, 2}, {2, 2, 0}}), InputError);
  EXPECT_THROW(table_group({{0, 5}, {1, 0}}), InputError);
}

TEST(GroupModels, InfiniteDihedralAsFreeProduct) {
  // Z/2 * Z/2: the ball of radius n has 2n + 1 elements.
  const GroupPtr z2 = table_group({{0, 1}, {1, 0}});
  const GroupPtr d = free_product_group({z2, z2});
  for (std::int64_t n = 0; n <= 6; ++n) EXPECT_EQ(window_of(d, n)->size(), static_cast<std::size_t>(2 * n + 1));
}

/// Weighted norms on Z^2 by Bellman-Ford relaxation on a box.
std::map<std::pair<int, int>, std::int64_t> box_norms(const std::vector<std::tuple<int, int, int>>& gens, int half) {
  std::map<std::pair<int, int>, std::int64_t> d;
  const std::int64_t inf = 1'000'000;
  for (int x = -half; x <= half; ++x) {
    for (int y = -half; y <= half; ++y) d[{x, y}] = inf;
  }
  d[{0, 0}] = 0;
  bool changed = true;
  while (changed) {
    changed = false;
    for (auto& [p, v] : d) {
      if (v == inf) continue;
      for (auto [gx, gy, w] : gens) {
        for (int s : {1, -1}) {
          auto it = d.find({p.first + s * gx, p.second + s * gy});
          if (it != d.end() && it->second > v + w) {
            it->second = v + w;
            changed = true;
          }
        }
      }
    }
  }
  return d;
}

TEST(CayleyWindowProperty, WeightedLatticeNormsMatchRelaxation) {
  const GroupPtr z2 = integer_lattice(2);
  const std::vector<std::tuple<int, int, int>> gens{{1, 0, 2}, {0, 1, 3}, {1, 1, 4}};
  std::vector<WeightedGenerator> weighted;
  for (auto [x, y, w] : gens) weighted.push_back({{x, y}, Rational(w)});
  const WeightedGeneratingSet set(z2, weighted);
  EXPECT_EQ(set.generators().size(), 6u);
  EXPECT_EQ(set.min_weight(), Rational(2));
  const CayleyWindow window(set, 12);
  const auto oracle = box_norms(gens, 12);
  std::size_t inside = 0;
  for (const auto& [p, v] : oracle) {
    if (v > 12) continue;
    ++inside;
    const auto idx = window.index_of({p.first, p.second});
    ASSERT_TRUE(idx.has_value());
    EXPECT_EQ(window.point_norm(*idx), Rational(v));
  }
  EXPECT_EQ(window.size(), inside);
  EXPECT_TRUE(check_left_invariance(window, 0, 1).ok);
  EXPECT_TRUE(check_norm_symmetry(window).ok);
  EXPECT_TRUE(validate_metric(*window.space()).valid);
}

TEST(CayleyWindow, RejectsBadGeneratingSets) {
  const GroupPtr z = integer_lattice(1);
  EXPECT_THROW(WeightedGeneratingSet(z, {{{0}, Rational(1)}}), InputError);
  EXPECT_THROW(WeightedGeneratingSet(z, {{{1}, Rational(0)}}), InputError);
  EXPECT_THROW(WeightedGeneratingSet(z, {{{1}, Rational(1)}, {{-1}, Rational(2)}}, false), InputError);
}

TEST(CayleyWindow, NormLimitAndTranslation) {
  const CayleyWindow window(WeightedGeneratingSet::standard(integer_lattice(1)), 3, 1000, Rational(5));
  EXPECT_EQ(window.norm({5}), Rational(5));
  EXPECT_THROW(static_cast<void>(window.norm({9})), WindowExhausted);
  EXPECT_EQ(window.translate({1}, {window.require({0})}), (PointSet{window.require({1})}));
  EXPECT_THROW(static_cast<void>(window.translate({1}, {window.require({3})})), WindowExhausted);
}

TEST(Homomorphisms, ProjectionIsAHomomorphism) {
  const GroupPtr z3 = integer_lattice(3);
  const Homomorphism f = coordinate_projection(z3, {2, 0});
  EXPECT_EQ(f({1, 2, 3}), (Element{3, 1}));
  const WindowPtr w = window_of(z3, 3);
  ElementSet elements;
  for (PointIndex p = 0; p < w->size(); ++p) elements.push_back(w->element(p));
  EXPECT_TRUE(check_homomorphism(f, elements, 500, 2).ok);
  Homomorphism squash = f;
  squash.map = [](const Element& g) { return Element{g[0] * g[0], 0}; };
  EXPECT_FALSE(check_homomorphism(squash, elements, 500, 2).ok);
  EXPECT_EQ(trivial_homomorphism(z3)({4, 5, 6}), Element{});
}

TEST(Actions, StabilizerAndRho) {
  const GroupPtr z2 = integer_lattice(2);
  const WindowPtr g = window_of(z2, 6);
  const Homomorphism f = coordinate_projection(z2, {1});
  const WindowPtr h = window_of(f.target, 6);
  const GroupAction action = hom_action(f, h);
  EXPECT_TRUE(check_action_isometric(*g, action, 1000, 3).ok);
  const PointIndex e = h->require({0});
  // W_1(e): second coordinate in [-1, 1] within the radius-6 ball.
  std::size_t expected = 0;
  for (PointIndex p = 0; p < g->size(); ++p) expected += std::abs(g->element(p)[1]) <= 1;
  EXPECT_EQ(r_stabilizer(*g, action, e, 1).size(), expected);
  const Modulus exact = rho_exact(g->generators(), action, e, 10);
  const Modulus weights = rho_from_weights(g->generators(), action, e);
  for (std::int64_t n = 0; n <= 10; ++n) {
    EXPECT_EQ(exact(Length(n)), Length(n));
    EXPECT_GE(weights(Length(n)), exact(Length(n)));
  }
}

TEST(RhoExactProperty, MatchesKnapsackByHand) {
  // Weights 2 and 3 with displacements 1 and 3 (Z^2 -> Z keeping y, with a
  // generator (0,3) of weight 3).
  const GroupPtr z2 = integer_lattice(2);
  const WeightedGeneratingSet set(z2, {{{1, 0}, Rational(1)}, {{0, 1}, Rational(2)}, {{0, 3}, Rational(3)}});
  const Homomorphism f = coordinate_projection(z2, {1});
  const WindowPtr h = window_of(f.target, 40);
  const GroupAction action = hom_action(f, h);
  const Modulus rho = rho_exact(set, action, h->require({0}), 20);
  std::vector<std::int64_t> best(21, 0);
  for (int n = 1; n <= 20; ++n) {
    best[n] = best[n - 1];
    if (n >= 2) best[n] = std::max(best[n], best[n - 2] + 1);
    if (n >= 3) best[n] = std::max(best[n], best[n - 3] + 3);
  }
  for (int n = 0; n <= 20; ++n) EXPECT_EQ(rho(Length(n)), Length(best[n])) << n;
}

TEST(Extension, LatticeOverLine) {
  const GroupPtr z2 = integer_lattice(2);
  const WindowPtr g = window_of(z2, 10);
  const Homomorphism f = coordinate_projection(z2, {1});
  const WindowPtr h = window_of(f.target, 10);
  const ScaleSequence scales({1, 2, 3});
  const ExtensionResult r =
      extension_cover(g, f, h, coordinate_kernel_provider(g, f, h, 0), integer_window_oracle(h), scales);
  EXPECT_TRUE(r.report.ok) << r.report.summary(*g->space());
  EXPECT_TRUE(verify_apc_witness(*g->space(), scales.fresh(), r.fibering.witness).ok);
  EXPECT_TRUE(r.audit->consistent);
  EXPECT_FALSE(r.audit->bounds.empty());
  Length largest(0);
  for (const auto& [key, bound] : r.audit->bounds) largest = max(largest, bound);
  EXPECT_LE(r.audit->max_mesh, largest);
}

TEST(ProductGroups, DirectAndFiberedAgree) {
  const ApcOracle ox = integer_window_oracle(window_of(integer_lattice(1), 8));
  const ApcOracle oy = integer_window_oracle(window_of(integer_lattice(1), 8));
  const GroupProductResult r = product_cover_groups(ox, oy, ScaleSequence({1, 2, 2, 4}));
  EXPECT_TRUE(r.direct_report.ok);
  EXPECT_TRUE(r.fibered_report.ok);
  EXPECT_TRUE(r.slots_match) << r.mismatch;
}

TEST(FreeGroupCover, SmallWindow) {
  const FreeGroupCoverResult r = free_product_cover_groups(5, 5, ScaleSequence({1}));
  EXPECT_TRUE(r.report.ok) << r.report.summary(*r.group_window->space());
  EXPECT_TRUE(r.embedding.ok) << r.embedding.detail;
  EXPECT_TRUE(r.words.v.ok());
  EXPECT_TRUE(verify_apc_witness(*r.group_window->space(), ScaleSequence({1}), r.witness).ok);
}

}  // namespace
}  // namespace coarse
