// Acceptance run: one PASS/FAIL line per criterion, each under a wall-clock
// limit. Exit status is 0 only if every criterion passes.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <deque>
#include <functional>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "coarse/combinators.hpp"
#include "coarse/cover.hpp"
#include "coarse/error.hpp"
#include "coarse/free_product.hpp"
#include "coarse/generators.hpp"
#include "coarse/groups.hpp"
#include "coarse/oracles.hpp"
#include "coarse/solver.hpp"
#include "coarse/tree.hpp"
#include "commands.hpp"

namespace {

using namespace coarse;

struct Outcome {
  bool ok = true;
  std::string detail;
};

/// Collects the first few failures of a criterion.
class Checker {
 public:
  void expect(bool condition, const std::string& what) {
    if (condition) return;
    ++failures_;
    if (failures_ <= 3) notes_ += (notes_.empty() ? "" : "; ") + what;
  }
  void note(const std::string& what) { info_ += (info_.empty() ? "" : ", ") + what; }
  [[nodiscard]] Outcome outcome() const {
    if (failures_ == 0) return {true, info_};
    return {false, std::to_string(failures_) + " failure(s): " + notes_};
  }

 private:
  std::size_t failures_ = 0;
  std::string notes_;
  std::string info_;
};

// 1. Metric substrate --------------------------------------------------------

SpacePtr three_point_base() {
  return with_basepoint(matrix_space({"x0", "a", "b"}, {{Length(0), Length(1), Length(2)},
                                                        {Length(1), Length(0), Length(2)},
                                                        {Length(2), Length(2), Length(0)}}),
                        0);
}

Outcome metric_substrate() {
  Checker c;
  std::vector<std::pair<std::string, SpacePtr>> spaces{
      {"grid 100x100", grid_space({100, 100})},
      {"grid 10x10x10", grid_space({10, 10, 10})},
      {"grid 2^13", grid_space(std::vector<std::int64_t>(13, 2))},
      {"interval", interval_space(-500, 500)},
      {"path 1/3", path_space(2000, Rational(1, 3))},
      {"cycle", cycle_space(999)},
      {"star", star_space(300)},
      {"hypercubes", hypercube_union(6)},
      {"random graph", random_graph_space(200, 7)},
  };
  for (TreeShape shape :
       {TreeShape::recursive, TreeShape::caterpillar, TreeShape::broom, TreeShape::star, TreeShape::binary}) {
    spaces.emplace_back("tree 5000", random_tree(5000, 11, shape).as_space());
  }
  const FreeProductWindow words(three_point_base(), 13, 13, 1000);
  c.expect(words.size() <= 1000, "free-product window exceeds 10^3 words");
  spaces.emplace_back("free product " + std::to_string(words.size()) + " words", words.space());
  for (const auto& [name, space] : spaces) {
    const MetricReport report = validate_metric(*space);
    c.expect(report.valid, name + " failed validate_metric");
  }
  const SpacePtr l2 = product_space(interval_space(0, 3), interval_space(0, 4), ProductMetric::l2);
  const Length d = l2->dist(l2->index_of("(0,0)"), l2->index_of("(3,4)"));
  c.expect(d.is_rational() && d == Length(5), "3-4-5 product distance is " + d.to_string());
  c.note(std::to_string(spaces.size()) + " spaces");
  return c.outcome();
}

// 2. Exact solver --------------------------------------------------------------

Outcome exact_solver() {
  Checker c;
  const std::vector<std::pair<std::string, SpacePtr>> fixed{{"path of 5", path_space(5)},
                                                            {"{0,1}^2", grid_space({2, 2})}};
  for (const auto& [name, space] : fixed) {
    const SolveResult r = min_families_at_scale(*space, 1, Length(0));
    c.expect(r.families == 2, name + ": " + std::to_string(r.families) + " families");
    c.expect(r.negative.has_value() && r.negative->scales.size() == 1, name + ": no certificate at n=1");
    if (r.negative) {
      const ReplayResult replay = replay_negative_certificate(*space, *r.negative);
      c.expect(replay.replayed && replay.confirmed, name + ": certificate does not replay");
    }
  }
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 2 + rng() % 11;
    const SpacePtr space = random_graph_space(n, rng());
    const Rational r(1 + static_cast<std::int64_t>(rng() % 3));
    const Length bound(static_cast<std::int64_t>(rng() % 4));
    const SolveResult exact = min_families_at_scale(*space, r, bound);
    const SolveResult greedy = greedy_families_at_scale(*space, r, bound, rng());
    c.expect(greedy.families >= exact.families, "greedy beat exact on trial " + std::to_string(trial));
    CoverWitness w;
    for (const auto& f : greedy.cover) w.entries.push_back({r, f, bound});
    c.expect(verify_apc_witness(*space, ScaleSequence({r}), w).ok, "greedy witness invalid");
  }
  c.note("100 random instances");
  return c.outcome();
}

// 3. Product combinator -------------------------------------------------------

std::pair<std::int64_t, std::int64_t> coordinates(const std::string& label) {
  std::int64_t a = 0;
  std::int64_t b = 0;
  std::sscanf(label.c_str(), "(%ld,%ld)", &a, &b);
  return {a, b};
}

Length actual_mesh(const FiniteMetricSpace& space, const Family& f) {
  Length m(0);
  for (const auto& s : f.sets) m = max(m, set_diameter(space, s));
  return m;
}

Outcome product_combinator() {
  Checker c;
  const SpacePtr x = interval_space(0, 64);
  const SpacePtr y = interval_space(0, 64);
  const ApcOracle ox = interval_oracle(x);
  const ApcOracle oy = interval_oracle(y);
  const ScaleSequence scales({1, 2, 4, 8, 16});
  const ProductResult result = product_cover(ox, oy, scales, ProductMetric::l2);
  const FiniteMetricSpace& xy = *result.space;
  c.expect(verify_apc_witness(xy, scales.fresh(), result.witness).ok, "verify_apc_witness rejected the product");

  // Re-derive the factor covers the combinator consumed.
  const CoverWitness v = oy(ScaleSequence(result.log.diagonal));
  std::size_t nonempty = 0;
  for (std::size_t t = 1; t <= result.witness.size(); ++t) {
    const Family& slot = result.witness.entries[t - 1].family;
    if (slot.sets.empty()) continue;
    ++nonempty;
    const auto [i, j] = triangular_inverse(t);
    const CoverWitness u = ox(column_stream(scales, i));
    const Rational mesh_u = actual_mesh(*x, u.entries.at(j - 1).family).square();
    const Rational mesh_v = actual_mesh(*y, v.entries.at(i - 1).family).square();
    const Rational r = scales.at(t);
    // Integer coordinates make the l2 checks exact without the library metric.
    std::vector<std::vector<std::pair<std::int64_t, std::int64_t>>> members;
    for (const auto& w : slot.sets) {
      members.emplace_back();
      std::int64_t lox = INT64_MAX, hix = INT64_MIN, loy = INT64_MAX, hiy = INT64_MIN;
      for (PointIndex p : w) {
        const auto q = coordinates(xy.label(p));
        members.back().push_back(q);
        lox = std::min(lox, q.first);
        hix = std::max(hix, q.first);
        loy = std::min(loy, q.second);
        hiy = std::max(hiy, q.second);
      }
      const Rational diam2((hix - lox) * (hix - lox) + (hiy - loy) * (hiy - loy));
      c.expect(diam2 <= mesh_u + mesh_v, "slot " + std::to_string(t) + ": diam^2 above mesh_u^2 + mesh_v^2");
    }
    const Rational r2 = r * r;
    for (std::size_t a = 0; a < members.size(); ++a) {
      for (std::size_t b = a + 1; b < members.size(); ++b) {
        for (const auto& p : members[a]) {
          for (const auto& q : members[b]) {
            const std::int64_t dx = p.first - q.first;
            const std::int64_t dy = p.second - q.second;
            if (Rational(dx * dx + dy * dy) <= r2) {
              c.expect(false, "slot " + std::to_string(t) + " is not R_t-disjoint");
              goto next_slot;
            }
          }
        }
      }
    }
  next_slot:;
  }
  c.note(std::to_string(nonempty) + " nonempty slots on " + std::to_string(xy.size()) + " points");
  return c.outcome();
}

// 4. Tree cover -----------------------------------------------------------------

/// Smallest distance between points of different members, by a BFS that
/// keeps the two nearest distinct members per vertex.
std::int64_t member_separation(const RootedTree& tree, const Family& f) {
  constexpr std::int64_t inf = INT64_MAX / 4;
  const std::size_t n = tree.size();
  std::vector<std::array<std::pair<std::int64_t, std::int64_t>, 2>> best(
      n, {std::make_pair(inf, std::int64_t{-1}), std::make_pair(inf, std::int64_t{-1})});
  std::deque<std::tuple<std::uint32_t, std::int64_t, std::int64_t>> queue;  // vertex, distance, member
  for (std::size_t m = 0; m < f.sets.size(); ++m) {
    for (PointIndex p : f.sets[m]) {
      best[p][0] = {0, static_cast<std::int64_t>(m)};
      queue.emplace_back(p, 0, m);
    }
  }
  std::vector<std::vector<std::uint32_t>> adj(n);
  for (const auto& [a, b] : tree.edges()) {
    adj[a].push_back(b);
    adj[b].push_back(a);
  }
  while (!queue.empty()) {
    const auto [v, d, m] = queue.front();
    queue.pop_front();
    for (std::uint32_t w : adj[v]) {
      auto& slot = best[w];
      if (slot[0].second == m || slot[1].second == m) continue;
      if (d + 1 < slot[0].first) {
        slot[1] = slot[0];
        slot[0] = {d + 1, m};
      } else if (d + 1 < slot[1].first) {
        slot[1] = {d + 1, m};
      } else {
        continue;
      }
      queue.emplace_back(w, d + 1, m);
    }
  }
  std::int64_t out = inf;
  for (const auto& slot : best) {
    if (slot[1].second >= 0) out = std::min(out, slot[0].first + slot[1].first);
  }
  return out;
}

/// Exact diameter of a vertex set of a tree by two farthest-point sweeps.
std::int64_t tree_set_diameter(const RootedTree& tree, const PointSet& s) {
  auto farthest = [&](std::uint32_t from) {
    std::pair<std::int64_t, std::uint32_t> best{-1, from};
    for (PointIndex p : s) best = std::max(best, {tree.distance(from, p), p});
    return best;
  };
  return farthest(farthest(s.front()).second).first;
}

Outcome tree_cover_criterion() {
  Checker c;
  std::mt19937_64 rng(99);
  const std::vector<TreeShape> shapes{TreeShape::recursive, TreeShape::caterpillar, TreeShape::broom,
                                      TreeShape::star, TreeShape::binary};
  std::uint64_t covers = 0;
  for (int t = 0; t < 200; ++t) {
    // A spread of sizes from tiny to the 5000 ceiling.
    const std::size_t n = t % 10 == 0 ? 5000 : 1 + rng() % (t % 2 == 0 ? 5000 : 200);
    const RootedTree tree = random_tree(n, rng(), shapes[t % shapes.size()]);
    for (std::int64_t r = 1; r <= 16; ++r) {
      const TreeCover cover = tree_cover(tree, r);
      ++covers;
      std::vector<char> hit(n, 0);
      const std::string where = "tree " + std::to_string(t) + " r=" + std::to_string(r);
      for (const Family* f : {&cover.even, &cover.odd}) {
        for (const auto& s : f->sets) {
          for (PointIndex p : s) hit[p] = 1;
          c.expect(tree_set_diameter(tree, s) <= 3 * r - 2, where + ": mesh above 3r-2");
        }
        c.expect(member_separation(tree, *f) > r, where + ": family not r-disjoint");
      }
      c.expect(std::count(hit.begin(), hit.end(), 0) == 0, where + ": vertex uncovered");
    }
  }
  c.note(std::to_string(covers) + " covers");
  return c.outcome();
}

// 5. Quasi-isometry inequalities -------------------------------------------------

/// Common-prefix distance computed from the base metric alone.
Rational prefix_distance(const FiniteMetricSpace& base, const Word& a, const Word& b) {
  const PointIndex x0 = *base.basepoint();
  std::size_t k = 0;
  while (k < a.size() && k < b.size() && a[k] == b[k]) ++k;
  Rational out(0);
  for (std::size_t i = k + 1; i < a.size(); ++i) out += base.dist(x0, a[i]).rational();
  for (std::size_t i = k + 1; i < b.size(); ++i) out += base.dist(x0, b[i]).rational();
  if (k < a.size() && k < b.size()) return out + base.dist(a[k], b[k]).rational();
  if (k < a.size()) return out + base.dist(x0, a[k]).rational();
  if (k < b.size()) return out + base.dist(x0, b[k]).rational();
  return out;
}

std::vector<std::int64_t> bfs_tree(const RootedTree& tree, std::uint32_t from) {
  std::vector<std::vector<std::uint32_t>> adj(tree.size());
  for (const auto& [a, b] : tree.edges()) {
    adj[a].push_back(b);
    adj[b].push_back(a);
  }
  std::vector<std::int64_t> d(tree.size(), -1);
  std::deque<std::uint32_t> q{from};
  d[from] = 0;
  while (!q.empty()) {
    const std::uint32_t v = q.front();
    q.pop_front();
    for (std::uint32_t w : adj[v]) {
      if (d[w] < 0) {
        d[w] = d[v] + 1;
        q.push_back(w);
      }
    }
  }
  return d;
}

Outcome qi_inequalities() {
  Checker c;
  const SpacePtr base = three_point_base();
  std::uint64_t pairs = 0;
  std::size_t bases = 0;
  for (std::size_t order = 1; order <= 4; ++order) {
    const FreeProductWindow window(base, order, 2 * static_cast<std::int64_t>(order));
    std::vector<PointSet> flats{{0}};
    for (PointIndex w = 0; w < window.size(); ++w) {
      const auto& kids = window.children(w);
      for (std::uint32_t mask = 1; mask < (1u << kids.size()); ++mask) {
        PointSet s;
        for (std::size_t k = 0; k < kids.size(); ++k) {
          if (mask >> k & 1u) s.push_back(kids[k]);
        }
        flats.push_back(make_point_set(s));
      }
    }
    for (const auto& flat : flats) {
      ++bases;
      for (std::int64_t m : {1, 2, 3}) {
        const ConeTree t = cone_tree(window, flat, m);
        const QiReport lib = qi_check(window, t);
        c.expect(lib.ok, "qi_check: " + lib.detail);
        Rational diameter(0);
        for (PointIndex a : flat) {
          for (PointIndex b : flat) diameter = std::max(diameter, prefix_distance(*base, window.word(a), window.word(b)));
        }
        const Rational e(1);  // smallest positive distance of the base
        for (std::uint32_t u = 1; u < t.tree.size(); ++u) {
          const auto du = bfs_tree(t.tree, u);
          for (std::uint32_t v = u + 1; v < t.tree.size(); ++v) {
            ++pairs;
            const Rational d = prefix_distance(*base, window.word(t.vertex_word[u]), window.word(t.vertex_word[v]));
            const Rational dt(du[v]);
            c.expect(d / Rational(m) - diameter / Rational(m) <= dt, "lower inequality fails");
            c.expect(dt <= d / e + Rational(3), "upper inequality fails");
          }
        }
      }
    }
  }
  c.note(std::to_string(bases) + " flat bases, " + std::to_string(pairs) + " pairs");
  return c.outcome();
}

// 6. Free-product pipeline ----------------------------------------------------------

Outcome free_product_pipeline() {
  Checker c;
  const SpacePtr base = three_point_base();
  const std::vector<std::vector<Rational>> lists{{1}, {1, 2}, {1, 1, 2}, {1, 2, 2, 3}};
  std::size_t runs = 0;
  for (std::size_t m : {1, 2, 3}) {
    for (std::int64_t l : {5, 7, 9}) {
      const FreeProductWindow window(base, m, l);
      for (const auto& list : lists) {
        const ScaleSequence scales(list);
        const FreeProductResult r = free_product_cover(window, exact_oracle(base), scales);
        const std::string where = "m=" + std::to_string(m) + " L=" + std::to_string(l);
        ++runs;
        c.expect(r.margin == r.v.threshold + r.cone_scale, where + ": margin is not R_{n+1} + M");
        c.expect(r.domain == window.domain(r.margin), where + ": domain mismatch");
        c.expect(verify_apc_witness(*window.space(), scales.fresh(), r.witness, r.domain).ok,
                 where + ": witness fails on the reduced window");
        c.expect(r.v.ok(), where + ": V certificate: " + (r.v.problems.empty() ? "" : r.v.problems.front()));
        // Re-derive the heavy-letter assignment for every word.
        for (PointIndex w = 0; w < window.size(); ++w) {
          const Word& word = window.word(w);
          std::size_t heavy = 0;
          for (std::size_t k = 0; k < word.size(); ++k) {
            if (window.letter_norm(word[k]) > r.v.threshold) heavy = k + 1;
          }
          c.expect(r.v.assignment.at(w).heavy_position == heavy, where + ": heavy letter mismatch");
          c.expect(r.v.assignment.at(w).family >= 1, where + ": word not assigned");
        }
      }
    }
  }
  c.note(std::to_string(runs) + " runs");
  return c.outcome();
}

// 7. Fibering pipeline -------------------------------------------------------------

Outcome fibering_pipeline() {
  Checker c;
  const GroupPtr z2 = integer_lattice(2);
  const auto g = std::make_shared<const CayleyWindow>(WeightedGeneratingSet::standard(z2), 32);
  const Homomorphism f = coordinate_projection(z2, {1});
  const auto h = std::make_shared<const CayleyWindow>(WeightedGeneratingSet::standard(f.target), 32);
  const ScaleSequence scales({1, 2, 3, 4});
  const ExtensionResult r =
      extension_cover(g, f, h, coordinate_kernel_provider(g, f, h, 0), integer_window_oracle(h), scales);
  c.expect(r.report.ok, "extension witness rejected: " + r.report.summary(*g->space()));
  c.expect(verify_apc_witness(*g->space(), scales.fresh(), r.fibering.witness).ok, "fresh verification failed");
  c.expect(r.audit->consistent, "fiber bound varies with the fiber");
  c.expect(!r.audit->bounds.empty(), "no bounds recorded");
  Length largest(0);
  for (const auto& [key, bound] : r.audit->bounds) largest = max(largest, bound);
  c.expect(r.audit->max_mesh <= largest, "a fiber member exceeds its recorded bound");
  c.note(std::to_string(g->size()) + " elements, " + std::to_string(r.audit->fibers) + " fibers, " +
         std::to_string(r.audit->bounds.size()) + " (M, r) bounds");
  return c.outcome();
}

// 8. Group metrics ---------------------------------------------------------------------

Outcome group_metrics() {
  Checker c;
  const GroupPtr f2 = free_group(2);
  // Reduced words by breadth-first extension.
  std::vector<std::string> layer{""};
  std::size_t total = 1;
  const std::vector<std::size_t> expected{1, 5, 17, 53};
  for (std::size_t l = 0; l <= 3; ++l) {
    if (l > 0) {
      std::vector<std::string> next;
      for (const auto& w : layer) {
        for (char ch : std::string("aAbB")) {
          const char inv = static_cast<char>(ch ^ 0x20);
          if (!w.empty() && w.back() == inv) continue;
          next.push_back(w + ch);
        }
      }
      total += next.size();
      layer = std::move(next);
    }
    const CayleyWindow window(WeightedGeneratingSet::standard(f2), static_cast<std::int64_t>(l));
    c.expect(total == expected[l], "breadth-first count wrong at L=" + std::to_string(l));
    c.expect(window.size() == expected[l], "ball of radius " + std::to_string(l) + " has " +
                                               std::to_string(window.size()) + " elements");
    c.expect(check_left_invariance(window, 0, 1).ok, "left invariance fails at L=" + std::to_string(l));
    c.expect(check_norm_symmetry(window).ok, "norm symmetry fails at L=" + std::to_string(l));
  }
  c.note("balls 1, 5, 17, 53");
  return c.outcome();
}

// 9. Hypercube demo -----------------------------------------------------------------------

/// Minimal B over every split of the cube into two families at scale r.
Length brute_force_bound(const FiniteMetricSpace& cube, const Rational& r) {
  const std::size_t n = cube.size();
  Length best(INT64_MAX / 4);
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    Length worst(0);
    for (int side = 0; side < 2 && worst < best; ++side) {
      PointSet s;
      for (PointIndex p = 0; p < n; ++p) {
        if (static_cast<int>(mask >> p & 1u) == side) s.push_back(p);
      }
      for (const auto& comp : r_components(cube, s, r)) worst = max(worst, set_diameter(cube, comp));
    }
    best = min(best, worst);
  }
  return best;
}

Outcome hypercube_demo_criterion() {
  Checker c;
  const cli::HypercubeDemo first = cli::hypercube_demo(4, 2, 2, 1);
  const cli::HypercubeDemo second = cli::hypercube_demo(4, 2, 2, 1);
  c.expect(first.ok, "demo reports problems");
  c.expect(first.rows.size() == 4, "expected rows for n = 1..4");
  const SpacePtr all = hypercube_union(4);
  for (const auto& row : first.rows) {
    c.expect(row.exact_verified && row.greedy_verified, "witness not verified at n=" + std::to_string(row.n));
    c.expect(row.greedy_bound >= row.exact_bound, "greedy below exact at n=" + std::to_string(row.n));
    PointSet cube;
    for (PointIndex p = 0; p < all->size(); ++p) {
      if (hypercube_of(*all, p) == row.n) cube.push_back(p);
    }
    const Length oracle = brute_force_bound(*subspace(all, cube), 2);
    c.expect(row.exact_bound == oracle, "exact B differs from brute force at n=" + std::to_string(row.n));
  }
  for (bool text : {false, true}) {
    c.expect(cli::render_demo(first, text) == cli::render_demo(second, text), "reruns differ");
  }
  std::string table;
  for (const auto& row : first.rows) table += (table.empty() ? "" : " ") + row.exact_bound.to_string();
  c.note("exact B " + table);
  return c.outcome();
}

struct Criterion {
  int id;
  std::string name;
  double limit_seconds;
  std::function<Outcome()> run;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "metric substrate", 10, metric_substrate},
      {2, "exact solver", 30, exact_solver},
      {3, "product combinator", 10, product_combinator},
      {4, "tree cover", 60, tree_cover_criterion},
      {5, "quasi-isometry inequalities", 30, qi_inequalities},
      {6, "free-product pipeline", 120, free_product_pipeline},
      {7, "fibering pipeline", 60, fibering_pipeline},
      {8, "group metrics", 10, group_metrics},
      {9, "hypercube demo", 120, hypercube_demo_criterion},
  };
  int failed = 0;
  for (const auto& criterion : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome outcome;
    try {
      outcome = criterion.run();
    } catch (const std::exception& e) {
      outcome = {false, std::string("exception: ") + e.what()};
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (seconds > criterion.limit_seconds) {
      outcome.ok = false;
      outcome.detail += " (over the time limit)";
    }
    failed += outcome.ok ? 0 : 1;
    std::printf("%s %d %s: %.2f s of %.0f s; %s\n", outcome.ok ? "PASS" : "FAIL", criterion.id,
                criterion.name.c_str(), seconds, criterion.limit_seconds, outcome.detail.c_str());
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
