#include "coarse/metric_space.hpp"

#include <algorithm>
#include <random>
#include <stdexcept>

#include "coarse/error.hpp"
#include "coarse/parallel.hpp"
#include "coarse/union_find.hpp"

namespace coarse {

FiniteMetricSpace::FiniteMetricSpace(std::vector<std::string> labels, DistanceFn dist,
                                     std::optional<PointIndex> basepoint)
    : labels_(std::move(labels)), dist_(std::move(dist)), basepoint_(basepoint) {
  if (labels_.size() > UINT32_MAX) throw InputError("space: too many points");
  index_.reserve(labels_.size());
  for (std::size_t i = 0; i < labels_.size(); ++i) {
    if (!index_.emplace(labels_[i], static_cast<PointIndex>(i)).second) {
      throw InputError("space: duplicate point id '" + labels_[i] + "'");
    }
  }
  if (basepoint_ && *basepoint_ >= labels_.size()) throw InputError("space: basepoint is not a point");
}

std::optional<PointIndex> FiniteMetricSpace::find(const std::string& label) const {
  const auto it = index_.find(label);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

PointIndex FiniteMetricSpace::index_of(const std::string& label) const {
  if (auto p = find(label)) return *p;
  throw InputError("unknown point id '" + label + "'");
}

void FiniteMetricSpace::require(PointIndex p) const {
  if (p >= labels_.size()) throw InputError("unknown point index " + std::to_string(p));
}

SpacePtr make_space(std::vector<std::string> labels, DistanceFn dist, std::optional<PointIndex> basepoint) {
  return std::make_shared<const FiniteMetricSpace>(std::move(labels), std::move(dist), basepoint);
}

SpacePtr matrix_space(std::vector<std::string> labels, std::vector<std::vector<Length>> rows,
                      std::optional<PointIndex> basepoint) {
  const std::size_t n = labels.size();
  if (rows.size() != n) throw InputError("matrix: expected " + std::to_string(n) + " rows");
  auto flat = std::make_shared<std::vector<Length>>();
  flat->reserve(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    if (rows[i].size() != n) throw InputError("matrix: row " + std::to_string(i) + " has wrong length");
    flat->insert(flat->end(), rows[i].begin(), rows[i].end());
  }
  return make_space(
      std::move(labels), [flat, n](PointIndex p, PointIndex q) { return (*flat)[std::size_t{p} * n + q]; },
      basepoint);
}

SpacePtr with_basepoint(const SpacePtr& space, PointIndex basepoint) {
  space->require(basepoint);
  auto out = std::make_shared<FiniteMetricSpace>(space->labels(), space->distance_fn(), basepoint);
  out->set_generator(space->generator());
  return out;
}

SpacePtr materialize(const SpacePtr& space) {
  const std::size_t n = space->size();
  auto flat = std::make_shared<std::vector<Length>>(n * n);
  parallel_chunks(n, [&](std::size_t, std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        (*flat)[i * n + j] = space->dist(static_cast<PointIndex>(i), static_cast<PointIndex>(j));
      }
    }
  }, 16);
  auto out = make_space(
      space->labels(), [flat, n](PointIndex p, PointIndex q) { return (*flat)[std::size_t{p} * n + q]; },
      space->basepoint());
  std::const_pointer_cast<FiniteMetricSpace>(out)->set_generator(space->generator());
  return out;
}

PointSet make_point_set(std::vector<PointIndex> members) {
  std::sort(members.begin(), members.end());
  members.erase(std::unique(members.begin(), members.end()), members.end());
  return members;
}

PointSet all_points(const FiniteMetricSpace& space) {
  PointSet out(space.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = static_cast<PointIndex>(i);
  return out;
}

PointSet set_union(const PointSet& a, const PointSet& b) {
  PointSet out;
  out.reserve(a.size() + b.size());
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

PointSet set_intersection(const PointSet& a, const PointSet& b) {
  PointSet out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

bool contains(const PointSet& s, PointIndex p) { return std::binary_search(s.begin(), s.end(), p); }

Family::Family(std::vector<PointSet> members, std::string name) : label(std::move(name)) {
  for (auto& s : members) add(std::move(s));
}

void Family::add(PointSet s) {
  if (!s.empty()) sets.push_back(std::move(s));
}

void Family::canonicalize() {
  for (auto& s : sets) s = make_point_set(std::move(s));
  std::sort(sets.begin(), sets.end());
}

namespace {

void require_all(const FiniteMetricSpace& space, const PointSet& s) {
  for (PointIndex p : s) space.require(p);
}

}  // namespace

std::optional<Length> set_distance(const FiniteMetricSpace& space, const PointSet& s, const PointSet& t) {
  require_all(space, s);
  require_all(space, t);
  std::optional<Length> best;
  for (PointIndex p : s) {
    for (PointIndex q : t) {
      const Length d = space.dist(p, q);
      if (!best || d < *best) best = d;
    }
  }
  return best;
}

std::optional<PointPair> diameter_pair(const FiniteMetricSpace& space, const PointSet& s) {
  require_all(space, s);
  std::optional<PointPair> best;
  for (std::size_t i = 0; i < s.size(); ++i) {
    for (std::size_t j = i + 1; j < s.size(); ++j) {
      const Length d = space.dist(s[i], s[j]);
      if (!best || best->distance < d) best = PointPair{s[i], s[j], d};
    }
  }
  return best;
}

Length set_diameter(const FiniteMetricSpace& space, const PointSet& s) {
  const auto pair = diameter_pair(space, s);
  return pair ? pair->distance : Length{};
}

Length mesh(const FiniteMetricSpace& space, const Family& family) {
  Length out;
  for (const auto& s : family.sets) out = max(out, set_diameter(space, s));
  return out;
}

bool is_r_disjoint(const FiniteMetricSpace& space, const PointSet& s, const PointSet& t, const Rational& r) {
  require_all(space, s);
  require_all(space, t);
  const Length bound(r);
  for (PointIndex p : s) {
    for (PointIndex q : t) {
      if (!(space.dist(p, q) > bound)) return false;
    }
  }
  return true;
}

std::optional<DisjointnessViolation> family_disjointness(const FiniteMetricSpace& space, const Family& family,
                                                         const Rational& r) {
  // Flatten to (point, owner) and scan pairs with different owners.
  std::vector<std::pair<PointIndex, std::size_t>> items;
  for (std::size_t k = 0; k < family.sets.size(); ++k) {
    require_all(space, family.sets[k]);
    for (PointIndex p : family.sets[k]) items.emplace_back(p, k);
  }
  const Length bound(r);
  const std::size_t n = items.size();
  const std::size_t chunks = chunk_count(n, 64);
  std::vector<std::optional<DisjointnessViolation>> found(chunks);
  parallel_chunks(n, [&](std::size_t c, std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        if (items[i].second == items[j].second) continue;
        const Length d = space.dist(items[i].first, items[j].first);
        if (!(d > bound)) {
          found[c] = DisjointnessViolation{items[i].second, items[j].second, {items[i].first, items[j].first, d}};
          return;
        }
      }
    }
  }, 64);
  for (auto& f : found) {
    if (f) return f;
  }
  return std::nullopt;
}

std::vector<PointSet> r_components(const FiniteMetricSpace& space, const PointSet& s, const Rational& r) {
  require_all(space, s);
  const Length bound(r);
  UnionFind uf(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    for (std::size_t j = i + 1; j < s.size(); ++j) {
      if (uf.find(i) == uf.find(j)) continue;
      if (space.dist(s[i], s[j]) <= bound) uf.unite(i, j);
    }
  }
  std::vector<PointSet> out;
  for (const auto& g : uf.groups()) {
    PointSet piece;
    piece.reserve(g.size());
    for (std::size_t i : g) piece.push_back(s[i]);
    out.push_back(std::move(piece));
  }
  return out;
}

namespace {

class ReportBuilder {
 public:
  explicit ReportBuilder(MetricReport& report) : report_(report) {}

  void flag(const std::string& axiom, std::vector<PointIndex> points, std::string detail) {
    for (const auto& issue : report_.issues) {
      if (issue.axiom == axiom) return;
    }
    report_.valid = false;
    report_.issues.push_back({axiom, std::move(points), std::move(detail)});
  }

 private:
  MetricReport& report_;
};

void check_pair(const FiniteMetricSpace& space, PointIndex p, PointIndex q, ReportBuilder& out) {
  const Length d = space.dist(p, q);
  if (p == q) {
    if (d.sign() != 0) out.flag("identity", {p}, "d(p,p) = " + d.to_string());
    return;
  }
  if (d.sign() < 0) out.flag("non-negativity", {p, q}, "d = " + d.to_string());
  if (d.sign() == 0) out.flag("separation", {p, q}, "distinct points at distance 0");
  const Length back = space.dist(q, p);
  if (!(back == d)) out.flag("symmetry", {p, q}, d.to_string() + " vs " + back.to_string());
}

void check_triangle(const FiniteMetricSpace& space, PointIndex a, PointIndex b, PointIndex c, ReportBuilder& out) {
  const Length ab = space.dist(a, b);
  const Length bc = space.dist(b, c);
  const Length ac = space.dist(a, c);
  if (!sum_at_least(ab, bc, ac)) {
    out.flag("triangle", {a, b, c}, "d(a,b)+d(b,c) = " + ab.to_string() + "+" + bc.to_string() + " < d(a,c) = " + ac.to_string());
  }
  if (!sum_at_least(ab, ac, bc)) {
    out.flag("triangle", {b, a, c}, "d(b,a)+d(a,c) = " + ab.to_string() + "+" + ac.to_string() + " < d(b,c) = " + bc.to_string());
  }
  if (!sum_at_least(ac, bc, ab)) {
    out.flag("triangle", {a, c, b}, "d(a,c)+d(c,b) = " + ac.to_string() + "+" + bc.to_string() + " < d(a,b) = " + ab.to_string());
  }
}

}  // namespace

MetricReport validate_metric(const FiniteMetricSpace& space, const ValidationLimits& limits) {
  MetricReport report;
  const std::size_t n = space.size();
  if (space.basepoint() && *space.basepoint() >= n) {
    report.valid = false;
    report.issues.push_back({"basepoint", {}, "basepoint is not a point"});
  }

  // Pair axioms. Each chunk keeps its own report; the first issue per axiom
  // in chunk order wins, which keeps the output independent of threads.
  auto merge = [&](std::vector<MetricReport>& parts) {
    ReportBuilder out(report);
    for (auto& part : parts) {
      for (auto& issue : part.issues) out.flag(issue.axiom, issue.points, issue.detail);
    }
  };

  if (n <= limits.exhaustive_pairs_up_to) {
    const std::size_t chunks = chunk_count(n, 32);
    std::vector<MetricReport> parts(chunks);
    parallel_chunks(n, [&](std::size_t c, std::size_t begin, std::size_t end) {
      ReportBuilder out(parts[c]);
      for (std::size_t i = begin; i < end; ++i) {
        for (std::size_t j = i; j < n; ++j) check_pair(space, static_cast<PointIndex>(i), static_cast<PointIndex>(j), out);
      }
    }, 32);
    merge(parts);
    report.pairs_checked = n * (n + 1) / 2;
  } else {
    report.pairs_exhaustive = false;
    ReportBuilder out(report);
    std::mt19937_64 rng(limits.seed);
    std::uniform_int_distribution<PointIndex> pick(0, static_cast<PointIndex>(n - 1));
    for (std::size_t i = 0; i < n; ++i) check_pair(space, static_cast<PointIndex>(i), static_cast<PointIndex>(i), out);
    for (std::uint64_t k = 0; k < limits.sampled_pairs; ++k) check_pair(space, pick(rng), pick(rng), out);
    report.pairs_checked = n + limits.sampled_pairs;
  }

  if (n < 3) return report;
  if (n <= limits.exhaustive_triangles_up_to) {
    const std::size_t chunks = chunk_count(n, 8);
    std::vector<MetricReport> parts(chunks);
    parallel_chunks(n, [&](std::size_t c, std::size_t begin, std::size_t end) {
      ReportBuilder out(parts[c]);
      for (std::size_t i = begin; i < end; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
          for (std::size_t k = j + 1; k < n; ++k) {
            check_triangle(space, static_cast<PointIndex>(i), static_cast<PointIndex>(j), static_cast<PointIndex>(k), out);
          }
        }
      }
    }, 8);
    merge(parts);
    report.triangles_checked = static_cast<std::uint64_t>(n) * (n - 1) * (n - 2) / 6;
  } else {
    report.triangles_exhaustive = false;
    ReportBuilder out(report);
    std::mt19937_64 rng(limits.seed ^ 0x9e3779b97f4a7c15ULL);
    std::uniform_int_distribution<PointIndex> pick(0, static_cast<PointIndex>(n - 1));
    for (std::uint64_t k = 0; k < limits.sampled_triangles; ++k) {
      const PointIndex a = pick(rng);
      const PointIndex b = pick(rng);
      const PointIndex c = pick(rng);
      if (a == b || b == c || a == c) continue;
      check_triangle(space, a, b, c, out);
      ++report.triangles_checked;
    }
  }
  return report;
}

SpacePtr product_space(const SpacePtr& x, const SpacePtr& y, ProductMetric kind) {
  const std::size_t ny = y->size();
  std::vector<std::string> labels;
  labels.reserve(x->size() * ny);
  for (const auto& a : x->labels()) {
    for (const auto& b : y->labels()) labels.push_back("(" + a + "," + b + ")");
  }
  std::optional<PointIndex> base;
  if (x->basepoint() && y->basepoint()) base = static_cast<PointIndex>(*x->basepoint() * ny + *y->basepoint());
  DistanceFn dist;
  if (kind == ProductMetric::l2) {
    dist = [x, y, ny](PointIndex p, PointIndex q) {
      const Length dx = x->dist(static_cast<PointIndex>(p / ny), static_cast<PointIndex>(q / ny));
      const Length dy = y->dist(static_cast<PointIndex>(p % ny), static_cast<PointIndex>(q % ny));
      if (dx.sign() == 0) return dy;
      if (dy.sign() == 0) return dx;
      return Length::sqrt_of(dx.square() + dy.square());
    };
  } else {
    dist = [x, y, ny](PointIndex p, PointIndex q) {
      return x->dist(static_cast<PointIndex>(p / ny), static_cast<PointIndex>(q / ny)) +
             y->dist(static_cast<PointIndex>(p % ny), static_cast<PointIndex>(q % ny));
    };
  }
  return make_space(std::move(labels), std::move(dist), base);
}

SpacePtr subspace(const SpacePtr& space, const PointSet& points) {
  for (PointIndex p : points) space->require(p);
  std::vector<std::string> labels;
  labels.reserve(points.size());
  std::optional<PointIndex> base;
  for (std::size_t i = 0; i < points.size(); ++i) {
    labels.push_back(space->label(points[i]));
    if (space->basepoint() && *space->basepoint() == points[i]) base = static_cast<PointIndex>(i);
  }
  auto map = std::make_shared<const PointSet>(points);
  return make_space(
      std::move(labels), [space, map](PointIndex p, PointIndex q) { return space->dist((*map)[p], (*map)[q]); },
      base);
}

}  // namespace coarse
