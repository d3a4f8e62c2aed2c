#include "coarse/combinators.hpp"

#include <map>
#include <mutex>

#include "coarse/error.hpp"

namespace coarse {

std::size_t triangular_index(std::size_t i, std::size_t j) {
  if (i == 0 || j == 0) throw std::out_of_range("triangular_index: indices start at 1");
  const std::size_t d = i + j;
  return (d - 1) * (d - 2) / 2 + i;
}

std::pair<std::size_t, std::size_t> triangular_inverse(std::size_t k) {
  if (k == 0) throw std::out_of_range("triangular_inverse: indices start at 1");
  // Largest t with t(t+1)/2 < k; then d = t + 2 and i = k - t(t+1)/2.
  auto t = static_cast<std::size_t>(isqrt(static_cast<std::int64_t>(8 * (k - 1) + 1)));
  t = (t - 1) / 2;
  while (t * (t + 1) / 2 >= k) --t;
  while ((t + 1) * (t + 2) / 2 < k) ++t;
  const std::size_t i = k - t * (t + 1) / 2;
  const std::size_t d = t + 2;
  return {i, d - i};
}

ScaleSequence column_stream(const ScaleSequence& scales, std::size_t i) {
  return ScaleSequence::from_function([scales, i](std::size_t j) { return scales.at(triangular_index(i, j)); },
                                      "column " + std::to_string(i));
}

Modulus identity_modulus() {
  return [](const Length& t) { return t; };
}

Modulus step_modulus(const Rational& step, const Rational& gain) {
  if (step.sign() <= 0) throw InputError("step modulus: step must be positive");
  return [step, gain](const Length& t) { return Length(Rational(t.floor_div(step)) * gain); };
}

PredicateResult check_uniformly_expansive(const UniformlyExpansiveMap& map) {
  PredicateResult out;
  const auto& x = *map.source;
  const auto& y = *map.target;
  if (map.image.size() != x.size()) {
    out.ok = false;
    out.detail = "map is not defined on every source point";
    return out;
  }
  for (PointIndex p : map.image) y.require(p);
  for (PointIndex a = 0; a < x.size(); ++a) {
    for (PointIndex b = a + 1; b < x.size(); ++b) {
      const Length dy = y.dist(map.image[a], map.image[b]);
      if (dy.sign() == 0) continue;
      const Length bound = map.rho(x.dist(a, b));
      if (dy > bound) {
        out.ok = false;
        out.witness = {a, b};
        out.detail = "d(f a, f b) = " + dy.to_string() + " > rho(" + x.dist(a, b).to_string() + ") = " + bound.to_string();
        return out;
      }
    }
  }
  return out;
}

PredicateResult check_coarsely_surjective(const UniformlyExpansiveMap& map, const Rational& r) {
  PredicateResult out;
  const auto& y = *map.target;
  const PointSet image = make_point_set(map.image);
  const Length reach(r);
  for (PointIndex q = 0; q < y.size(); ++q) {
    bool near = false;
    for (PointIndex p : image) {
      if (y.dist(p, q) <= reach) {
        near = true;
        break;
      }
    }
    if (!near) {
      out.ok = false;
      out.witness = {q};
      out.detail = "no image point within " + r.to_string();
      return out;
    }
  }
  return out;
}

namespace {

void require_valid(const ApcOracle& oracle, const ScaleSequence& stream, const CoverWitness& w, const std::string& what) {
  const auto report = verify_apc_witness(*oracle.space, stream, w);
  if (!report.ok) {
    throw OracleViolation(what + " (" + oracle.name + ") returned an invalid witness: " + report.summary(*oracle.space));
  }
}

// Lazily evaluated columns of a stream: the oracle for column i is queried
// the first time the diagonal needs n_i.
class ColumnCache {
 public:
  using Query = std::function<std::size_t(std::size_t)>;  // column -> n_i
  using Scale = std::function<Rational(std::size_t, std::size_t)>;

  ColumnCache(Query query, Scale scale) : query_(std::move(query)), scale_(std::move(scale)) {}

  // Running maximum of R_{i', n_i'} over i' <= i.
  Rational diagonal(std::size_t i) {
    std::lock_guard<std::mutex> lock(mutex_);
    while (running_.size() < i) {
      const std::size_t col = running_.size() + 1;
      const std::size_t n = query_(col);
      counts_.push_back(n);
      // A column with no families contributes no constraint.
      Rational value = n == 0 ? Rational(0) : scale_(col, n);
      if (!running_.empty()) value = max(value, running_.back());
      running_.push_back(value);
    }
    return running_[i - 1];
  }

  std::size_t count(std::size_t i) {
    diagonal(i);
    std::lock_guard<std::mutex> lock(mutex_);
    return counts_[i - 1];
  }

  std::vector<Rational> diagonal_prefix() {
    std::lock_guard<std::mutex> lock(mutex_);
    return running_;
  }

 private:
  Query query_;
  Scale scale_;
  std::mutex mutex_;
  std::vector<std::size_t> counts_;
  std::vector<Rational> running_;
};

std::size_t max_index(std::size_t a, std::size_t b) { return a < b ? b : a; }

CoverWitness with_slots(std::size_t slots, const ScaleSequence& scales) {
  CoverWitness w;
  w.entries.resize(slots);
  for (std::size_t t = 1; t <= slots; ++t) w.entries[t - 1].scale = scales.at(t);
  return w;
}

Length combine_bounds(const Length& a, const Length& b, ProductMetric kind) {
  if (kind == ProductMetric::l1) return a + b;
  if (a.sign() == 0) return b;
  if (b.sign() == 0) return a;
  return Length::sqrt_of(a.square() + b.square());
}

}  // namespace

ProductResult product_cover(const ApcOracle& oracle_x, const ApcOracle& oracle_y, const ScaleSequence& scales_in,
                            ProductMetric kind) {
  const ScaleSequence scales = scales_in.fresh();
  ProductResult result;
  result.space = product_space(oracle_x.space, oracle_y.space, kind);

  std::map<std::size_t, CoverWitness> columns;
  std::mutex columns_mutex;
  auto query_column = [&](std::size_t i) {
    const ScaleSequence stream = column_stream(scales, i);
    CoverWitness w = oracle_x(stream);
    require_valid(oracle_x, stream, w, "first factor oracle");
    const std::size_t n = w.size();
    std::lock_guard<std::mutex> lock(columns_mutex);
    columns.emplace(i, std::move(w));
    return n;
  };
  ColumnCache cache(query_column, [&](std::size_t i, std::size_t n) { return scales.at(triangular_index(i, n)); });
  const ScaleSequence diagonal =
      ScaleSequence::from_function([&cache](std::size_t i) { return cache.diagonal(i); }, "product diagonal");

  const CoverWitness outer = oracle_y(diagonal);
  require_valid(oracle_y, diagonal, outer, "second factor oracle");
  const std::size_t m = outer.size();
  for (std::size_t i = 1; i <= m; ++i) cache.diagonal(i);

  std::size_t slots = 0;
  for (std::size_t i = 1; i <= m; ++i) {
    const std::size_t n = columns.at(i).size();
    result.log.column_counts.push_back(n);
    if (n > 0) slots = max_index(slots, triangular_index(i, n));
  }
  // Every slot k(i,j) with j <= n_i is below k(i, n_i).
  result.witness = with_slots(slots, scales);
  const std::size_t ny = oracle_y.space->size();
  for (std::size_t i = 1; i <= m; ++i) {
    const WitnessEntry& v_entry = outer.entries[i - 1];
    const CoverWitness& column = columns.at(i);
    for (std::size_t j = 1; j <= column.size(); ++j) {
      const WitnessEntry& u_entry = column.entries[j - 1];
      WitnessEntry& slot = result.witness.entries[triangular_index(i, j) - 1];
      for (const auto& u : u_entry.family.sets) {
        for (const auto& v : v_entry.family.sets) {
          PointSet w;
          w.reserve(u.size() * v.size());
          for (PointIndex a : u) {
            for (PointIndex b : v) w.push_back(static_cast<PointIndex>(a * ny + b));
          }
          slot.family.add(std::move(w));
        }
      }
      slot.mesh_bound = combine_bounds(u_entry.mesh_bound, v_entry.mesh_bound, kind);
    }
  }
  result.log.columns = m;
  result.log.diagonal = cache.diagonal_prefix();
  result.log.scales_consumed = scales.consumed();
  return result;
}

FiberingResult fibering_cover(const UniformlyExpansiveMap& map, const ApcOracle& oracle_y,
                              const FiberSchemeFactory& scheme_factory, const ScaleSequence& scales_in) {
  if (map.target != oracle_y.space) throw InputError("fibering: the oracle does not cover the map's target");
  if (const auto check = check_uniformly_expansive(map); !check.ok) {
    throw InputError("fibering: map is not uniformly expansive: " + check.detail);
  }
  const ScaleSequence scales = scales_in.fresh();
  FiberingResult result;

  std::map<std::size_t, FiberCoverScheme> schemes;
  std::map<std::size_t, ScaleSequence> streams;
  std::mutex mutex;
  auto query_column = [&](std::size_t i) {
    ScaleSequence stream = column_stream(scales, i);
    FiberCoverScheme scheme = scheme_factory(stream);
    const std::size_t n = scheme.family_count;
    std::lock_guard<std::mutex> lock(mutex);
    schemes.emplace(i, std::move(scheme));
    streams.emplace(i, std::move(stream));
    return n;
  };
  auto rho_scale = [&](std::size_t i, std::size_t n) {
    const Length image = map.rho(Length(scales.at(triangular_index(i, n))));
    if (image.is_rational()) return image.rational();
    return Rational(isqrt(image.square().ceil()) + 1);
  };
  ColumnCache cache(query_column, rho_scale);
  const ScaleSequence diagonal =
      ScaleSequence::from_function([&cache](std::size_t i) { return cache.diagonal(i); }, "fibering diagonal");

  const CoverWitness outer = oracle_y(diagonal);
  require_valid(oracle_y, diagonal, outer, "target oracle");
  const std::size_t m = outer.size();
  for (std::size_t i = 1; i <= m; ++i) cache.diagonal(i);

  // Preimages of target points.
  std::vector<PointSet> preimage(map.target->size());
  for (PointIndex x = 0; x < map.source->size(); ++x) preimage[map.image[x]].push_back(x);

  std::size_t slots = 0;
  for (std::size_t i = 1; i <= m; ++i) {
    const std::size_t n = schemes.at(i).family_count;
    result.log.column_counts.push_back(n);
    if (n > 0) slots = max_index(slots, triangular_index(i, n));
  }
  result.witness = with_slots(slots, scales);

  for (std::size_t i = 1; i <= m; ++i) {
    const FiberCoverScheme& scheme = schemes.at(i);
    const WitnessEntry& v_entry = outer.entries[i - 1];
    // Fibers have image diameter <= mesh bound < M.
    const Rational fiber_scale(v_entry.mesh_bound.floor_div(Rational(1)) + 1);
    FiberAudit audit;
    audit.column = i;
    audit.fiber_scale = fiber_scale;
    audit.bound = scheme.bound_for_scale(fiber_scale);
    for (const auto& v : v_entry.family.sets) {
      PointSet a;
      for (PointIndex y : v) a = set_union(a, preimage[y]);
      if (a.empty()) continue;
      ++audit.fibers;
      std::vector<Family> pieces = scheme.cover(a, fiber_scale);
      if (pieces.size() != scheme.family_count) {
        throw OracleViolation("fibering: scheme returned " + std::to_string(pieces.size()) + " families, promised " +
                              std::to_string(scheme.family_count));
      }
      PointSet seen;
      for (std::size_t j = 1; j <= pieces.size(); ++j) {
        WitnessEntry& slot = result.witness.entries[triangular_index(i, j) - 1];
        for (auto& s : pieces[j - 1].sets) {
          if (set_intersection(s, a).size() != s.size()) throw OracleViolation("fibering: scheme set leaves its fiber");
          const Length diam = set_diameter(*map.source, s);
          audit.max_mesh = max(audit.max_mesh, diam);
          if (diam > audit.bound) {
            throw OracleViolation("fibering: scheme set of diameter " + diam.to_string() + " exceeds B(" +
                                  fiber_scale.to_string() + ") = " + audit.bound.to_string());
          }
          seen = set_union(seen, s);
          slot.family.add(std::move(s));
        }
      }
      if (seen.size() != a.size()) throw OracleViolation("fibering: scheme does not cover its fiber");
    }
    for (std::size_t j = 1; j <= scheme.family_count; ++j) {
      result.witness.entries[triangular_index(i, j) - 1].mesh_bound = audit.bound;
    }
    result.audit.push_back(audit);
  }
  result.log.columns = m;
  result.log.diagonal = cache.diagonal_prefix();
  result.log.scales_consumed = scales.consumed();
  return result;
}

DecomposeResult decompose(const SpacePtr& space, std::size_t k, const DecomposableOracle& hypothesis,
                          const ScaleSequence& scales_in) {
  if (k == 0) throw InputError("decompose: k must be positive");
  const ScaleSequence scales = scales_in.fresh();
  const ScaleSequence stretched =
      ScaleSequence::from_function([scales, k](std::size_t i) { return scales.at(i * k); }, "every k-th scale");
  const std::vector<Family> families = hypothesis.families(stretched);

  DecomposeResult result;
  result.witness = with_slots(families.size() * k, scales);
  for (std::size_t i = 1; i <= families.size(); ++i) {
    const Rational r = scales.at(i * k);
    if (auto bad = family_disjointness(*space, families[i - 1], r)) {
      throw OracleViolation("decompose: hypothesis family " + std::to_string(i) + " is not " + r.to_string() +
                            "-disjoint (" + space->label(bad->pair.a) + ", " + space->label(bad->pair.b) + ")");
    }
    DecomposeAudit audit;
    audit.family_index = i;
    audit.scale = r;
    std::optional<Length> bound;
    for (const auto& u : families[i - 1].sets) {
      SubCover sub = hypothesis.subcover(i, u, r);
      if (sub.families.size() != k) {
        throw OracleViolation("decompose: subcover returned " + std::to_string(sub.families.size()) + " families, expected " +
                              std::to_string(k));
      }
      if (bound && !(*bound == sub.bound)) {
        throw OracleViolation("decompose: subcover bound varies within family " + std::to_string(i) + " (" +
                              bound->to_string() + " vs " + sub.bound.to_string() + ")");
      }
      bound = sub.bound;
      ++audit.members;
      PointSet seen;
      for (std::size_t j = 1; j <= k; ++j) {
        WitnessEntry& slot = result.witness.entries[(i - 1) * k + j - 1];
        for (auto& piece : sub.families[j - 1].sets) {
          PointSet inside = set_intersection(piece, u);
          const Length diam = set_diameter(*space, inside);
          if (diam > sub.bound) {
            throw OracleViolation("decompose: subcover piece of diameter " + diam.to_string() + " exceeds its bound " +
                                  sub.bound.to_string());
          }
          audit.max_mesh = max(audit.max_mesh, diam);
          seen = set_union(seen, inside);
          slot.family.add(std::move(inside));
        }
      }
      if (seen.size() != u.size()) throw OracleViolation("decompose: subcover misses points of its member");
    }
    audit.bound = bound.value_or(Length{});
    for (std::size_t j = 1; j <= k; ++j) result.witness.entries[(i - 1) * k + j - 1].mesh_bound = audit.bound;
    result.audit.push_back(audit);
  }
  result.scales_consumed = scales.consumed();
  return result;
}

FiberSchemeFactory fiber_scheme_from_asdim(std::size_t n, AsdimProvider provider) {
  auto shared = std::make_shared<AsdimProvider>(std::move(provider));
  return [n, shared](const ScaleSequence& stream) {
    const Rational r = stream.at(n + 1);
    FiberCoverScheme scheme;
    scheme.family_count = n + 1;
    scheme.bound_for_scale = [shared, r](const Rational& m) { return shared->bound(m, r); };
    scheme.cover = [shared, r, n](const PointSet& a, const Rational& m) {
      std::vector<Family> out = shared->cover(a, m, r);
      if (out.size() != n + 1) {
        throw OracleViolation("asdim provider returned " + std::to_string(out.size()) + " families, expected " +
                              std::to_string(n + 1));
      }
      return out;
    };
    return scheme;
  };
}

}  // namespace coarse
