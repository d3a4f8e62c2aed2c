#include "coarse/free_product.hpp"

#include <algorithm>
#include <unordered_map>

#include "coarse/error.hpp"

namespace coarse {

namespace {

Rational rational_distance(const FiniteMetricSpace& space, PointIndex a, PointIndex b) {
  const Length d = space.dist(a, b);
  if (!d.is_rational()) {
    throw InputError("free product: distance between '" + space.label(a) + "' and '" + space.label(b) +
                     "' is not rational");
  }
  return d.rational();
}

PointIndex require_basepoint(const FiniteMetricSpace& space, const char* what) {
  if (!space.basepoint()) throw InputError(std::string(what) + ": the base space needs a basepoint");
  return *space.basepoint();
}

}  // namespace

Word concat(const Word& u, const Word& v) {
  Word out = u;
  out.insert(out.end(), v.begin(), v.end());
  return out;
}

Rational word_norm(const FiniteMetricSpace& base, const Word& w) {
  const PointIndex x0 = require_basepoint(base, "word_norm");
  Rational total;
  for (PointIndex letter : w) total += rational_distance(base, x0, letter);
  return total;
}

Rational fp_distance(const FiniteMetricSpace& base, const Word& a, const Word& b) {
  const PointIndex x0 = require_basepoint(base, "fp_distance");
  std::size_t c = 0;
  while (c < a.size() && c < b.size() && a[c] == b[c]) ++c;
  auto tail = [&](const Word& w, std::size_t from) {
    Rational t;
    for (std::size_t k = from; k < w.size(); ++k) t += rational_distance(base, x0, w[k]);
    return t;
  };
  if (c == a.size()) return tail(b, c);
  if (c == b.size()) return tail(a, c);
  return rational_distance(base, a[c], b[c]) + tail(a, c + 1) + tail(b, c + 1);
}

Rational minimal_gap(const FiniteMetricSpace& space) {
  std::optional<Rational> best;
  for (PointIndex p = 0; p < space.size(); ++p) {
    for (PointIndex q = p + 1; q < space.size(); ++q) {
      const Rational d = rational_distance(space, p, q);
      if (!best || d < *best) best = d;
    }
  }
  if (!best) throw InputError("minimal_gap: the space has fewer than two points");
  if (best->sign() <= 0) throw InputError("minimal_gap: the space is not separated");
  return *best;
}

FreeProductWindow::FreeProductWindow(SpacePtr base, std::size_t max_order, Rational max_norm, std::size_t cap)
    : base_(std::move(base)), max_order_(max_order), max_norm_(max_norm), data_(std::make_shared<Data>()) {
  const FiniteMetricSpace& b = *base_;
  const PointIndex x0 = require_basepoint(b, "free product window");
  if (max_norm_.sign() < 0) throw InputError("free product window: negative norm bound");
  data_->base_dist.assign(b.size(), std::vector<Rational>(b.size()));
  for (PointIndex p = 0; p < b.size(); ++p) {
    for (PointIndex q = 0; q < b.size(); ++q) data_->base_dist[p][q] = rational_distance(b, p, q);
  }
  gap_ = b.size() >= 2 ? minimal_gap(b) : Rational(1);
  letter_norms_.resize(b.size());
  for (PointIndex p = 0; p < b.size(); ++p) {
    letter_norms_[p] = data_->base_dist[x0][p];
    if (p != x0) letters_.push_back(p);
  }

  auto& words = data_->words;
  auto& norms = data_->norms;
  auto& prefix = data_->prefix_norms;
  words.push_back({});
  norms.push_back(Rational(0));
  prefix.push_back({Rational(0)});
  parents_.push_back(kNone);
  std::size_t level_begin = 0;
  for (std::size_t order = 1; order <= max_order_; ++order) {
    const std::size_t level_end = words.size();
    for (std::size_t w = level_begin; w < level_end; ++w) {
      for (PointIndex letter : letters_) {
        const Rational n = norms[w] + letter_norms_[letter];
        if (n > max_norm_) continue;
        if (words.size() >= cap) {
          throw InputError("free product window: more than " + std::to_string(cap) + " words");
        }
        Word next = words[w];
        next.push_back(letter);
        std::vector<Rational> pn = prefix[w];
        pn.push_back(n);
        words.push_back(std::move(next));
        norms.push_back(n);
        prefix.push_back(std::move(pn));
        parents_.push_back(static_cast<PointIndex>(w));
      }
    }
    level_begin = level_end;
    if (level_begin == words.size()) break;
  }
  children_.assign(words.size(), {});
  std::vector<std::string> labels;
  labels.reserve(words.size());
  for (PointIndex w = 0; w < words.size(); ++w) {
    if (parents_[w] != kNone) children_[parents_[w]].push_back(w);
    index_.emplace(words[w], w);
    labels.push_back(label(words[w]));
  }
  std::shared_ptr<const Data> data = data_;
  space_ = make_space(
      std::move(labels),
      [data](PointIndex a, PointIndex b) {
        const Word& wa = data->words[a];
        const Word& wb = data->words[b];
        std::size_t c = 0;
        while (c < wa.size() && c < wb.size() && wa[c] == wb[c]) ++c;
        const Rational& na = data->norms[a];
        const Rational& nb = data->norms[b];
        if (c == wa.size()) return Length(nb - data->prefix_norms[b][c]);
        if (c == wb.size()) return Length(na - data->prefix_norms[a][c]);
        return Length(data->base_dist[wa[c]][wb[c]] + (na - data->prefix_norms[a][c + 1]) +
                      (nb - data->prefix_norms[b][c + 1]));
      },
      PointIndex{0});
}

std::optional<PointIndex> FreeProductWindow::find(const Word& w) const {
  auto it = index_.find(w);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

Rational FreeProductWindow::distance(PointIndex a, PointIndex b) const { return space_->dist(a, b).rational(); }

std::string FreeProductWindow::label(const Word& w) const {
  std::string out = "[";
  for (std::size_t k = 0; k < w.size(); ++k) {
    if (k) out += ",";
    out += base_->label(w[k]);
  }
  return out + "]";
}

PointSet FreeProductWindow::domain(const Rational& margin) const {
  const Rational limit = max_norm_ - margin;
  PointSet out;
  for (PointIndex w = 0; w < size(); ++w) {
    if (data_->norms[w] <= limit) out.push_back(w);
  }
  return out;
}

PointSet FreeProductWindow::cone(const PointSet& a, const Rational& r) const {
  std::vector<char> in(size(), 0);
  std::vector<PointIndex> queue(a.begin(), a.end());
  for (PointIndex w : a) in.at(w) = 1;
  for (std::size_t k = 0; k < queue.size(); ++k) {
    const PointIndex w = queue[k];
    for (PointIndex c : children_[w]) {
      if (!in[c] && letter_norms_[data_->words[c].back()] <= r) {
        in[c] = 1;
        queue.push_back(c);
      }
    }
  }
  return make_point_set(std::move(queue));
}

bool is_flat(const FreeProductWindow& window, const PointSet& a) {
  if (a.empty()) return false;
  const Word& first = window.word(a.front());
  if (first.empty()) return false;
  for (PointIndex w : a) {
    const Word& word = window.word(w);
    if (word.size() != first.size()) return false;
    if (!std::equal(first.begin(), first.end() - 1, word.begin())) return false;
  }
  return true;
}

namespace {

bool is_empty_word_set(const FreeProductWindow& window, const PointSet& a) {
  return a.size() == 1 && window.order(a.front()) == 0;
}

}  // namespace

ConeTree cone_tree(const FreeProductWindow& window, const PointSet& base, const Rational& m, const PointSet* within) {
  if (!is_flat(window, base) && !is_empty_word_set(window, base)) {
    throw InputError("cone_tree: the base must be flat or the empty word");
  }
  if (m.sign() <= 0) throw InputError("cone_tree: M must be positive");
  PointSet cone = window.cone(base, m);
  if (within) {
    // Keep the words of `within` in the cone and their prefixes down to the base.
    std::vector<char> keep(window.size(), 0);
    for (PointIndex b : base) keep[b] = 1;
    for (PointIndex w : *within) {
      if (!contains(cone, w)) continue;
      for (PointIndex v = w; !keep[v]; v = window.parent(v)) keep[v] = 1;
    }
    PointSet kept;
    for (PointIndex w : cone) {
      if (keep[w]) kept.push_back(w);
    }
    cone = std::move(kept);
  }
  ConeTree out{RootedTree({"root"}, {RootedTree::kNone}), {}, window.gap(), Rational(0), m};
  std::unordered_map<PointIndex, std::uint32_t> vertex;
  std::vector<std::string> labels{"root"};
  std::vector<std::uint32_t> parent{RootedTree::kNone};
  out.vertex_word.push_back(FreeProductWindow::kNone);
  // Cone words are sorted by index, so parents come first.
  for (PointIndex w : cone) {
    const std::uint32_t v = static_cast<std::uint32_t>(labels.size());
    vertex.emplace(w, v);
    labels.push_back(window.space()->label(w));
    parent.push_back(contains(base, w) ? 0 : vertex.at(window.parent(w)));
    out.vertex_word.push_back(w);
  }
  out.tree = RootedTree(std::move(labels), std::move(parent));
  out.base_diameter = set_diameter(*window.space(), base).rational();
  return out;
}

QiReport qi_check(const FreeProductWindow& window, const ConeTree& t) {
  QiReport report;
  const std::size_t n = t.tree.size();
  for (std::uint32_t u = 1; u < n && report.ok; ++u) {
    for (std::uint32_t v = u + 1; v < n; ++v) {
      ++report.pairs;
      const Rational d = window.distance(t.vertex_word[u], t.vertex_word[v]);
      const Rational dt(t.tree.distance(u, v));
      const bool upper = d - t.base_diameter <= t.m * dt;
      const bool lower = t.gap * dt <= d + t.gap * Rational(3);
      if (!upper || !lower) {
        report.ok = false;
        report.violation = {t.vertex_word[u], t.vertex_word[v]};
        report.detail = std::string(upper ? "lower" : "upper") + " bound fails for " + t.tree.label(u) + ", " +
                        t.tree.label(v) + ": d = " + d.to_string() + ", tree distance " + dt.to_string();
        break;
      }
    }
  }
  return report;
}

std::int64_t cone_tree_scale(const Rational& gap, const Rational& r) { return (r / gap + Rational(3)).ceil(); }

Length cone_cover_bound(const Rational& gap, const Rational& m, const Rational& r, const Rational& d) {
  return Length(m * Rational(3 * cone_tree_scale(gap, r)) + d);
}

ConeCover cone_cover(const FreeProductWindow& window, const PointSet& base, const Rational& m, const Rational& r,
                     const std::optional<Rational>& base_bound, const PointSet* within) {
  const ConeTree t = cone_tree(window, base, m, within);
  if (base_bound && t.base_diameter > *base_bound) {
    throw InputError("cone_cover: base diameter " + t.base_diameter.to_string() + " exceeds the bound " +
                     base_bound->to_string());
  }
  ConeCover out;
  out.tree_scale = cone_tree_scale(window.gap(), r);
  out.mesh_bound = cone_cover_bound(window.gap(), m, r, base_bound.value_or(t.base_diameter));
  out.even.label = "even";
  out.odd.label = "odd";
  for (std::size_t v = 1; v < t.vertex_word.size(); ++v) out.cone.push_back(t.vertex_word[v]);
  out.cone = make_point_set(std::move(out.cone));
  const TreeCover tc = tree_cover(t.tree, Rational(out.tree_scale));
  auto pull = [&](const Family& from, Family& to) {
    for (const auto& set : from.sets) {
      PointSet words;
      for (PointIndex v : set) {
        if (v != 0) words.push_back(t.vertex_word[v]);
      }
      to.add(make_point_set(std::move(words)));
    }
  };
  pull(tc.even, out.even);
  pull(tc.odd, out.odd);
  return out;
}

ComponentCore component_core(const FreeProductWindow& window, const PointSet& component, const Rational& m,
                             const Rational& r, const Rational& d, const Rational& margin) {
  ComponentCore out;
  if (component.empty()) return out;
  std::size_t lowest = SIZE_MAX;
  for (PointIndex w : component) lowest = std::min(lowest, window.order(w));
  for (PointIndex w : component) {
    if (window.order(w) == lowest) out.core.push_back(w);
  }
  out.flat = is_flat(window, out.core) || is_empty_word_set(window, out.core);
  const PointSet reach = window.cone(out.core, m + r + d);
  const Rational limit = window.max_norm() - margin;
  for (PointIndex w : component) {
    if (contains(reach, w)) continue;
    out.outside.push_back(w);
    if (window.norm(w) > limit) out.artifacts.push_back(w);
  }
  return out;
}

VFamilies build_v_families(const FreeProductWindow& window, const CoverWitness& base_cover,
                           const ScaleSequence& scales) {
  const FiniteMetricSpace& base = *window.base();
  const std::size_t n = base_cover.size();
  VFamilies out;
  out.threshold = scales.at(n + 1);
  const Rational& t = out.threshold;

  // member_of[i][x][u]: member of V_{i+1} holding x.u for the first set of U_{i+1} containing u.
  std::vector<std::unordered_map<std::uint64_t, std::size_t>> member_of(n);
  auto key = [](PointIndex x, std::size_t set) { return (static_cast<std::uint64_t>(x) << 32) | set; };
  for (std::size_t i = 0; i < n; ++i) {
    const WitnessEntry& entry = base_cover.entries[i];
    Family v;
    v.label = "V" + std::to_string(i + 1);
    for (PointIndex x = 0; x < window.size(); ++x) {
      for (std::size_t s = 0; s < entry.family.sets.size(); ++s) {
        PointSet member;
        for (PointIndex u : entry.family.sets[s]) {
          if (u >= base.size()) throw InputError("free product: base cover names an unknown point");
          if (window.letter_norm(u) <= t) continue;
          if (auto w = window.find(concat(window.word(x), {u}))) member.push_back(*w);
        }
        if (member.empty()) continue;
        member_of[i].emplace(key(x, s), v.sets.size());
        v.sets.push_back(make_point_set(std::move(member)));
      }
    }
    out.families.push_back(std::move(v));
    out.member_bounds.push_back(rational_upper(entry.mesh_bound));
  }
  out.families.push_back(Family({PointSet{0}}));
  out.families.back().label = "V" + std::to_string(n + 1);
  out.member_bounds.push_back(Rational(0));

  for (std::size_t i = 0; i < n; ++i) {
    const Family& v = out.families[i];
    const Rational r = scales.at(i + 1);
    if (auto bad = family_disjointness(*window.space(), v, r)) {
      out.disjoint_ok = false;
      out.problems.push_back("V" + std::to_string(i + 1) + " is not " + r.to_string() + "-disjoint at " +
                             window.space()->label(bad->pair.a) + ", " + window.space()->label(bad->pair.b));
    }
    for (const auto& member : v.sets) {
      if (!is_flat(window, member)) {
        out.flat_ok = false;
        out.problems.push_back("V" + std::to_string(i + 1) + " has a member that is not flat");
        break;
      }
    }
    const Length m = mesh(*window.space(), v);
    if (m > Length(out.member_bounds[i])) {
      out.bounded_ok = false;
      out.problems.push_back("V" + std::to_string(i + 1) + " has mesh " + m.to_string() + " above " +
                             out.member_bounds[i].to_string());
    }
  }

  // Every word lies in the R_{n+1}-cone of the member chosen by its last heavy letter.
  out.assignment.resize(window.size());
  for (PointIndex w = 0; w < window.size(); ++w) {
    const Word& word = window.word(w);
    std::size_t heavy = 0;
    for (std::size_t k = word.size(); k-- > 0;) {
      if (window.letter_norm(word[k]) > t) {
        heavy = k + 1;
        break;
      }
    }
    VFamilies::Assignment& a = out.assignment[w];
    a.heavy_position = heavy;
    if (heavy == 0) {
      a.family = n + 1;
      a.member = 0;
      continue;
    }
    const Word x(word.begin(), word.begin() + static_cast<std::ptrdiff_t>(heavy - 1));
    const PointIndex u = word[heavy - 1];
    const PointIndex xi = *window.find(x);
    const PointIndex xu = *window.find(concat(x, {u}));
    bool found = false;
    for (std::size_t i = 0; i < n && !found; ++i) {
      const auto& sets = base_cover.entries[i].family.sets;
      for (std::size_t s = 0; s < sets.size() && !found; ++s) {
        if (!contains(sets[s], u)) continue;
        auto it = member_of[i].find(key(xi, s));
        if (it == member_of[i].end() || !contains(out.families[i].sets[it->second], xu)) continue;
        a.family = i + 1;
        a.member = it->second;
        found = true;
      }
    }
    if (!found && out.coverage_ok) {
      out.coverage_ok = false;
      out.problems.push_back("word " + window.space()->label(w) + " is not assigned to any V member");
    }
  }
  // The same statement by cones: the R_{n+1}-cones of the unions cover the window.
  std::vector<char> covered(window.size(), 0);
  for (const auto& v : out.families) {
    PointSet all;
    for (const auto& s : v.sets) all = set_union(all, s);
    for (PointIndex w : window.cone(all, t)) covered[w] = 1;
  }
  if (std::find(covered.begin(), covered.end(), 0) != covered.end() && out.coverage_ok) {
    out.coverage_ok = false;
    out.problems.push_back("the cones of the V families miss a word");
  }
  return out;
}

FreeProductResult free_product_cover(const FreeProductWindow& window, const ApcOracle& base_oracle,
                                     const ScaleSequence& scales, const std::optional<Rational>& margin) {
  if (base_oracle.space.get() != window.base().get()) {
    throw InputError("free_product_cover: the oracle is for a different base space");
  }
  struct State {
    std::size_t n = 0;
    Rational m;
    Rational margin;
    std::vector<Rational> d;
    VFamilies v;
    std::size_t artifacts = 0;
  };
  auto state = std::make_shared<State>();
  const SpacePtr& space = window.space();

  DecomposableOracle hypothesis;
  hypothesis.families = [&window, &base_oracle, state, margin, space](const ScaleSequence& s) {
    const CoverWitness base_cover = base_oracle(s);
    const VerificationReport base_report = verify_apc_witness(*window.base(), s, base_cover);
    if (!base_report.ok) {
      throw OracleViolation("free_product_cover: base oracle '" + base_oracle.name +
                            "' returned an invalid cover: " + base_report.summary(*window.base()));
    }
    state->n = base_cover.size();
    state->v = build_v_families(window, base_cover, s);
    if (!state->v.ok()) {
      throw OracleViolation("free_product_cover: " + state->v.problems.front());
    }
    const Rational t = state->v.threshold;
    state->m = t + Rational(1);
    state->margin = margin.value_or(t + state->m);
    state->d = state->v.member_bounds;
    std::vector<Family> out;
    for (std::size_t i = 1; i <= state->n + 1; ++i) {
      PointSet anchors;
      for (const auto& member : state->v.families[i - 1].sets) anchors = set_union(anchors, member);
      Family f;
      f.label = "components of the cone over V" + std::to_string(i);
      for (auto& c : r_components(*space, window.cone(anchors, state->m), s.at(i))) f.add(std::move(c));
      out.push_back(std::move(f));
    }
    return out;
  };
  hypothesis.subcover = [&window, state, space](std::size_t i, const PointSet& u, const Rational& r) {
    const Rational& d = state->d.at(i - 1);
    const Rational m = state->m + r + d;
    const Rational core_bound = Rational(2) * m;
    SubCover sub;
    sub.bound = cone_cover_bound(window.gap(), m, r, core_bound);
    sub.families.resize(2);
    const ComponentCore core = component_core(window, u, state->m, r, d, state->margin);
    const PointSet inner = set_intersection(u, window.domain(state->margin));
    auto singletons = [&](const PointSet& pts) {
      for (PointIndex w : pts) sub.families[0].add({w});
      state->artifacts += pts.size();
    };
    if (!core.flat) {
      if (!inner.empty()) throw OracleViolation("free_product_cover: component core is not flat");
      singletons(u);
      return sub;
    }
    if (core.outside.size() != core.artifacts.size()) {
      throw OracleViolation("free_product_cover: component word outside the cone of its core");
    }
    ConeCover cc;
    try {
      cc = cone_cover(window, core.core, m, r, core_bound, &u);
    } catch (const InputError& e) {
      throw OracleViolation(std::string("free_product_cover: ") + e.what());
    }
    sub.families[0] = std::move(cc.even);
    sub.families[1] = std::move(cc.odd);
    singletons(core.artifacts);
    return sub;
  };

  DecomposeResult dec = decompose(space, 2, hypothesis, scales);
  FreeProductResult out;
  out.witness = std::move(dec.witness);
  out.audit = std::move(dec.audit);
  out.margin = state->margin;
  out.domain = window.domain(state->margin);
  out.base_families = state->n;
  out.cone_scale = state->m;
  out.v = std::move(state->v);
  out.artifacts = state->artifacts;
  out.report = verify_apc_witness(*space, scales.fresh(), out.witness, out.domain);
  return out;
}

Wedge wedge_embed(const SpacePtr& x, const SpacePtr& y) {
  const PointIndex x0 = require_basepoint(*x, "wedge");
  const PointIndex y0 = require_basepoint(*y, "wedge");
  Wedge out;
  std::vector<std::string> labels{"*"};
  std::vector<std::pair<int, PointIndex>> origin{{0, x0}};
  out.from_x.assign(x->size(), 0);
  out.from_y.assign(y->size(), 0);
  for (PointIndex p = 0; p < x->size(); ++p) {
    if (p == x0) continue;
    out.from_x[p] = static_cast<PointIndex>(labels.size());
    labels.push_back("X:" + x->label(p));
    origin.emplace_back(0, p);
  }
  for (PointIndex p = 0; p < y->size(); ++p) {
    if (p == y0) continue;
    out.from_y[p] = static_cast<PointIndex>(labels.size());
    labels.push_back("Y:" + y->label(p));
    origin.emplace_back(1, p);
  }
  const std::size_t n = labels.size();
  std::vector<std::vector<Length>> rows(n, std::vector<Length>(n));
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) {
      const auto [fa, pa] = origin[a];
      const auto [fb, pb] = origin[b];
      if (fa == fb) {
        rows[a][b] = Length(rational_distance(fa == 0 ? *x : *y, pa, pb));
      } else {
        const PointIndex px = fa == 0 ? pa : pb;
        const PointIndex py = fa == 0 ? pb : pa;
        rows[a][b] = Length(rational_distance(*x, px, x0) + rational_distance(*y, y0, py));
      }
    }
  }
  out.space = matrix_space(std::move(labels), std::move(rows), PointIndex{0});
  return out;
}

Rational alternating_distance(const FiniteMetricSpace& x, const FiniteMetricSpace& y, const MixedWord& a,
                              const MixedWord& b) {
  const PointIndex x0 = require_basepoint(x, "alternating_distance");
  const PointIndex y0 = require_basepoint(y, "alternating_distance");
  auto norm = [&](const std::pair<int, PointIndex>& letter) {
    return letter.first == 0 ? rational_distance(x, x0, letter.second) : rational_distance(y, y0, letter.second);
  };
  std::size_t c = 0;
  while (c < a.size() && c < b.size() && a[c] == b[c]) ++c;
  Rational total;
  for (std::size_t k = c + 1; k < a.size(); ++k) total += norm(a[k]);
  for (std::size_t k = c + 1; k < b.size(); ++k) total += norm(b[k]);
  if (c < a.size() && c < b.size()) {
    if (a[c].first == b[c].first) {
      total += rational_distance(a[c].first == 0 ? x : y, a[c].second, b[c].second);
    } else {
      total += norm(a[c]) + norm(b[c]);
    }
  } else if (c < a.size()) {
    total += norm(a[c]);
  } else if (c < b.size()) {
    total += norm(b[c]);
  }
  return total;
}

EmbeddingReport check_wedge_embedding(const SpacePtr& x, const SpacePtr& y, std::size_t max_order,
                                      const Rational& max_norm) {
  const Wedge wedge = wedge_embed(x, y);
  const FreeProductWindow window(wedge.space, max_order, max_norm);
  std::vector<std::pair<int, PointIndex>> origin(wedge.space->size(), {-1, 0});
  for (PointIndex p = 0; p < x->size(); ++p) {
    if (wedge.from_x[p] != 0) origin[wedge.from_x[p]] = {0, p};
  }
  for (PointIndex p = 0; p < y->size(); ++p) {
    if (wedge.from_y[p] != 0) origin[wedge.from_y[p]] = {1, p};
  }
  std::vector<PointIndex> kept;
  std::vector<MixedWord> mixed;
  for (PointIndex w = 0; w < window.size(); ++w) {
    MixedWord m;
    bool alternating = true;
    for (PointIndex letter : window.word(w)) {
      if (!m.empty() && m.back().first == origin[letter].first) {
        alternating = false;
        break;
      }
      m.push_back(origin[letter]);
    }
    if (!alternating) continue;
    kept.push_back(w);
    mixed.push_back(std::move(m));
  }
  EmbeddingReport report;
  report.words = kept.size();
  for (std::size_t a = 0; a < kept.size() && report.ok; ++a) {
    for (std::size_t b = a; b < kept.size(); ++b) {
      ++report.pairs;
      const Rational lhs = window.distance(kept[a], kept[b]);
      const Rational rhs = alternating_distance(*x, *y, mixed[a], mixed[b]);
      if (lhs != rhs) {
        report.ok = false;
        report.detail = "words " + window.space()->label(kept[a]) + " and " + window.space()->label(kept[b]) +
                        ": " + lhs.to_string() + " in the wedge window, " + rhs.to_string() + " directly";
        break;
      }
    }
  }
  return report;
}

}  // namespace coarse
