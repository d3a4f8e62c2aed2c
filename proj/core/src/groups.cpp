#include "coarse/groups.hpp"

#include <algorithm>
#include <numeric>
#include <random>

#include "json.hpp"

#include "coarse/error.hpp"
#include "coarse/oracles.hpp"
#include "coarse/tree.hpp"

namespace coarse {

using nlohmann::json;

std::size_t ElementHash::operator()(const Element& e) const noexcept {
  std::size_t h = e.size();
  for (std::int64_t v : e) h ^= std::hash<std::int64_t>{}(v) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  return h;
}

namespace {

/// Compound factor names are parenthesised so that nested products read unambiguously.
std::string factor_name(const GroupModel& g) {
  const std::string n = g.name();
  return n.find(' ') == std::string::npos ? n : "(" + n + ")";
}

json parse_json(const std::string& text, const std::string& what) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw InputError(what + ": malformed element '" + text + "': " + e.what());
  }
}

std::int64_t checked_add(std::int64_t a, std::int64_t b) {
  std::int64_t out = 0;
  if (__builtin_add_overflow(a, b, &out)) throw std::overflow_error("group: coordinate overflow");
  return out;
}

class LatticeGroup final : public GroupModel {
 public:
  explicit LatticeGroup(std::size_t d) : d_(d) {}
  std::string name() const override { return "Z^" + std::to_string(d_); }
  Element identity() const override { return Element(d_, 0); }
  Element multiply(const Element& a, const Element& b) const override {
    Element out(d_);
    for (std::size_t i = 0; i < d_; ++i) out[i] = checked_add(a.at(i), b.at(i));
    return out;
  }
  Element inverse(const Element& a) const override {
    Element out(d_);
    for (std::size_t i = 0; i < d_; ++i) out[i] = -a.at(i);
    return out;
  }
  std::string to_json(const Element& a) const override { return json(a).dump(); }
  Element from_json(const std::string& text) const override {
    const json j = parse_json(text, name());
    if (!j.is_array() || j.size() != d_) throw InputError(name() + ": expected an array of " + std::to_string(d_) + " integers");
    Element out;
    for (const auto& v : j) {
      if (!v.is_number_integer()) throw InputError(name() + ": coordinates must be integers");
      out.push_back(v.get<std::int64_t>());
    }
    return out;
  }
  std::string label(const Element& a) const override {
    std::string out = "(";
    for (std::size_t i = 0; i < a.size(); ++i) out += (i ? "," : "") + std::to_string(a[i]);
    return out + ")";
  }
  std::string describe() const override { return json{{"model", "Z^d"}, {"dim", d_}}.dump(); }
  ElementSet standard_generators() const override {
    ElementSet out;
    for (std::size_t i = 0; i < d_; ++i) {
      for (int sign : {1, -1}) {
        Element e(d_, 0);
        e[i] = sign;
        out.push_back(std::move(e));
      }
    }
    return out;
  }
  std::size_t dim() const { return d_; }

 private:
  std::size_t d_;
};

// Reduced words; letter k > 0 is the k-th generator and -k its inverse.
class FreeGroup final : public GroupModel {
 public:
  explicit FreeGroup(std::size_t rank) : rank_(rank) {
    if (rank > 26) throw InputError("free group: rank above 26 is not supported");
  }
  std::string name() const override { return "F_" + std::to_string(rank_); }
  Element identity() const override { return {}; }
  Element multiply(const Element& a, const Element& b) const override {
    Element out = a;
    for (std::int64_t x : b) {
      if (!out.empty() && out.back() == -x) {
        out.pop_back();
      } else {
        out.push_back(x);
      }
    }
    return out;
  }
  Element inverse(const Element& a) const override {
    Element out(a.rbegin(), a.rend());
    for (auto& x : out) x = -x;
    return out;
  }
  std::string to_json(const Element& a) const override { return json(letters(a)).dump(); }
  Element from_json(const std::string& text) const override {
    const json j = parse_json(text, name());
    if (!j.is_string()) throw InputError(name() + ": expected a string of letters");
    Element raw;
    for (char c : j.get<std::string>()) {
      const bool upper = c >= 'A' && c <= 'Z';
      const std::int64_t k = upper ? c - 'A' + 1 : c - 'a' + 1;
      if (k < 1 || k > static_cast<std::int64_t>(rank_) || (!upper && (c < 'a' || c > 'z'))) {
        throw InputError(name() + ": bad letter '" + std::string(1, c) + "'");
      }
      raw.push_back(upper ? -k : k);
    }
    return multiply(identity(), raw);
  }
  std::string label(const Element& a) const override { return a.empty() ? "1" : letters(a); }
  std::string describe() const override { return json{{"model", "free"}, {"rank", rank_}}.dump(); }
  ElementSet standard_generators() const override {
    ElementSet out;
    for (std::size_t k = 1; k <= rank_; ++k) {
      out.push_back({static_cast<std::int64_t>(k)});
      out.push_back({-static_cast<std::int64_t>(k)});
    }
    return out;
  }

 private:
  static std::string letters(const Element& a) {
    std::string s;
    for (std::int64_t x : a) s += x > 0 ? static_cast<char>('a' + x - 1) : static_cast<char>('A' - x - 1);
    return s;
  }
  std::size_t rank_;
};

class TableGroup final : public GroupModel {
 public:
  explicit TableGroup(std::vector<std::vector<std::int64_t>> table) : table_(std::move(table)) {
    const std::size_t n = table_.size();
    if (n == 0) throw InputError("table group: empty table");
    if (n > 256) throw InputError("table group: more than 256 elements");
    for (const auto& row : table_) {
      if (row.size() != n) throw InputError("table group: table is not square");
      for (auto v : row) {
        if (v < 0 || static_cast<std::size_t>(v) >= n) throw InputError("table group: entry out of range");
      }
    }
    std::optional<std::int64_t> e;
    for (std::size_t i = 0; i < n && !e; ++i) {
      bool ok = true;
      for (std::size_t x = 0; x < n && ok; ++x) ok = table_[i][x] == static_cast<std::int64_t>(x) && table_[x][i] == static_cast<std::int64_t>(x);
      if (ok) e = static_cast<std::int64_t>(i);
    }
    if (!e) throw InputError("table group: no identity");
    e_ = *e;
    inverse_.assign(n, -1);
    for (std::size_t x = 0; x < n; ++x) {
      for (std::size_t y = 0; y < n; ++y) {
        if (table_[x][y] == e_ && table_[y][x] == e_) inverse_[x] = static_cast<std::int64_t>(y);
      }
      if (inverse_[x] < 0) throw InputError("table group: element " + std::to_string(x) + " has no inverse");
    }
    for (std::size_t x = 0; x < n; ++x) {
      for (std::size_t y = 0; y < n; ++y) {
        for (std::size_t z = 0; z < n; ++z) {
          if (table_[table_[x][y]][z] != table_[x][table_[y][z]]) {
            throw InputError("table group: not associative at (" + std::to_string(x) + "," + std::to_string(y) + "," +
                             std::to_string(z) + ")");
          }
        }
      }
    }
  }
  std::string name() const override { return "table(" + std::to_string(table_.size()) + ")"; }
  Element identity() const override { return {e_}; }
  Element multiply(const Element& a, const Element& b) const override { return {table_.at(a.at(0)).at(b.at(0))}; }
  Element inverse(const Element& a) const override { return {inverse_.at(a.at(0))}; }
  std::string to_json(const Element& a) const override { return std::to_string(a.at(0)); }
  Element from_json(const std::string& text) const override {
    const json j = parse_json(text, name());
    if (!j.is_number_integer()) throw InputError(name() + ": expected an integer");
    const auto v = j.get<std::int64_t>();
    if (v < 0 || static_cast<std::size_t>(v) >= table_.size()) throw InputError(name() + ": element out of range");
    return {v};
  }
  std::string describe() const override { return json{{"model", "table"}, {"table", table_}}.dump(); }
  ElementSet standard_generators() const override {
    ElementSet out;
    for (std::size_t x = 0; x < table_.size(); ++x) {
      if (static_cast<std::int64_t>(x) != e_) out.push_back({static_cast<std::int64_t>(x)});
    }
    return out;
  }

 private:
  std::vector<std::vector<std::int64_t>> table_;
  std::vector<std::int64_t> inverse_;
  std::int64_t e_ = 0;
};

// Components stored as [length, data...] one after the other.
class DirectProduct final : public GroupModel {
 public:
  explicit DirectProduct(std::vector<GroupPtr> factors) : factors_(std::move(factors)) {
    if (factors_.empty()) throw InputError("direct product: no factors");
  }
  std::string name() const override {
    std::string out;
    for (std::size_t i = 0; i < factors_.size(); ++i) out += (i ? " x " : "") + factor_name(*factors_[i]);
    return out;
  }
  Element identity() const override {
    std::vector<Element> parts;
    for (const auto& f : factors_) parts.push_back(f->identity());
    return join(parts);
  }
  Element multiply(const Element& a, const Element& b) const override {
    auto pa = split(a);
    const auto pb = split(b);
    for (std::size_t i = 0; i < factors_.size(); ++i) pa[i] = factors_[i]->multiply(pa[i], pb[i]);
    return join(pa);
  }
  Element inverse(const Element& a) const override {
    auto pa = split(a);
    for (std::size_t i = 0; i < factors_.size(); ++i) pa[i] = factors_[i]->inverse(pa[i]);
    return join(pa);
  }
  std::string to_json(const Element& a) const override {
    json out = json::array();
    const auto pa = split(a);
    for (std::size_t i = 0; i < factors_.size(); ++i) out.push_back(json::parse(factors_[i]->to_json(pa[i])));
    return out.dump();
  }
  Element from_json(const std::string& text) const override {
    const json j = parse_json(text, name());
    if (!j.is_array() || j.size() != factors_.size()) throw InputError(name() + ": expected one component per factor");
    std::vector<Element> parts;
    for (std::size_t i = 0; i < factors_.size(); ++i) parts.push_back(factors_[i]->from_json(j[i].dump()));
    return join(parts);
  }
  std::string label(const Element& a) const override {
    const auto pa = split(a);
    std::string out = "(";
    for (std::size_t i = 0; i < factors_.size(); ++i) out += (i ? "," : "") + factors_[i]->label(pa[i]);
    return out + ")";
  }
  std::string describe() const override {
    json parts = json::array();
    for (const auto& f : factors_) parts.push_back(json::parse(f->describe()));
    return json{{"model", {{"product", parts}}}}.dump();
  }
  ElementSet standard_generators() const override {
    ElementSet out;
    for (std::size_t i = 0; i < factors_.size(); ++i) {
      for (const auto& s : factors_[i]->standard_generators()) {
        std::vector<Element> parts;
        for (const auto& f : factors_) parts.push_back(f->identity());
        parts[i] = s;
        out.push_back(join(parts));
      }
    }
    return out;
  }

 private:
  static Element join(const std::vector<Element>& parts) {
    Element out;
    for (const auto& p : parts) {
      out.push_back(static_cast<std::int64_t>(p.size()));
      out.insert(out.end(), p.begin(), p.end());
    }
    return out;
  }
  std::vector<Element> split(const Element& a) const {
    std::vector<Element> parts;
    std::size_t k = 0;
    for (std::size_t i = 0; i < factors_.size(); ++i) {
      if (k >= a.size()) throw InputError(name() + ": malformed element encoding");
      const auto len = static_cast<std::size_t>(a[k]);
      if (k + 1 + len > a.size()) throw InputError(name() + ": malformed element encoding");
      parts.emplace_back(a.begin() + static_cast<std::ptrdiff_t>(k + 1), a.begin() + static_cast<std::ptrdiff_t>(k + 1 + len));
      k += 1 + len;
    }
    return parts;
  }
  std::vector<GroupPtr> factors_;
};

// Alternating syllables stored as [factor, length, data...].
class FreeProductGroup final : public GroupModel {
 public:
  explicit FreeProductGroup(std::vector<GroupPtr> factors) : factors_(std::move(factors)) {
    if (factors_.empty()) throw InputError("free product: no factors");
  }
  using Syllable = std::pair<std::size_t, Element>;
  std::string name() const override {
    std::string out;
    for (std::size_t i = 0; i < factors_.size(); ++i) out += (i ? " * " : "") + factor_name(*factors_[i]);
    return out;
  }
  Element identity() const override { return {}; }
  Element multiply(const Element& a, const Element& b) const override {
    auto out = split(a);
    for (auto& s : split(b)) push(out, std::move(s));
    return join(out);
  }
  Element inverse(const Element& a) const override {
    auto parts = split(a);
    std::reverse(parts.begin(), parts.end());
    for (auto& [f, e] : parts) e = factors_[f]->inverse(e);
    return join(parts);
  }
  std::string to_json(const Element& a) const override {
    json out = json::array();
    for (const auto& [f, e] : split(a)) out.push_back(json::array({f, json::parse(factors_[f]->to_json(e))}));
    return out.dump();
  }
  Element from_json(const std::string& text) const override {
    const json j = parse_json(text, name());
    if (!j.is_array()) throw InputError(name() + ": expected an array of [factor, element] syllables");
    std::vector<Syllable> out;
    for (const auto& s : j) {
      if (!s.is_array() || s.size() != 2 || !s[0].is_number_unsigned() || s[0].get<std::size_t>() >= factors_.size()) {
        throw InputError(name() + ": bad syllable " + s.dump());
      }
      const std::size_t f = s[0].get<std::size_t>();
      push(out, {f, factors_[f]->from_json(s[1].dump())});
    }
    return join(out);
  }
  std::string label(const Element& a) const override {
    const auto parts = split(a);
    if (parts.empty()) return "e";
    std::string out;
    for (std::size_t i = 0; i < parts.size(); ++i) {
      out += (i ? "*" : "") + std::to_string(parts[i].first) + ":" + factors_[parts[i].first]->label(parts[i].second);
    }
    return out;
  }
  std::string describe() const override {
    json parts = json::array();
    for (const auto& f : factors_) parts.push_back(json::parse(f->describe()));
    return json{{"model", {{"freeprod", parts}}}}.dump();
  }
  ElementSet standard_generators() const override {
    ElementSet out;
    for (std::size_t i = 0; i < factors_.size(); ++i) {
      for (const auto& s : factors_[i]->standard_generators()) out.push_back(join({{i, s}}));
    }
    return out;
  }

 private:
  void push(std::vector<Syllable>& word, Syllable s) const {
    if (factors_[s.first]->is_identity(s.second)) return;
    if (!word.empty() && word.back().first == s.first) {
      Element merged = factors_[s.first]->multiply(word.back().second, s.second);
      word.pop_back();
      if (!factors_[s.first]->is_identity(merged)) word.emplace_back(s.first, std::move(merged));
      return;
    }
    word.push_back(std::move(s));
  }
  static Element join(const std::vector<Syllable>& parts) {
    Element out;
    for (const auto& [f, e] : parts) {
      out.push_back(static_cast<std::int64_t>(f));
      out.push_back(static_cast<std::int64_t>(e.size()));
      out.insert(out.end(), e.begin(), e.end());
    }
    return out;
  }
  std::vector<Syllable> split(const Element& a) const {
    std::vector<Syllable> parts;
    for (std::size_t k = 0; k < a.size();) {
      if (k + 2 > a.size()) throw InputError(name() + ": malformed element encoding");
      const auto f = static_cast<std::size_t>(a[k]);
      const auto len = static_cast<std::size_t>(a[k + 1]);
      if (f >= factors_.size() || k + 2 + len > a.size()) throw InputError(name() + ": malformed element encoding");
      parts.emplace_back(f, Element(a.begin() + static_cast<std::ptrdiff_t>(k + 2),
                                    a.begin() + static_cast<std::ptrdiff_t>(k + 2 + len)));
      k += 2 + len;
    }
    return parts;
  }
  std::vector<GroupPtr> factors_;
};

template <typename Rng>
std::size_t pick(Rng& rng, std::size_t n) {
  return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
}

}  // namespace

GroupPtr integer_lattice(std::size_t d) { return std::make_shared<LatticeGroup>(d); }
GroupPtr free_group(std::size_t rank) { return std::make_shared<FreeGroup>(rank); }
GroupPtr table_group(std::vector<std::vector<std::int64_t>> table) {
  return std::make_shared<TableGroup>(std::move(table));
}
GroupPtr direct_product(std::vector<GroupPtr> factors) { return std::make_shared<DirectProduct>(std::move(factors)); }
GroupPtr free_product_group(std::vector<GroupPtr> factors) {
  return std::make_shared<FreeProductGroup>(std::move(factors));
}

PredicateResult check_group_axioms(const GroupModel& group, const ElementSet& elements, std::size_t samples,
                                   std::uint64_t seed) {
  PredicateResult result;
  if (elements.empty()) return result;
  std::mt19937_64 rng(seed);
  const Element e = group.identity();
  for (std::size_t k = 0; k < samples && result.ok; ++k) {
    const Element& a = elements[pick(rng, elements.size())];
    const Element& b = elements[pick(rng, elements.size())];
    const Element& c = elements[pick(rng, elements.size())];
    std::string failed;
    if (group.multiply(group.multiply(a, b), c) != group.multiply(a, group.multiply(b, c))) failed = "associativity";
    else if (group.multiply(a, e) != a || group.multiply(e, a) != a) failed = "identity";
    else if (group.multiply(a, group.inverse(a)) != e || group.multiply(group.inverse(a), a) != e) failed = "inverse";
    else if (group.from_json(group.to_json(a)) != a) failed = "canonical form";
    if (!failed.empty()) {
      result.ok = false;
      result.detail = failed + " fails at " + group.label(a) + ", " + group.label(b) + ", " + group.label(c);
    }
  }
  return result;
}

WeightedGeneratingSet::WeightedGeneratingSet(GroupPtr group, std::vector<WeightedGenerator> generators,
                                             bool symmetrize)
    : group_(std::move(group)), generators_(std::move(generators)) {
  std::unordered_map<Element, std::size_t, ElementHash> where;
  for (std::size_t s = 0; s < generators_.size(); ++s) {
    const auto& g = generators_[s];
    if (group_->is_identity(g.element)) throw InputError("generating set: the identity is not a generator");
    if (g.weight.sign() <= 0) throw InputError("generating set: weights must be positive");
    if (!where.emplace(g.element, s).second) {
      throw InputError("generating set: duplicate generator " + group_->label(g.element));
    }
  }
  const std::size_t given = generators_.size();
  for (std::size_t s = 0; s < given; ++s) {
    const Element inv = group_->inverse(generators_[s].element);
    auto it = where.find(inv);
    if (it == where.end()) {
      if (!symmetrize) throw InputError("generating set: " + group_->label(inv) + " is missing");
      where.emplace(inv, generators_.size());
      generators_.push_back({inv, generators_[s].weight});
    } else if (generators_[it->second].weight != generators_[s].weight) {
      throw InputError("generating set: " + group_->label(generators_[s].element) + " and its inverse have different weights");
    }
  }
  inverse_.resize(generators_.size());
  for (std::size_t s = 0; s < generators_.size(); ++s) inverse_[s] = where.at(group_->inverse(generators_[s].element));
}

WeightedGeneratingSet WeightedGeneratingSet::standard(GroupPtr group, const Rational& weight) {
  std::vector<WeightedGenerator> gens;
  for (auto& e : group->standard_generators()) gens.push_back({std::move(e), weight});
  return WeightedGeneratingSet(std::move(group), std::move(gens));
}

Rational WeightedGeneratingSet::min_weight() const {
  if (generators_.empty()) throw InputError("generating set: empty");
  Rational best = generators_.front().weight;
  for (const auto& g : generators_) best = min(best, g.weight);
  return best;
}

void CayleyWindow::settle_until(Search& search, const Rational& limit, std::size_t cap) const {
  const GroupModel& group = *gens_.group();
  while (!search.frontier.empty() && search.frontier.top().first <= limit) {
    auto [d, g] = search.frontier.top();
    search.frontier.pop();
    if (search.settled.count(g)) continue;
    search.settled.emplace(g, d);
    search.best.erase(g);
    if (search.settled.size() > cap) {
      throw InputError("Cayley window: ball has more than " + std::to_string(cap) + " elements");
    }
    for (const auto& s : gens_.generators()) {
      Element h = group.multiply(g, s.element);
      if (search.settled.count(h)) continue;
      const Rational nd = d + s.weight;
      auto it = search.best.find(h);
      if (it != search.best.end() && !(nd < it->second)) continue;
      search.best[h] = nd;
      search.frontier.emplace(nd, std::move(h));
    }
  }
  search.settled_up_to = max(search.settled_up_to, limit);
}

CayleyWindow::CayleyWindow(WeightedGeneratingSet generators, Rational radius, std::size_t cap,
                           std::optional<Rational> norm_limit)
    : gens_(std::move(generators)), radius_(radius), cap_(cap), search_(std::make_shared<Search>()) {
  if (radius_.sign() < 0) throw InputError("Cayley window: negative radius");
  Rational heaviest(0);
  for (const auto& g : gens_.generators()) heaviest = max(heaviest, g.weight);
  norm_limit_ = norm_limit.value_or(Rational(4) * radius_ + Rational(2) * heaviest);
  const Rational table_radius = Rational(2) * radius_;
  if (norm_limit_ < table_radius) norm_limit_ = table_radius;
  const GroupModel& group = *gens_.group();
  search_->frontier.emplace(Rational(0), group.identity());
  settle_until(*search_, table_radius, cap_);
  table_ = std::make_shared<const std::unordered_map<Element, Rational, ElementHash>>(search_->settled);

  std::vector<std::pair<Rational, Element>> ball;
  for (const auto& [g, n] : *table_) {
    if (n <= radius_) ball.emplace_back(n, g);
  }
  std::sort(ball.begin(), ball.end());
  std::vector<std::string> labels;
  for (auto& [n, g] : ball) {
    index_.emplace(g, static_cast<PointIndex>(points_.size()));
    labels.push_back(group.label(g));
    point_norms_.push_back(n);
    points_.push_back(std::move(g));
  }
  auto points = std::make_shared<const std::vector<Element>>(points_);
  auto table = table_;
  GroupPtr gp = gens_.group();
  space_ = make_space(
      std::move(labels),
      [points, table, gp](PointIndex p, PointIndex q) {
        return Length(table->at(gp->multiply(gp->inverse((*points)[p]), (*points)[q])));
      },
      PointIndex{0});
}

std::optional<PointIndex> CayleyWindow::index_of(const Element& g) const {
  auto it = index_.find(g);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

PointIndex CayleyWindow::require(const Element& g) const {
  if (auto p = index_of(g)) return *p;
  throw WindowExhausted("Cayley window: " + group()->label(g) + " is outside the ball of radius " + radius_.to_string());
}

Rational CayleyWindow::norm(const Element& g) const {
  if (auto it = table_->find(g); it != table_->end()) return it->second;
  std::lock_guard<std::mutex> lock(search_->mutex);
  for (;;) {
    if (auto it = search_->settled.find(g); it != search_->settled.end()) return it->second;
    if (search_->frontier.empty() || search_->frontier.top().first > norm_limit_) {
      throw WindowExhausted("Cayley window: |" + group()->label(g) + "| exceeds the norm limit " + norm_limit_.to_string());
    }
    // Settle everything up to the next frontier distance.
    settle_until(*search_, search_->frontier.top().first, cap_);
  }
}

Rational CayleyWindow::distance(const Element& g, const Element& h) const {
  return norm(group()->multiply(group()->inverse(g), h));
}

PointSet CayleyWindow::translate(const Element& g, const PointSet& s) const {
  PointSet out;
  out.reserve(s.size());
  for (PointIndex p : s) out.push_back(require(group()->multiply(g, points_.at(p))));
  return make_point_set(std::move(out));
}

PredicateResult check_left_invariance(const CayleyWindow& window, std::size_t samples, std::uint64_t seed) {
  PredicateResult result;
  const std::size_t n = window.size();
  const GroupModel& group = *window.group();
  const FiniteMetricSpace& space = *window.space();
  auto check = [&](PointIndex g, PointIndex h, PointIndex k) {
    const auto gh = window.index_of(group.multiply(window.element(g), window.element(h)));
    const auto gk = window.index_of(group.multiply(window.element(g), window.element(k)));
    if (!gh || !gk) return true;
    if (space.dist(*gh, *gk) == space.dist(h, k)) return true;
    result.ok = false;
    result.witness = {g, h, k};
    result.detail = "d(gh, gk) != d(h, k) for g = " + space.label(g) + ", h = " + space.label(h) + ", k = " + space.label(k);
    return false;
  };
  const double triples = static_cast<double>(n) * static_cast<double>(n) * static_cast<double>(n);
  if (samples == 0 || triples <= static_cast<double>(samples)) {
    for (PointIndex g = 0; g < n; ++g) {
      for (PointIndex h = 0; h < n; ++h) {
        for (PointIndex k = 0; k < n; ++k) {
          if (!check(g, h, k)) return result;
        }
      }
    }
    return result;
  }
  std::mt19937_64 rng(seed);
  for (std::size_t s = 0; s < samples; ++s) {
    if (!check(static_cast<PointIndex>(pick(rng, n)), static_cast<PointIndex>(pick(rng, n)),
               static_cast<PointIndex>(pick(rng, n)))) {
      break;
    }
  }
  return result;
}

PredicateResult check_norm_symmetry(const CayleyWindow& window) {
  PredicateResult result;
  for (PointIndex p = 0; p < window.size(); ++p) {
    const Rational inv = window.norm(window.group()->inverse(window.element(p)));
    if (inv != window.point_norm(p)) {
      result.ok = false;
      result.witness = {p};
      result.detail = "|g| = " + window.point_norm(p).to_string() + " but |g^-1| = " + inv.to_string() + " at " +
                      window.space()->label(p);
      break;
    }
  }
  return result;
}

Homomorphism coordinate_projection(const GroupPtr& source, std::vector<std::size_t> keep) {
  const auto* lattice = dynamic_cast<const LatticeGroup*>(source.get());
  if (!lattice) throw InputError("coordinate projection: the source must be Z^d");
  for (std::size_t c : keep) {
    if (c >= lattice->dim()) throw InputError("coordinate projection: coordinate out of range");
  }
  Homomorphism f;
  f.source = source;
  f.target = integer_lattice(keep.size());
  std::string name = "project(";
  for (std::size_t i = 0; i < keep.size(); ++i) name += (i ? "," : "") + std::to_string(keep[i]);
  f.name = name + ")";
  f.map = [keep](const Element& g) {
    Element out;
    for (std::size_t c : keep) out.push_back(g.at(c));
    return out;
  };
  return f;
}

Homomorphism identity_homomorphism(const GroupPtr& group) {
  return {group, group, [](const Element& g) { return g; }, "identity"};
}

Homomorphism trivial_homomorphism(const GroupPtr& source) {
  return {source, integer_lattice(0), [](const Element&) { return Element{}; }, "trivial"};
}

PredicateResult check_homomorphism(const Homomorphism& f, const ElementSet& elements, std::size_t samples,
                                   std::uint64_t seed) {
  PredicateResult result;
  if (elements.empty()) return result;
  std::mt19937_64 rng(seed);
  for (std::size_t s = 0; s < samples; ++s) {
    const Element& a = elements[pick(rng, elements.size())];
    const Element& b = elements[pick(rng, elements.size())];
    if (f(f.source->multiply(a, b)) != f.target->multiply(f(a), f(b))) {
      result.ok = false;
      result.detail = f.name + " is not multiplicative at " + f.source->label(a) + ", " + f.source->label(b);
      break;
    }
  }
  return result;
}

GroupAction hom_action(const Homomorphism& f, const WindowPtr& target) {
  if (f.target->describe() != target->group()->describe()) {
    throw InputError("hom_action: the window is not a window of the homomorphism's target");
  }
  GroupAction action;
  action.space = target->space();
  action.name = "translation through " + f.name;
  action.act = [f, target](const Element& g, PointIndex x) {
    return target->index_of(f.target->multiply(f(g), target->element(x)));
  };
  return action;
}

GroupAction trivial_action(const SpacePtr& space) {
  return {space, [](const Element&, PointIndex x) { return std::optional<PointIndex>(x); }, "trivial"};
}

PredicateResult check_action_isometric(const CayleyWindow& window, const GroupAction& action, std::size_t samples,
                                       std::uint64_t seed) {
  PredicateResult result;
  const std::size_t nx = action.space->size();
  if (nx == 0 || window.size() == 0) return result;
  std::mt19937_64 rng(seed);
  for (std::size_t s = 0; s < samples; ++s) {
    const PointIndex g = static_cast<PointIndex>(pick(rng, window.size()));
    const PointIndex x = static_cast<PointIndex>(pick(rng, nx));
    const PointIndex y = static_cast<PointIndex>(pick(rng, nx));
    const auto gx = action.act(window.element(g), x);
    const auto gy = action.act(window.element(g), y);
    if (!gx || !gy) continue;
    if (!(action.space->dist(*gx, *gy) == action.space->dist(x, y))) {
      result.ok = false;
      result.witness = {g, x, y};
      result.detail = "action of " + window.space()->label(g) + " is not isometric on " + action.space->label(x) +
                      ", " + action.space->label(y);
      break;
    }
  }
  return result;
}

namespace {

std::optional<PointIndex> act_or_throw(const GroupAction& action, const GroupModel& group, const Element& g,
                                       PointIndex x) {
  const auto y = action.act(g, x);
  if (!y) {
    throw WindowExhausted("action " + action.name + ": " + group.label(g) + " moves " + action.space->label(x) +
                          " out of the window");
  }
  return y;
}

}  // namespace

PointSet r_stabilizer(const CayleyWindow& window, const GroupAction& action, PointIndex x0, const Rational& r) {
  action.space->require(x0);
  PointSet out;
  for (PointIndex p = 0; p < window.size(); ++p) {
    const PointIndex y = *act_or_throw(action, *window.group(), window.element(p), x0);
    if (action.space->dist(y, x0) <= Length(r)) out.push_back(p);
  }
  return out;
}

namespace {

std::vector<Length> displacements(const WeightedGeneratingSet& gens, const GroupAction& action, PointIndex x0) {
  std::vector<Length> out;
  for (const auto& s : gens.generators()) {
    out.push_back(action.space->dist(*act_or_throw(action, *gens.group(), s.element, x0), x0));
  }
  return out;
}

}  // namespace

Modulus rho_from_weights(const WeightedGeneratingSet& gens, const GroupAction& action, PointIndex x0) {
  Length largest;
  for (const auto& d : displacements(gens, action, x0)) largest = max(largest, d);
  return step_modulus(gens.min_weight(), rational_upper(largest));
}

Modulus rho_exact(const WeightedGeneratingSet& gens, const GroupAction& action, PointIndex x0, const Rational& up_to) {
  const std::vector<Length> disp = displacements(gens, action, x0);
  std::int64_t scale = 1;
  for (const auto& s : gens.generators()) scale = std::lcm(scale, s.weight.den());
  const std::int64_t top = (up_to * Rational(scale)).floor();
  if (top < 0) throw InputError("rho_exact: negative range");
  if (top > 1'000'000) throw InputError("rho_exact: table above 10^6 entries; use the weight bound");
  std::vector<std::int64_t> cost;
  std::vector<Rational> gain;
  for (std::size_t s = 0; s < disp.size(); ++s) {
    cost.push_back((gens.generators()[s].weight * Rational(scale)).floor());
    gain.push_back(rational_upper(disp[s]));
  }
  auto table = std::make_shared<std::vector<Rational>>(static_cast<std::size_t>(top) + 1);
  for (std::int64_t c = 1; c <= top; ++c) {
    Rational best = (*table)[static_cast<std::size_t>(c - 1)];
    for (std::size_t s = 0; s < cost.size(); ++s) {
      if (cost[s] <= c) best = max(best, (*table)[static_cast<std::size_t>(c - cost[s])] + gain[s]);
    }
    (*table)[static_cast<std::size_t>(c)] = best;
  }
  const Modulus fallback = rho_from_weights(gens, action, x0);
  const Rational step = Rational(1, scale);
  return [table, fallback, top, step](const Length& t) {
    if (t.sign() < 0) return Length(0);
    const std::int64_t c = t.floor_div(step);
    if (c > top) return fallback(t);
    return Length((*table)[static_cast<std::size_t>(c)]);
  };
}

UniformlyExpansiveMap orbit_map(const WindowPtr& window, const GroupAction& action, PointIndex x0,
                                std::optional<Modulus> rho) {
  UniformlyExpansiveMap map;
  map.source = window->space();
  map.target = action.space;
  map.image.reserve(window->size());
  for (PointIndex p = 0; p < window->size(); ++p) {
    map.image.push_back(*act_or_throw(action, *window->group(), window->element(p), x0));
  }
  map.rho = rho ? *rho : rho_from_weights(window->generators(), action, x0);
  return map;
}

StabilizerCoverProvider whole_set_provider(std::function<Length(const Rational& m, const Rational& r)> bound) {
  StabilizerCoverProvider p;
  p.family_count = 1;
  p.bound = std::move(bound);
  p.cover = [](const ElementSet& a, const Rational&, const Rational&) {
    return std::vector<std::vector<ElementSet>>{{a}};
  };
  p.name = "whole set";
  return p;
}

StabilizerCoverProvider coordinate_kernel_provider(const WindowPtr& g, const Homomorphism& f, const WindowPtr& h,
                                                   std::size_t c) {
  const auto* lattice = dynamic_cast<const LatticeGroup*>(g->group().get());
  if (!lattice) throw InputError("kernel provider: the group must be Z^d");
  const std::size_t d = lattice->dim();
  if (c >= d) throw InputError("kernel provider: kernel coordinate out of range");
  Element unit(d, 0);
  unit[c] = 1;
  if (!f.target->is_identity(f(unit))) throw InputError("kernel provider: the kernel coordinate is not in the kernel");
  // section[j] = source coordinate mapped onto target coordinate j.
  const std::size_t k = f.target->identity().size();
  std::vector<std::size_t> section(k, d);
  for (std::size_t i = 0; i < d; ++i) {
    Element e(d, 0);
    e[i] = 1;
    const Element image = f(e);
    for (std::size_t j = 0; j < k; ++j) {
      Element target_unit(k, 0);
      target_unit[j] = 1;
      if (image == target_unit && section[j] == d) section[j] = i;
    }
  }
  if (std::find(section.begin(), section.end(), d) != section.end() || k + 1 != d) {
    throw InputError("kernel provider: the homomorphism must be a coordinate projection with a rank-one kernel");
  }
  std::optional<Rational> kappa;
  for (const auto& s : g->generators().generators()) {
    if (s.element[c] == 0) continue;
    const Rational per_unit = s.weight / Rational(std::abs(s.element[c]));
    if (!kappa || per_unit < *kappa) kappa = per_unit;
  }
  if (!kappa) throw InputError("kernel provider: no generator moves the kernel coordinate");
  auto block = [kappa = *kappa](const Rational& r) { return std::max<std::int64_t>(1, (r / kappa).ceil()); };

  struct Memo {
    std::mutex mutex;
    std::map<std::pair<Rational, Rational>, Length> bounds;
  };
  auto memo = std::make_shared<Memo>();
  StabilizerCoverProvider p;
  p.family_count = 2;
  p.name = "kernel blocks along coordinate " + std::to_string(c);
  p.bound = [g, h, section, c, d, block, memo](const Rational& m, const Rational& r) {
    std::lock_guard<std::mutex> lock(memo->mutex);
    if (auto it = memo->bounds.find({m, r}); it != memo->bounds.end()) return it->second;
    if (m > h->radius()) {
      throw WindowExhausted("kernel provider: M = " + m.to_string() + " exceeds the target window radius");
    }
    const std::int64_t l = block(r);
    Rational best(0);
    for (PointIndex q = 0; q < h->size(); ++q) {
      if (h->point_norm(q) > m) continue;
      Element delta(d, 0);
      for (std::size_t j = 0; j < section.size(); ++j) delta[section[j]] = h->element(q)[j];
      for (std::int64_t t = -(l - 1); t <= l - 1; ++t) {
        delta[c] = t;
        best = max(best, g->norm(delta));
      }
    }
    memo->bounds.emplace(std::make_pair(m, r), Length(best));
    return Length(best);
  };
  p.cover = [c, block](const ElementSet& a, const Rational&, const Rational& r) {
    const std::int64_t l = block(r);
    std::map<std::int64_t, ElementSet> blocks;
    for (const auto& e : a) {
      const std::int64_t v = e.at(c);
      const std::int64_t b = v >= 0 ? v / l : -((-v + l - 1) / l);
      blocks[b].push_back(e);
    }
    std::vector<std::vector<ElementSet>> out(2);
    for (auto& [b, members] : blocks) out[static_cast<std::size_t>(((b % 2) + 2) % 2)].push_back(std::move(members));
    return out;
  };
  return p;
}

FiberSchemeFactory action_fiber_scheme(const WindowPtr& window, const GroupAction& action, PointIndex x0,
                                       StabilizerCoverProvider provider, std::shared_ptr<SchemeAuditLog> audit) {
  if (provider.family_count == 0) throw InputError("action scheme: the provider has no families");
  if (!audit) audit = std::make_shared<SchemeAuditLog>();
  auto shared = std::make_shared<const StabilizerCoverProvider>(std::move(provider));
  AsdimProvider asdim;
  asdim.bound = [shared, audit](const Rational& m, const Rational& r) {
    const Length b = shared->bound(m, r);
    std::lock_guard<std::mutex> lock(audit->mutex);
    auto [it, fresh] = audit->bounds.emplace(std::make_pair(m, r), b);
    if (!fresh && !(it->second == b)) {
      audit->consistent = false;
      throw OracleViolation("action scheme: provider bound for M = " + m.to_string() + " changed from " +
                            it->second.to_string() + " to " + b.to_string());
    }
    return b;
  };
  asdim.cover = [window, action, x0, shared, audit](const PointSet& a, const Rational& m, const Rational& r) {
    const GroupModel& group = *window->group();
    const Element& anchor = window->element(a.front());
    const Element back = group.inverse(anchor);
    ElementSet translated;
    translated.reserve(a.size());
    for (PointIndex p : a) {
      Element t = group.multiply(back, window->element(p));
      const PointIndex y = *act_or_throw(action, group, t, x0);
      if (action.space->dist(y, x0) > Length(m)) {
        throw OracleViolation("action scheme: " + group.label(t) + " is outside W_" + m.to_string());
      }
      translated.push_back(std::move(t));
    }
    const auto pieces = shared->cover(translated, m, r);
    if (pieces.size() != shared->family_count) {
      throw OracleViolation("action scheme: provider '" + shared->name + "' returned " + std::to_string(pieces.size()) +
                            " families");
    }
    std::vector<Family> out(pieces.size());
    Length largest;
    for (std::size_t j = 0; j < pieces.size(); ++j) {
      for (const auto& set : pieces[j]) {
        PointSet s;
        for (const auto& t : set) {
          const auto p = window->index_of(group.multiply(anchor, t));
          if (!p || !contains(a, *p)) throw OracleViolation("action scheme: provider returned an element outside the fiber");
          s.push_back(*p);
        }
        s = make_point_set(std::move(s));
        largest = max(largest, set_diameter(*window->space(), s));
        out[j].add(std::move(s));
      }
    }
    std::lock_guard<std::mutex> lock(audit->mutex);
    ++audit->fibers;
    audit->max_mesh = max(audit->max_mesh, largest);
    return out;
  };
  return fiber_scheme_from_asdim(shared->family_count - 1, std::move(asdim));
}

FiberSchemeFactory hom_fiber_scheme(const WindowPtr& window, const Homomorphism& f, const WindowPtr& target,
                                    StabilizerCoverProvider provider, std::shared_ptr<SchemeAuditLog> audit) {
  const PointIndex e = target->require(target->group()->identity());
  return action_fiber_scheme(window, hom_action(f, target), e, std::move(provider), std::move(audit));
}

FiberSchemeFactory projection_fiber_scheme(const ApcOracle& oracle_x, std::size_t target_size) {
  if (target_size == 0) throw InputError("projection scheme: empty target");
  return [oracle_x, target_size](const ScaleSequence& stream) {
    CoverWitness w = oracle_x(stream);
    if (const auto report = verify_apc_witness(*oracle_x.space, stream, w); !report.ok) {
      throw OracleViolation("projection scheme: oracle '" + oracle_x.name + "' returned an invalid cover: " +
                            report.summary(*oracle_x.space));
    }
    Length largest;
    for (const auto& e : w.entries) largest = max(largest, e.mesh_bound);
    const Rational mesh = rational_upper(largest);
    auto witness = std::make_shared<const CoverWitness>(std::move(w));
    FiberCoverScheme scheme;
    scheme.family_count = witness->size();
    scheme.bound_for_scale = [mesh](const Rational& m) { return Length(m + mesh); };
    scheme.cover = [witness, target_size](const PointSet& a, const Rational&) {
      std::vector<Family> out;
      for (const auto& entry : witness->entries) {
        Family f;
        for (const auto& u : entry.family.sets) {
          PointSet s;
          for (PointIndex p : a) {
            if (contains(u, static_cast<PointIndex>(p / target_size))) s.push_back(p);
          }
          f.add(std::move(s));
        }
        out.push_back(std::move(f));
      }
      return out;
    };
    return scheme;
  };
}

UniformlyExpansiveMap projection_map(const SpacePtr& product, const SpacePtr& x, const SpacePtr& y) {
  if (product->size() != x->size() * y->size()) throw InputError("projection: sizes do not match");
  UniformlyExpansiveMap map;
  map.source = product;
  map.target = y;
  map.rho = identity_modulus();
  map.image.resize(product->size());
  for (PointIndex p = 0; p < product->size(); ++p) map.image[p] = static_cast<PointIndex>(p % y->size());
  return map;
}

WeightedGeneratingSet extension_generating_set(const Homomorphism& f, const std::vector<WeightedGenerator>& kernel,
                                               const WeightedGeneratingSet& target,
                                               const std::function<Element(const Element&)>& section) {
  std::vector<WeightedGenerator> gens;
  for (const auto& k : kernel) {
    if (!f.target->is_identity(f(k.element))) {
      throw InputError("extension: kernel generator " + f.source->label(k.element) + " is not in the kernel");
    }
    gens.push_back(k);
  }
  for (const auto& s : target.generators()) {
    Element lift = section(s.element);
    if (f(lift) != s.element) {
      throw InputError("extension: the lift of " + f.target->label(s.element) + " does not map onto it");
    }
    gens.push_back({std::move(lift), s.weight});
  }
  return WeightedGeneratingSet(f.source, std::move(gens));
}

ApcOracle integer_window_oracle(const WindowPtr& window) {
  if (!dynamic_cast<const LatticeGroup*>(window->group().get()) || window->group()->identity().size() != 1) {
    throw InputError("integer window oracle: the group must be Z");
  }
  std::vector<Rational> coords;
  for (PointIndex p = 0; p < window->size(); ++p) coords.emplace_back(window->element(p)[0]);
  ApcOracle oracle = line_oracle(window->space(), std::move(coords));
  oracle.name = "integer window";
  return oracle;
}

ExtensionResult extension_cover(const WindowPtr& g, const Homomorphism& f, const WindowPtr& h,
                                StabilizerCoverProvider provider, const ApcOracle& oracle_h, const ScaleSequence& scales) {
  if (oracle_h.space != h->space()) throw InputError("extension: the oracle does not cover the target window");
  ExtensionResult out;
  out.audit = std::make_shared<SchemeAuditLog>();
  const GroupAction action = hom_action(f, h);
  const PointIndex e = h->require(h->group()->identity());
  out.map = orbit_map(g, action, e);
  const FiberSchemeFactory scheme = action_fiber_scheme(g, action, e, std::move(provider), out.audit);
  out.fibering = fibering_cover(out.map, oracle_h, scheme, scales);
  out.report = verify_apc_witness(*g->space(), scales.fresh(), out.fibering.witness);
  return out;
}

GroupProductResult product_cover_groups(const ApcOracle& oracle_x, const ApcOracle& oracle_y,
                                        const ScaleSequence& scales) {
  GroupProductResult out;
  out.direct = product_cover(oracle_x, oracle_y, scales, ProductMetric::l1);
  const UniformlyExpansiveMap map = projection_map(out.direct.space, oracle_x.space, oracle_y.space);
  out.fibered =
      fibering_cover(map, oracle_y, projection_fiber_scheme(oracle_x, oracle_y.space->size()), scales);
  out.direct_report = verify_apc_witness(*out.direct.space, scales.fresh(), out.direct.witness);
  out.fibered_report = verify_apc_witness(*out.direct.space, scales.fresh(), out.fibered.witness);
  CoverWitness a = out.direct.witness;
  CoverWitness b = out.fibered.witness;
  a.canonicalize();
  b.canonicalize();
  if (a.size() != b.size()) {
    out.slots_match = false;
    out.mismatch = "slot counts differ: " + std::to_string(a.size()) + " vs " + std::to_string(b.size());
    return out;
  }
  for (std::size_t t = 0; t < a.size(); ++t) {
    if (a.entries[t].family.sets != b.entries[t].family.sets) {
      out.slots_match = false;
      out.mismatch = "slot " + std::to_string(t + 1) + " differs";
      break;
    }
  }
  return out;
}

FreeGroupCoverResult free_product_cover_groups(std::size_t max_order, const Rational& max_norm,
                                               const ScaleSequence& scales, const std::optional<Rational>& margin) {
  const GroupPtr z = integer_lattice(1);
  const auto za = std::make_shared<const CayleyWindow>(WeightedGeneratingSet::standard(z), max_norm);
  const SpacePtr factor = with_basepoint(za->space(), 0);
  const Wedge wedge = wedge_embed(factor, factor);
  ApcOracle oracle = tree_oracle(tree_from_metric(*wedge.space, 0));
  oracle.space = wedge.space;
  oracle.name = "wedge tree";
  const FreeProductWindow window(wedge.space, max_order, max_norm);

  FreeGroupCoverResult out;
  out.words = free_product_cover(window, oracle, scales, margin);
  const Rational radius = max_norm - out.words.margin;
  if (radius.sign() < 0) throw InputError("free group cover: the margin exceeds the window norm");
  const GroupPtr f2 = free_group(2);
  out.group_window = std::make_shared<const CayleyWindow>(WeightedGeneratingSet::standard(f2), radius);

  // Letter of the wedge -> generator power of F_2.
  std::vector<Element> letter(wedge.space->size());
  std::vector<int> factor_of(wedge.space->size(), -1);
  for (PointIndex p = 0; p < factor->size(); ++p) {
    const std::int64_t n = za->element(p)[0];
    for (int side = 0; side < 2; ++side) {
      const PointIndex w = side == 0 ? wedge.from_x[p] : wedge.from_y[p];
      if (w == 0) continue;
      factor_of[w] = side;
      letter[w] = Element(static_cast<std::size_t>(std::abs(n)), (n > 0 ? 1 : -1) * (side + 1));
    }
  }
  std::vector<std::optional<PointIndex>> to_group(window.size());
  for (PointIndex w : out.words.domain) {
    const Word& word = window.word(w);
    bool alternating = true;
    Element g;
    for (std::size_t k = 0; k < word.size(); ++k) {
      if (k > 0 && factor_of[word[k]] == factor_of[word[k - 1]]) alternating = false;
      g.insert(g.end(), letter[word[k]].begin(), letter[word[k]].end());
    }
    if (alternating) to_group[w] = out.group_window->index_of(g);
  }
  for (const auto& entry : out.words.witness.entries) {
    WitnessEntry moved{entry.scale, Family{}, entry.mesh_bound};
    moved.family.label = entry.family.label;
    for (const auto& s : entry.family.sets) {
      PointSet t;
      for (PointIndex w : s) {
        if (to_group[w]) t.push_back(*to_group[w]);
      }
      moved.family.add(make_point_set(std::move(t)));
    }
    out.witness.entries.push_back(std::move(moved));
  }
  out.report = verify_apc_witness(*out.group_window->space(), scales.fresh(), out.witness);

  std::vector<std::pair<PointIndex, PointIndex>> pairs;
  for (PointIndex w = 0; w < window.size(); ++w) {
    if (to_group[w]) pairs.emplace_back(w, *to_group[w]);
  }
  out.embedding.words = pairs.size();
  for (std::size_t i = 0; i < pairs.size() && out.embedding.ok; ++i) {
    for (std::size_t j = i; j < pairs.size(); ++j) {
      ++out.embedding.pairs;
      const Length fp = window.space()->dist(pairs[i].first, pairs[j].first);
      const Length word = out.group_window->space()->dist(pairs[i].second, pairs[j].second);
      if (!(fp == word)) {
        out.embedding.ok = false;
        out.embedding.detail = "word " + window.space()->label(pairs[i].first) + " vs " +
                               window.space()->label(pairs[j].first) + ": " + fp.to_string() + " in the window, " +
                               word.to_string() + " in F_2";
        break;
      }
    }
  }
  return out;
}

}  // namespace coarse
