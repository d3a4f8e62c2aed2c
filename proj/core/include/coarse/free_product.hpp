#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "coarse/combinators.hpp"
#include "coarse/cover.hpp"
#include "coarse/metric_space.hpp"
#include "coarse/tree.hpp"

namespace coarse {

/// A word over the letters X \ {x0}, stored as base point indices.
using Word = std::vector<PointIndex>;

Word concat(const Word& u, const Word& v);
/// Sum of the letter norms d(x0, letter). The base must have a basepoint
/// and rational distances.
Rational word_norm(const FiniteMetricSpace& base, const Word& w);
/// Distance obtained by cancelling the common prefix: d(x, x') plus the
/// norms of both tails, or the norm of the remaining tail when one word is
/// a prefix of the other.
Rational fp_distance(const FiniteMetricSpace& base, const Word& a, const Word& b);

/// Smallest distance between distinct points of a finite space.
Rational minimal_gap(const FiniteMetricSpace& space);

/// All words of order <= max_order and norm <= max_norm over a pointed
/// discrete base, with the free-product metric.
///
/// Words are numbered by order, then lexicographically by letter index, so
/// the empty word is 0 and every word comes after its parent (the word
/// without its last letter).
class FreeProductWindow {
 public:
  static constexpr PointIndex kNone = UINT32_MAX;

  FreeProductWindow(SpacePtr base, std::size_t max_order, Rational max_norm, std::size_t cap = 200'000);

  [[nodiscard]] const SpacePtr& base() const { return base_; }
  [[nodiscard]] const SpacePtr& space() const { return space_; }
  [[nodiscard]] std::size_t size() const { return data_->words.size(); }
  [[nodiscard]] std::size_t max_order() const { return max_order_; }
  [[nodiscard]] const Rational& max_norm() const { return max_norm_; }
  /// E: the smallest positive distance in the base.
  [[nodiscard]] const Rational& gap() const { return gap_; }
  [[nodiscard]] const std::vector<PointIndex>& letters() const { return letters_; }

  [[nodiscard]] const Word& word(PointIndex w) const { return data_->words.at(w); }
  [[nodiscard]] const Rational& norm(PointIndex w) const { return data_->norms.at(w); }
  [[nodiscard]] std::size_t order(PointIndex w) const { return data_->words.at(w).size(); }
  [[nodiscard]] PointIndex parent(PointIndex w) const { return parents_.at(w); }
  [[nodiscard]] const std::vector<PointIndex>& children(PointIndex w) const { return children_.at(w); }
  [[nodiscard]] std::optional<PointIndex> find(const Word& w) const;
  [[nodiscard]] const Rational& letter_norm(PointIndex letter) const { return letter_norms_.at(letter); }
  [[nodiscard]] Rational distance(PointIndex a, PointIndex b) const;
  [[nodiscard]] std::string label(const Word& w) const;

  /// Words of norm <= max_norm - margin.
  [[nodiscard]] PointSet domain(const Rational& margin) const;

  /// con_r(a) within the window: words a.w with every letter of w of norm <= r.
  [[nodiscard]] PointSet cone(const PointSet& a, const Rational& r) const;

 private:
  struct Data {
    std::vector<Word> words;
    std::vector<Rational> norms;
    std::vector<std::vector<Rational>> prefix_norms;  // [w][k]: norm of the first k letters
    std::vector<std::vector<Rational>> base_dist;
  };
  SpacePtr base_;
  SpacePtr space_;
  std::size_t max_order_;
  Rational max_norm_;
  Rational gap_;
  std::vector<PointIndex> letters_;
  std::vector<Rational> letter_norms_;  // indexed by base point
  std::shared_ptr<Data> data_;
  std::vector<PointIndex> parents_;
  std::vector<std::vector<PointIndex>> children_;
  std::map<Word, PointIndex> index_;
};

/// True iff all words have the same order k >= 1 and share their first
/// k - 1 letters.
bool is_flat(const FreeProductWindow& window, const PointSet& a);

/// Tree quasi-isometric to con_m(base): a root joined to every base word,
/// and each other cone word joined to its parent. The base must be flat or
/// the single empty word.
struct ConeTree {
  RootedTree tree;
  std::vector<PointIndex> vertex_word;  // vertex v >= 1 <-> window word; vertex 0 is the root
  Rational gap;                         // E
  Rational base_diameter;               // D
  Rational m;                           // M
};

/// With `within`, only the words of `within` and their prefixes in the
/// cone become vertices.
ConeTree cone_tree(const FreeProductWindow& window, const PointSet& base, const Rational& m,
                   const PointSet* within = nullptr);

/// Checks d/M - D/M <= d_T <= d/E + 3 on every pair of cone words.
struct QiReport {
  bool ok = true;
  std::uint64_t pairs = 0;
  std::vector<PointIndex> violation;  // two window words
  std::string detail;
};

QiReport qi_check(const FreeProductWindow& window, const ConeTree& tree);

/// Two r-disjoint families covering con_m(base), pulled back from
/// tree_cover at s = ceil(r/E + 3). The mesh bound is 3 s m + D where D is
/// base_bound if given (it must dominate the base diameter) or the base
/// diameter otherwise.
struct ConeCover {
  Family even;
  Family odd;
  std::int64_t tree_scale = 0;
  Length mesh_bound;
  PointSet cone;
};

/// With `within`, the tree is restricted to the words of `within` and
/// their prefixes in the cone, which leaves tree distances unchanged; the
/// families then cover `within` instead of the whole cone.
ConeCover cone_cover(const FreeProductWindow& window, const PointSet& base, const Rational& m, const Rational& r,
                     const std::optional<Rational>& base_bound = {}, const PointSet* within = nullptr);

/// 3 s m + d with s = ceil(r/E + 3).
std::int64_t cone_tree_scale(const Rational& gap, const Rational& r);
Length cone_cover_bound(const Rational& gap, const Rational& m, const Rational& r, const Rational& d);

/// Minimal-order slice of an r-component of a cone and the check that the
/// whole component lies in con_{m+r+d}(core).
struct ComponentCore {
  PointSet core;
  bool flat = false;  // flat, or the single empty word
  PointSet outside;   // component words not reached from the core
  PointSet artifacts; // the subset of `outside` beyond the margin-reduced window
};

ComponentCore component_core(const FreeProductWindow& window, const PointSet& component, const Rational& m,
                             const Rational& r, const Rational& d, const Rational& margin);

/// The families V_1..V_n (from a cover U_1..U_n of the base) and
/// V_{n+1} = {{empty word}}, with the checks that make them usable.
struct VFamilies {
  std::vector<Family> families;
  std::vector<Rational> member_bounds;  // D_i: bound on member diameters
  Rational threshold;                   // R_{n+1}
  struct Assignment {
    std::size_t family = 0;       // 1-based
    std::size_t member = 0;       // index into families[family-1].sets
    std::size_t heavy_position = 0; // 1-based position of the last heavy letter, 0 if none
  };
  std::vector<Assignment> assignment;  // per window word
  bool coverage_ok = true;
  bool disjoint_ok = true;
  bool flat_ok = true;
  bool bounded_ok = true;
  std::vector<std::string> problems;
  [[nodiscard]] bool ok() const { return coverage_ok && disjoint_ok && flat_ok && bounded_ok; }
};

/// base_cover.entries[i] is the base family U_{i+1}; `scales` supplies R_i
/// and R_{n+1}.
VFamilies build_v_families(const FreeProductWindow& window, const CoverWitness& base_cover, const ScaleSequence& scales);

struct FreeProductResult {
  CoverWitness witness;
  VerificationReport report;
  Rational margin;
  PointSet domain;
  std::size_t base_families = 0;  // n
  Rational cone_scale;            // M = R_{n+1} + 1 of the hypothesis stream
  VFamilies v;
  std::vector<DecomposeAudit> audit;
  std::size_t artifacts = 0;
};

/// Cover of the window from an oracle for the base: the hypothesis
/// families are the R_i-components of con_M(union V_i), each re-covered by
/// cone_cover of its core, assembled by decompose with k = 2. Verified on
/// the words of norm <= L - margin; the default margin is R_{n+1} + M.
FreeProductResult free_product_cover(const FreeProductWindow& window, const ApcOracle& base_oracle,
                                     const ScaleSequence& scales, const std::optional<Rational>& margin = {});

/// X v Y: basepoints glued into "*", other points labelled "X:<id>" and
/// "Y:<id>", cross distances d(x, x0) + d(y0, y).
struct Wedge {
  SpacePtr space;
  std::vector<PointIndex> from_x;  // base index in the wedge per X point
  std::vector<PointIndex> from_y;
};

Wedge wedge_embed(const SpacePtr& x, const SpacePtr& y);

/// Distance between alternating words of X * Y computed from X and Y
/// directly. Letters are (factor, point) pairs with factor 0 for X.
using MixedWord = std::vector<std::pair<int, PointIndex>>;
Rational alternating_distance(const FiniteMetricSpace& x, const FiniteMetricSpace& y, const MixedWord& a,
                              const MixedWord& b);

struct EmbeddingReport {
  bool ok = true;
  std::size_t words = 0;
  std::uint64_t pairs = 0;
  std::string detail;
};

/// Compares fp_distance on alternating words of a window of *(X v Y) with
/// alternating_distance, for every pair.
EmbeddingReport check_wedge_embedding(const SpacePtr& x, const SpacePtr& y, std::size_t max_order,
                                      const Rational& max_norm);

}  // namespace coarse
