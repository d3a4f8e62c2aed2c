#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <queue>
#include <string>
#include <unordered_map>
#include <vector>

#include "coarse/combinators.hpp"
#include "coarse/cover.hpp"
#include "coarse/free_product.hpp"
#include "coarse/metric_space.hpp"

namespace coarse {

/// Canonical encoding of a group element; equal elements have equal
/// encodings.
using Element = std::vector<std::int64_t>;
using ElementSet = std::vector<Element>;

struct ElementHash {
  std::size_t operator()(const Element& e) const noexcept;
};

/// A finitely presented concrete group. Elements are exchanged as JSON
/// text: Z^d uses [x1,..,xd], free groups a string of letters ("aB" is
/// a b^-1, "" the identity), tables an integer, direct products an array of
/// components, free products an array of [factor, element] syllables.
class GroupModel {
 public:
  virtual ~GroupModel() = default;
  [[nodiscard]] virtual std::string name() const = 0;
  [[nodiscard]] virtual Element identity() const = 0;
  [[nodiscard]] virtual Element multiply(const Element& a, const Element& b) const = 0;
  [[nodiscard]] virtual Element inverse(const Element& a) const = 0;
  [[nodiscard]] virtual std::string to_json(const Element& a) const = 0;
  /// Throws InputError on malformed text.
  [[nodiscard]] virtual Element from_json(const std::string& text) const = 0;
  /// Short unique label.
  [[nodiscard]] virtual std::string label(const Element& a) const { return to_json(a); }
  /// Model description as a JSON object (the "model" part of a group file).
  [[nodiscard]] virtual std::string describe() const = 0;
  /// A symmetric generating set with unit weights.
  [[nodiscard]] virtual ElementSet standard_generators() const = 0;

  [[nodiscard]] bool is_identity(const Element& a) const { return a == identity(); }
};

using GroupPtr = std::shared_ptr<const GroupModel>;

GroupPtr integer_lattice(std::size_t d);
GroupPtr free_group(std::size_t rank);
/// Multiplication table on 0..n-1; checks closure, identity, inverses and
/// associativity.
GroupPtr table_group(std::vector<std::vector<std::int64_t>> table);
GroupPtr direct_product(std::vector<GroupPtr> factors);
GroupPtr free_product_group(std::vector<GroupPtr> factors);

/// Checks the group axioms on `samples` random triples drawn from the
/// given elements.
PredicateResult check_group_axioms(const GroupModel& group, const ElementSet& elements, std::size_t samples,
                                   std::uint64_t seed);

struct WeightedGenerator {
  Element element;
  Rational weight;
};

/// Finite symmetric generating set with positive weights, w(s) = w(s^-1).
class WeightedGeneratingSet {
 public:
  /// With `symmetrize`, missing inverses are added at the same weight.
  /// Throws InputError for the identity, non-positive weights, duplicate
  /// generators, or inverse pairs with different weights.
  WeightedGeneratingSet(GroupPtr group, std::vector<WeightedGenerator> generators, bool symmetrize = true);

  static WeightedGeneratingSet standard(GroupPtr group, const Rational& weight = 1);

  [[nodiscard]] const GroupPtr& group() const { return group_; }
  [[nodiscard]] const std::vector<WeightedGenerator>& generators() const { return generators_; }
  [[nodiscard]] std::size_t inverse_of(std::size_t s) const { return inverse_.at(s); }
  [[nodiscard]] Rational min_weight() const;

 private:
  GroupPtr group_;
  std::vector<WeightedGenerator> generators_;
  std::vector<std::size_t> inverse_;
};

/// The ball B(e, L) of a weighted word metric, d(g, h) = |g^-1 h|_w.
///
/// Norms are computed by Dijkstra over the Cayley graph. The table of
/// norms up to 2L is built eagerly so that every distance inside the ball
/// is exact; norm() extends the search lazily up to `norm_limit`, beyond
/// which it throws WindowExhausted.
class CayleyWindow {
 public:
  CayleyWindow(WeightedGeneratingSet generators, Rational radius, std::size_t cap = 1'000'000,
               std::optional<Rational> norm_limit = {});

  [[nodiscard]] const GroupPtr& group() const { return gens_.group(); }
  [[nodiscard]] const WeightedGeneratingSet& generators() const { return gens_; }
  [[nodiscard]] const Rational& radius() const { return radius_; }
  [[nodiscard]] const SpacePtr& space() const { return space_; }
  [[nodiscard]] std::size_t size() const { return points_.size(); }
  [[nodiscard]] const Element& element(PointIndex p) const { return points_.at(p); }
  [[nodiscard]] std::optional<PointIndex> index_of(const Element& g) const;
  [[nodiscard]] PointIndex require(const Element& g) const;
  [[nodiscard]] const Rational& point_norm(PointIndex p) const { return point_norms_.at(p); }

  /// Exact |g|_w; thread-safe.
  [[nodiscard]] Rational norm(const Element& g) const;
  [[nodiscard]] Rational distance(const Element& g, const Element& h) const;

  /// g . S for a set of window points; throws WindowExhausted if a product
  /// leaves the window.
  [[nodiscard]] PointSet translate(const Element& g, const PointSet& s) const;

 private:
  struct Search {
    std::mutex mutex;
    std::unordered_map<Element, Rational, ElementHash> settled;
    std::unordered_map<Element, Rational, ElementHash> best;
    std::priority_queue<std::pair<Rational, Element>, std::vector<std::pair<Rational, Element>>, std::greater<>> frontier;
    Rational settled_up_to;  // every element of norm < this is settled
  };
  void settle_until(Search& search, const Rational& limit, std::size_t cap) const;

  WeightedGeneratingSet gens_;
  Rational radius_;
  Rational norm_limit_;
  std::size_t cap_;
  std::shared_ptr<const std::unordered_map<Element, Rational, ElementHash>> table_;  // norms <= 2L
  std::shared_ptr<Search> search_;
  std::vector<Element> points_;
  std::vector<Rational> point_norms_;
  std::unordered_map<Element, PointIndex, ElementHash> index_;
  SpacePtr space_;
};

using WindowPtr = std::shared_ptr<const CayleyWindow>;

/// Sampled left-invariance d(gh, gh') = d(h, h') over window triples whose
/// products stay in the window, and |g| = |g^-1| on every point.
PredicateResult check_left_invariance(const CayleyWindow& window, std::size_t samples, std::uint64_t seed);
PredicateResult check_norm_symmetry(const CayleyWindow& window);

struct Homomorphism {
  GroupPtr source;
  GroupPtr target;
  std::function<Element(const Element&)> map;
  std::string name;

  Element operator()(const Element& g) const { return map(g); }
};

/// Z^d -> Z^k keeping the listed coordinates in order.
Homomorphism coordinate_projection(const GroupPtr& source, std::vector<std::size_t> keep);
Homomorphism identity_homomorphism(const GroupPtr& group);
/// Onto the trivial group Z^0.
Homomorphism trivial_homomorphism(const GroupPtr& source);

/// f(ab) = f(a) f(b) on sampled pairs.
PredicateResult check_homomorphism(const Homomorphism& f, const ElementSet& elements, std::size_t samples,
                                   std::uint64_t seed);

/// An isometric action on a finite window of a metric space. act returns
/// nullopt when g.x falls outside the window.
struct GroupAction {
  SpacePtr space;
  std::function<std::optional<PointIndex>(const Element& g, PointIndex x)> act;
  std::string name;
};

/// g.h = f(g) h on a window of the target group.
GroupAction hom_action(const Homomorphism& f, const WindowPtr& target);
/// Every element fixes every point.
GroupAction trivial_action(const SpacePtr& space);

/// d(g.x, g.x') = d(x, x') on sampled (g, x, x') with both images defined.
PredicateResult check_action_isometric(const CayleyWindow& window, const GroupAction& action, std::size_t samples,
                                       std::uint64_t seed);

/// W_R(x0) = {g in the window : d(g.x0, x0) <= R}. Throws WindowExhausted
/// if g.x0 leaves the action's window for some window point g.
PointSet r_stabilizer(const CayleyWindow& window, const GroupAction& action, PointIndex x0, const Rational& r);

/// rho(N) = floor(N / w_min) * max_s d(s.x0, x0): a non-decreasing upper
/// bound for the orbit map's expansion.
Modulus rho_from_weights(const WeightedGeneratingSet& gens, const GroupAction& action, PointIndex x0);

/// The exact rho(N) = max{sum d(s_i.x0, x0) : sum w(s_i) <= N} by an
/// unbounded knapsack over the weights (scaled to integers), tabulated up
/// to `up_to`; beyond that the weight bound is used.
Modulus rho_exact(const WeightedGeneratingSet& gens, const GroupAction& action, PointIndex x0, const Rational& up_to);

/// g -> g.x0 on the window points, with the weight-derived modulus.
UniformlyExpansiveMap orbit_map(const WindowPtr& window, const GroupAction& action, PointIndex x0,
                                std::optional<Modulus> rho = {});

/// Covers of subsets of the stabilizer W_M(x0) by family_count families,
/// r-disjoint, with member diameters at most bound(M, r).
struct StabilizerCoverProvider {
  std::size_t family_count = 1;
  std::function<Length(const Rational& m, const Rational& r)> bound;
  std::function<std::vector<std::vector<ElementSet>>(const ElementSet& a, const Rational& m, const Rational& r)>
      cover;
  std::string name;
};

/// The whole set as one member; bound(M, r) supplied by the caller.
StabilizerCoverProvider whole_set_provider(std::function<Length(const Rational& m, const Rational& r)> bound);

/// For Z^d -> Z^k given by a coordinate projection with one-dimensional
/// kernel along coordinate c: blocks of length l = max(1, ceil(r / kappa))
/// along c, even and odd blocks in two families, where kappa is the least
/// cost per unit of c among the generators. The bound is the largest
/// G-norm of a difference allowed in one block, computed exactly.
StabilizerCoverProvider coordinate_kernel_provider(const WindowPtr& g, const Homomorphism& f, const WindowPtr& h,
                                                   std::size_t c);

/// Records B per fiber scale M for a scheme and checks it never varies.
struct SchemeAuditLog {
  std::mutex mutex;
  std::map<std::pair<Rational, Rational>, Length> bounds;  // (M, r) -> B
  std::size_t fibers = 0;
  Length max_mesh;
  bool consistent = true;
};

/// Fiber scheme for the orbit map g -> g.x0: a fiber A is translated by
/// g_A^-1 (g_A its first point) into W_M(x0), covered there by the
/// provider, and translated back.
FiberSchemeFactory action_fiber_scheme(const WindowPtr& window, const GroupAction& action, PointIndex x0,
                                       StabilizerCoverProvider provider,
                                       std::shared_ptr<SchemeAuditLog> audit = nullptr);

/// action_fiber_scheme for the action g.h = f(g) h with x0 = e, whose
/// stabilizer W_M(e) is the preimage of the M-ball of the target.
FiberSchemeFactory hom_fiber_scheme(const WindowPtr& window, const Homomorphism& f, const WindowPtr& target,
                                    StabilizerCoverProvider provider, std::shared_ptr<SchemeAuditLog> audit = nullptr);

/// For the projection X x Y -> Y of product_space(X, Y): family j of a
/// fiber A is {A n (U x Y) : U in U_j} from oracle_x, B(M) = M + max mesh.
FiberSchemeFactory projection_fiber_scheme(const ApcOracle& oracle_x, std::size_t target_size);
/// The projection X x Y -> Y as a 1-Lipschitz map.
UniformlyExpansiveMap projection_map(const SpacePtr& product, const SpacePtr& x, const SpacePtr& y);

/// Kernel generators plus lifts of the target's generators at the target's
/// weights. Checks that kernel generators map to e and lifts to their
/// generator.
WeightedGeneratingSet extension_generating_set(const Homomorphism& f, const std::vector<WeightedGenerator>& kernel,
                                               const WeightedGeneratingSet& target,
                                               const std::function<Element(const Element&)>& section);

/// line_oracle for a window of Z, coordinates read from the elements.
ApcOracle integer_window_oracle(const WindowPtr& window);

struct ExtensionResult {
  UniformlyExpansiveMap map;
  FiberingResult fibering;
  VerificationReport report;
  std::shared_ptr<SchemeAuditLog> audit;
};

/// fibering_cover of the window of G along f with hom_fiber_scheme and an
/// oracle for the target window.
ExtensionResult extension_cover(const WindowPtr& g, const Homomorphism& f, const WindowPtr& h,
                                StabilizerCoverProvider provider, const ApcOracle& oracle_h, const ScaleSequence& scales);

struct GroupProductResult {
  ProductResult direct;
  FiberingResult fibered;
  VerificationReport direct_report;
  VerificationReport fibered_report;
  bool slots_match = true;
  std::string mismatch;
};

/// The product of two group windows (l1) covered twice: by product_cover
/// and by fibering over the projection onto the second factor. The two
/// witnesses are compared slot by slot.
GroupProductResult product_cover_groups(const ApcOracle& oracle_x, const ApcOracle& oracle_y,
                                        const ScaleSequence& scales);

struct FreeGroupCoverResult {
  WindowPtr group_window;         // F_2 ball of radius L - margin
  CoverWitness witness;           // on group_window
  VerificationReport report;      // verified with the F_2 word metric
  FreeProductResult words;        // the underlying free-product window run
  EmbeddingReport embedding;      // word metric of F_2 equals the free-product metric
};

/// F_2 = Z * Z through the free-product window over Z_a v Z_b (both of
/// radius L) with a tree oracle for the wedge; the cover of the reduced
/// words of norm <= L - margin is transported to the F_2 Cayley ball.
FreeGroupCoverResult free_product_cover_groups(std::size_t max_order, const Rational& max_norm,
                                               const ScaleSequence& scales, const std::optional<Rational>& margin = {});

}  // namespace coarse
