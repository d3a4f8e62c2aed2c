#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "coarse/metric_space.hpp"
#include "coarse/scale_sequence.hpp"

namespace coarse {

/// One slot of a cover: a family that must be disjoint at `scale` and whose
/// members have diameter at most `mesh_bound`.
struct WitnessEntry {
  Rational scale;
  Family family;
  Length mesh_bound;
};

/// Ordered families U_1, ..., U_n. Empty families are allowed and mark
/// unused slots.
struct CoverWitness {
  std::vector<WitnessEntry> entries;

  [[nodiscard]] std::size_t size() const { return entries.size(); }
  /// Sorts the sets of every family into canonical order.
  void canonicalize();
};

struct WitnessViolation {
  enum class Kind { coverage, disjointness, mesh };
  Kind kind = Kind::coverage;
  std::size_t entry = 0;  // 1-based slot; 0 for coverage
  std::vector<PointIndex> points;
  Length value;
  std::string detail;
};

std::string kind_name(WitnessViolation::Kind kind);

struct EntryVerdict {
  Rational required_scale;  // max(stream scale, declared scale)
  bool disjoint = true;
  bool mesh_ok = true;
  Length actual_mesh;
  std::size_t sets = 0;
};

struct VerificationReport {
  bool ok = true;
  std::size_t points_checked = 0;
  std::vector<EntryVerdict> entries;
  std::vector<WitnessViolation> violations;
  [[nodiscard]] std::string summary(const FiniteMetricSpace& space) const;
};

/// Checks (a) the families jointly cover the domain (all points when no
/// domain is given), (b) entry i is R_i-disjoint, where R_i is the larger
/// of the stream's i-th scale and the scale the entry declares, and (c)
/// every member's diameter is at most the entry's mesh bound. With a
/// domain, (b) and (c) are judged on the members intersected with it.
/// Throws InputError if the witness names points outside the space.
VerificationReport verify_apc_witness(const FiniteMetricSpace& space, const ScaleSequence& scales,
                                      const CoverWitness& witness, const std::optional<PointSet>& domain = {});

/// A cover provider for a fixed space: given a scale stream it returns a
/// witness that passes verify_apc_witness for that stream.
struct ApcOracle {
  SpacePtr space;
  std::string name;
  std::function<CoverWitness(const ScaleSequence&)> cover;

  CoverWitness operator()(const ScaleSequence& scales) const { return cover(scales); }
};

/// Uniform cover of coarse fibers: a fixed number of families, with a mesh
/// bound that depends on the fiber scale M only.
struct FiberCoverScheme {
  std::size_t family_count = 1;
  std::function<Length(const Rational& m)> bound_for_scale;
  /// Covers A (whose image has diameter < m) by family_count families.
  std::function<std::vector<Family>(const PointSet& a, const Rational& m)> cover;
};

using FiberSchemeFactory = std::function<FiberCoverScheme(const ScaleSequence&)>;

}  // namespace coarse
