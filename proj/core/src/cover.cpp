#include "coarse/cover.hpp"

#include <algorithm>
#include <sstream>

namespace coarse {

void CoverWitness::canonicalize() {
  for (auto& e : entries) e.family.canonicalize();
}

std::string kind_name(WitnessViolation::Kind kind) {
  switch (kind) {
    case WitnessViolation::Kind::coverage:
      return "coverage";
    case WitnessViolation::Kind::disjointness:
      return "disjointness";
    case WitnessViolation::Kind::mesh:
      return "mesh";
  }
  return "unknown";
}

std::string VerificationReport::summary(const FiniteMetricSpace& space) const {
  std::ostringstream out;
  out << (ok ? "PASS" : "FAIL") << ": " << entries.size() << " entries, " << points_checked << " points";
  for (const auto& v : violations) {
    out << "\n  " << kind_name(v.kind);
    if (v.entry) out << " at entry " << v.entry;
    out << ":";
    for (PointIndex p : v.points) out << " " << space.label(p);
    if (!v.detail.empty()) out << " (" << v.detail << ")";
  }
  return out.str();
}

VerificationReport verify_apc_witness(const FiniteMetricSpace& space, const ScaleSequence& scales,
                                      const CoverWitness& witness, const std::optional<PointSet>& domain) {
  for (const auto& e : witness.entries) {
    for (const auto& s : e.family.sets) {
      for (PointIndex p : s) space.require(p);
    }
  }
  if (domain) {
    for (PointIndex p : *domain) space.require(p);
  }

  VerificationReport report;
  const PointSet region = domain ? *domain : all_points(space);
  report.points_checked = region.size();

  std::vector<char> covered(space.size(), 0);
  for (const auto& e : witness.entries) {
    for (const auto& s : e.family.sets) {
      for (PointIndex p : s) covered[p] = 1;
    }
  }
  for (PointIndex p : region) {
    if (!covered[p]) {
      report.ok = false;
      report.violations.push_back({WitnessViolation::Kind::coverage, 0, {p}, Length{}, "point not covered"});
      break;
    }
  }

  for (std::size_t i = 0; i < witness.entries.size(); ++i) {
    const WitnessEntry& e = witness.entries[i];
    EntryVerdict verdict;
    verdict.required_scale = max(scales.at(i + 1), e.scale);
    Family restricted;
    for (const auto& s : e.family.sets) restricted.add(domain ? set_intersection(s, *domain) : s);
    verdict.sets = restricted.size();

    if (auto bad = family_disjointness(space, restricted, verdict.required_scale)) {
      verdict.disjoint = false;
      report.ok = false;
      report.violations.push_back({WitnessViolation::Kind::disjointness, i + 1, {bad->pair.a, bad->pair.b},
                                   bad->pair.distance,
                                   "distance " + bad->pair.distance.to_string() + " <= " +
                                       verdict.required_scale.to_string()});
    }
    for (const auto& s : restricted.sets) {
      const auto far = diameter_pair(space, s);
      if (!far) continue;
      verdict.actual_mesh = max(verdict.actual_mesh, far->distance);
      if (far->distance > e.mesh_bound && verdict.mesh_ok) {
        verdict.mesh_ok = false;
        report.ok = false;
        report.violations.push_back({WitnessViolation::Kind::mesh, i + 1, {far->a, far->b}, far->distance,
                                     "diameter " + far->distance.to_string() + " > " + e.mesh_bound.to_string()});
      }
    }
    report.entries.push_back(verdict);
  }
  return report;
}

}  // namespace coarse
