#pragma once

#include <string>

#include "coarse/cover.hpp"
#include "coarse/free_product.hpp"
#include "coarse/groups.hpp"
#include "coarse/metric_space.hpp"
#include "coarse/scale_sequence.hpp"
#include "coarse/tree.hpp"

// JSON file formats. Parsers reject unknown fields and report the JSON path
// of the offending value in the InputError message. Dumpers produce a
// canonical form (two-space indent, trailing newline) so that
// dump(parse(f)) == f for canonical files.
//
// Numbers: integers are JSON numbers; other rationals are strings "p/q";
// irrational lengths are strings "sqrt(q)".

namespace coarse {

std::string read_file(const std::string& path);
/// Writes to a temporary file next to `path` and renames it into place.
void write_file_atomic(const std::string& path, const std::string& content);

/// {"points": [ids], "metric": {"kind": "matrix", "rows": [[..]]} |
/// {"kind": "generator", "spec": {"type": ..}}, "basepoint": id?}
SpacePtr parse_space(const std::string& text);
std::string dump_space(const FiniteMetricSpace& space);
/// Builds a space from a generator spec such as {"type": "grid", "extents": [4, 4]}.
SpacePtr space_from_generator(const std::string& spec);

/// {"root": id, "edges": [[parent, child], ..]}
RootedTree parse_tree(const std::string& text);
std::string dump_tree(const RootedTree& tree);

/// {"model": "Z^d" | "free" | "table" | {"product": [..]} | {"freeprod": [..]},
///  "dim" | "rank" | "table": .., "generators": [{"elem": .., "weight": ..}], "radius": L}.
/// Missing generators mean the standard unit-weight set.
struct GroupSpec {
  GroupPtr group;
  WeightedGeneratingSet generators;
  Rational radius;
};
GroupSpec parse_group(const std::string& text);
std::string dump_group(const GroupSpec& spec);

/// {"scales": [..], "extend": "repeat" | "arith:x" | "geom:x",
///  "families": [{"R": .., "mesh": .., "sets": [[ids]]}]}
struct WitnessFile {
  ScaleSequence scales;
  CoverWitness witness;
};
WitnessFile parse_witness(const std::string& text, const FiniteMetricSpace& space);
/// Lists the first max(1, witness.size()) scales of the stream.
std::string dump_witness(const FiniteMetricSpace& space, const CoverWitness& witness, const ScaleSequence& scales);

/// Machine-readable verification report with per-entry verdicts and the
/// violating points by id; `text` gives a short human-readable form.
std::string dump_report(const FiniteMetricSpace& space, const VerificationReport& report, bool text = false);

/// {"base": space file, "max_order": m, "max_norm": L, "words": [[letter ids], ..]}
std::string dump_word_window(const FreeProductWindow& window);
/// Rebuilds the window; a "words" list, if present, must match it.
FreeProductWindow parse_word_window(const std::string& text);

/// DOT graph of the pairs at distance <= r; with a witness, points are
/// coloured by the first slot that contains them.
std::string dot_proximity(const FiniteMetricSpace& space, const Rational& r, const CoverWitness* witness = nullptr);
/// DOT graph of a tree; with a cover, even members are filled blue and odd
/// members orange.
std::string dot_tree(const RootedTree& tree, const TreeCover* cover = nullptr);

}  // namespace coarse
