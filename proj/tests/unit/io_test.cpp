#include <gtest/gtest.h>

#include <filesystem>

#include "coarse/error.hpp"
#include "coarse/generators.hpp"
#include "coarse/io.hpp"
#include "coarse/oracles.hpp"
#include "support.hpp"

namespace coarse {
namespace {

std::string fixture(const std::string& name) { return read_file(std::string(COARSE_FIXTURE_DIR) + "/" + name); }

/// Runs `body` and returns the InputError message, or "" if nothing threw.
template <class F>
std::string input_error(F&& body) {
  try {
    body();
  } catch (const InputError& e) {
    return e.what();
  }
  return "";
}

TEST(Fixtures, CanonicalFilesRoundTripByteForByte) {
  for (const char* name : {"path5.json", "three_point.json"}) {
    const std::string text = fixture(name);
    EXPECT_EQ(dump_space(*parse_space(text)), text) << name;
  }
  const std::string tree = fixture("tree12.json");
  EXPECT_EQ(dump_tree(parse_tree(tree)), tree);
  const std::string words = fixture("words_m2_l4.json");
  EXPECT_EQ(dump_word_window(parse_word_window(words)), words);
  const SpacePtr path = parse_space(fixture("path5.json"));
  const std::string witness = fixture("path5_witness.json");
  const WitnessFile w = parse_witness(witness, *path);
  EXPECT_EQ(dump_witness(*path, w.witness, w.scales), witness);
}

TEST(Fixtures, WitnessesVerifyAsExpected) {
  const SpacePtr path = parse_space(fixture("path5.json"));
  const WitnessFile good = parse_witness(fixture("path5_witness.json"), *path);
  EXPECT_TRUE(verify_apc_witness(*path, good.scales.fresh(), good.witness).ok);
  const WitnessFile bad = parse_witness(fixture("path5_witness_tampered.json"), *path);
  const VerificationReport report = verify_apc_witness(*path, bad.scales.fresh(), bad.witness);
  EXPECT_FALSE(report.ok);
  EXPECT_NE(dump_report(*path, report, true).find("mesh at entry 1"), std::string::npos);
}

TEST(SpaceIo, GeneratorsAndIrrationalLengths) {
  const SpacePtr grid = space_from_generator(R"({"type": "grid", "extents": [3, 2]})");
  EXPECT_EQ(grid->size(), 6u);
  const SpacePtr reparsed = parse_space(dump_space(*grid));
  for (PointIndex a = 0; a < grid->size(); ++a) {
    for (PointIndex b = 0; b < grid->size(); ++b) EXPECT_EQ(reparsed->dist(a, b), grid->dist(a, b));
  }
  const SpacePtr l2 = materialize(product_space(interval_space(0, 1), interval_space(0, 2), ProductMetric::l2));
  const std::string text = dump_space(*l2);
  EXPECT_NE(text.find("sqrt(2)"), std::string::npos);
  EXPECT_EQ(dump_space(*parse_space(text)), text);
  const SpacePtr half = path_space(3, Rational(1, 2));
  EXPECT_NE(dump_space(*materialize(half)).find("\"1/2\""), std::string::npos);
}

TEST(SpaceIo, ErrorsNameTheOffendingPath) {
  EXPECT_EQ(input_error([] { parse_space(R"({"points": ["a"], "metric": {"kind": "matrix", "rows": [[0]]}, "x": 1})"); }),
            "$.x: unknown field");
  EXPECT_NE(input_error([] { parse_space(R"({"points": ["a", "b"], "metric": {"kind": "matrix", "rows": [[0, 1], [1]]}})"); })
                .find("$.metric.rows[1]"),
            std::string::npos);
  EXPECT_NE(input_error([] { parse_space(R"({"points": ["a", "a"], "metric": {"kind": "matrix", "rows": [[0, 1], [1, 0]]}})"); }),
            "");
  EXPECT_NE(input_error([] { parse_space("{not json"); }).find("not valid JSON"), std::string::npos);
  EXPECT_NE(input_error([] { space_from_generator(R"({"type": "moebius"})"); }), "");
}

TEST(TreeIo, RoundTrip) {
  const RootedTree tree = random_tree(30, 2);
  const std::string text = dump_tree(tree);
  EXPECT_EQ(dump_tree(parse_tree(text)), text);
  EXPECT_NE(input_error([] { parse_tree(R"({"root": "a", "edges": [["a", "b"], ["b", "a"]]})"); }), "");
}

TEST(GroupIo, ModelsAndGenerators) {
  const GroupSpec z2 = parse_group(fixture("z2_r4.json"));
  EXPECT_EQ(z2.group->name(), "Z^2");
  EXPECT_EQ(z2.generators.generators().size(), 4u);
  EXPECT_EQ(z2.radius, Rational(4));
  const std::string text = dump_group(z2);
  EXPECT_EQ(dump_group(parse_group(text)), text);
  const GroupSpec f2 = parse_group(fixture("f2_r3.json"));
  EXPECT_EQ(f2.group->name(), "F_2");

  const GroupSpec weighted = parse_group(
      R"({"model": "Z^d", "dim": 1, "generators": [{"elem": [1], "weight": 2}, {"elem": [3], "weight": "5/2"}], "radius": 6})");
  EXPECT_EQ(weighted.generators.generators().size(), 4u);
  EXPECT_EQ(weighted.generators.min_weight(), Rational(2));
  EXPECT_EQ(dump_group(parse_group(dump_group(weighted))), dump_group(weighted));

  const GroupSpec nested = parse_group(
      R"({"model": {"product": [{"model": "Z^d", "dim": 1}, {"model": {"freeprod": [{"model": "table", "table": [[0, 1], [1, 0]]}, {"model": "table", "table": [[0, 1], [1, 0]]}]}}]}, "radius": 2})");
  EXPECT_EQ(nested.group->name(), "Z^1 x (table(2) * table(2))");

  EXPECT_NE(input_error([] { parse_group(R"({"model": "Z^d", "dim": 2})"); }), "");
  EXPECT_EQ(input_error([] { parse_group(R"({"model": "Z^d", "dim": 2, "radius": 1, "colour": 3})"); }),
            "$.colour: unknown field");
}

TEST(WitnessIo, RoundTripOfSolvedCovers) {
  const SpacePtr grid = grid_space({4, 4});
  const ScaleSequence scales({1, 2}, ScaleSequence::Extension::arithmetic, Rational(1, 2));
  const CoverWitness w = grid_oracle(grid, {4, 4})(scales.fresh());
  const std::string text = dump_witness(*grid, w, scales);
  const WitnessFile back = parse_witness(text, *grid);
  EXPECT_EQ(dump_witness(*grid, back.witness, back.scales), text);
  EXPECT_TRUE(verify_apc_witness(*grid, back.scales.fresh(), back.witness).ok);
  for (std::size_t k = 1; k <= w.size(); ++k) EXPECT_EQ(back.scales.at(k), scales.at(k));
  EXPECT_NE(input_error([&] { parse_witness(R"({"scales": [1], "families": [{"R": 1, "mesh": 0, "sets": [["nowhere"]]}]})", *grid); }),
            "");
  EXPECT_NE(input_error([&] { parse_witness(R"({"scales": [1], "extend": "spiral", "families": []})", *grid); }), "");
}

TEST(Dot, MentionsEveryPoint) {
  const SpacePtr path = path_space(4);
  const std::string dot = dot_proximity(*path, 1);
  EXPECT_EQ(dot.rfind("graph", 0), 0u);
  for (PointIndex p = 0; p < 4; ++p) EXPECT_NE(dot.find("\"" + path->label(p) + "\""), std::string::npos);
  const RootedTree tree = random_tree(10, 1);
  const TreeCover cover = tree_cover(tree, 2);
  EXPECT_NE(dot_tree(tree, &cover).find("fillcolor"), std::string::npos);
}

TEST(Files, AtomicWriteReplacesContent) {
  const auto dir = std::filesystem::temp_directory_path() / "coarse_io_test";
  std::filesystem::create_directories(dir);
  const std::string path = (dir / "out.json").string();
  write_file_atomic(path, "first\n");
  write_file_atomic(path, "second\n");
  EXPECT_EQ(read_file(path), "second\n");
  EXPECT_FALSE(std::filesystem::exists(path + ".tmp"));
  EXPECT_THROW(read_file((dir / "missing.json").string()), InputError);
  std::filesystem::remove_all(dir);
}

}  // namespace
}  // namespace coarse
