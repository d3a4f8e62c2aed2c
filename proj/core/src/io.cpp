#include "coarse/io.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

#include "coarse/error.hpp"
#include "coarse/generators.hpp"

namespace coarse {

using nlohmann::json;
using ordered = nlohmann::ordered_json;

namespace {

json parse_text(const std::string& text, const std::string& what) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw InputError(what + ": not valid JSON: " + e.what());
  }
}

[[noreturn]] void fail(const std::string& path, const std::string& message) { throw InputError(path + ": " + message); }

void check_object(const json& j, const std::string& path, std::initializer_list<const char*> allowed,
                  std::initializer_list<const char*> required = {}) {
  if (!j.is_object()) fail(path, "expected an object");
  const std::set<std::string> ok(allowed.begin(), allowed.end());
  for (const auto& [key, value] : j.items()) {
    if (!ok.count(key)) fail(path + "." + key, "unknown field");
  }
  for (const char* key : required) {
    if (!j.contains(key)) fail(path + "." + key, "missing field");
  }
}

const json& field(const json& j, const std::string& path, const char* key) {
  if (!j.contains(key)) fail(path + "." + key, "missing field");
  return j.at(key);
}

std::string as_id(const json& j, const std::string& path) {
  if (j.is_string()) return j.get<std::string>();
  if (j.is_number_integer()) return std::to_string(j.get<std::int64_t>());
  fail(path, "expected a point id (string or integer)");
}

Rational as_rational(const json& j, const std::string& path) {
  try {
    if (j.is_number_integer()) return Rational(j.get<std::int64_t>());
    if (j.is_string()) return Rational::parse(j.get<std::string>());
    if (j.is_number_float()) return Rational::parse(j.dump());
  } catch (const std::exception& e) {
    fail(path, e.what());
  }
  fail(path, "expected a number or a \"p/q\" string");
}

Length as_length(const json& j, const std::string& path) {
  if (j.is_string()) {
    try {
      return Length::parse(j.get<std::string>());
    } catch (const std::exception& e) {
      fail(path, e.what());
    }
  }
  return Length(as_rational(j, path));
}

std::size_t as_count(const json& j, const std::string& path) {
  if (!j.is_number_unsigned()) fail(path, "expected a non-negative integer");
  return j.get<std::size_t>();
}

ordered rational_json(const Rational& r) {
  if (r.is_integer()) return r.num();
  return r.to_string();
}

ordered length_json(const Length& l) {
  if (l.is_rational()) return rational_json(l.rational());
  return l.to_string();
}

std::string finish(const ordered& j) { return j.dump(2) + "\n"; }

ordered space_json(const FiniteMetricSpace& space) {
  ordered out;
  out["points"] = space.labels();
  if (!space.generator().empty()) {
    out["metric"] = {{"kind", "generator"}, {"spec", ordered::parse(space.generator())}};
  } else {
    ordered rows = ordered::array();
    for (PointIndex p = 0; p < space.size(); ++p) {
      ordered row = ordered::array();
      for (PointIndex q = 0; q < space.size(); ++q) row.push_back(length_json(space.dist(p, q)));
      rows.push_back(std::move(row));
    }
    out["metric"] = {{"kind", "matrix"}, {"rows", std::move(rows)}};
  }
  if (space.basepoint()) out["basepoint"] = space.label(*space.basepoint());
  return out;
}

SpacePtr space_from_json(const json& j, const std::string& path) {
  check_object(j, path, {"points", "metric", "basepoint"}, {"metric"});
  const json& metric = j.at("metric");
  check_object(metric, path + ".metric", {"kind", "rows", "spec"}, {"kind"});
  const std::string kind = metric.at("kind").is_string() ? metric.at("kind").get<std::string>() : "";
  SpacePtr space;
  if (kind == "generator") {
    space = space_from_generator(field(metric, path + ".metric", "spec").dump());
    if (j.contains("points")) {
      const json& points = j.at("points");
      if (!points.is_array() || points.size() != space->size()) fail(path + ".points", "does not match the generator");
      for (std::size_t k = 0; k < points.size(); ++k) {
        if (as_id(points[k], path + ".points[" + std::to_string(k) + "]") != space->label(static_cast<PointIndex>(k))) {
          fail(path + ".points[" + std::to_string(k) + "]", "does not match the generator");
        }
      }
    }
  } else if (kind == "matrix") {
    const json& points = field(j, path, "points");
    if (!points.is_array()) fail(path + ".points", "expected an array");
    std::vector<std::string> labels;
    for (std::size_t k = 0; k < points.size(); ++k) labels.push_back(as_id(points[k], path + ".points[" + std::to_string(k) + "]"));
    const json& rows = field(metric, path + ".metric", "rows");
    if (!rows.is_array() || rows.size() != labels.size()) fail(path + ".metric.rows", "expected one row per point");
    std::vector<std::vector<Length>> table;
    for (std::size_t r = 0; r < rows.size(); ++r) {
      const std::string rp = path + ".metric.rows[" + std::to_string(r) + "]";
      if (!rows[r].is_array() || rows[r].size() != labels.size()) fail(rp, "expected one entry per point");
      std::vector<Length> row;
      for (std::size_t c = 0; c < rows[r].size(); ++c) row.push_back(as_length(rows[r][c], rp + "[" + std::to_string(c) + "]"));
      table.push_back(std::move(row));
    }
    try {
      space = matrix_space(std::move(labels), std::move(table));
    } catch (const InputError& e) {
      fail(path + ".points", e.what());
    }
  } else {
    fail(path + ".metric.kind", "expected \"matrix\" or \"generator\"");
  }
  if (j.contains("basepoint")) {
    const std::string id = as_id(j.at("basepoint"), path + ".basepoint");
    const auto p = space->find(id);
    if (!p) fail(path + ".basepoint", "unknown point '" + id + "'");
    space = with_basepoint(space, *p);
  }
  return space;
}

GroupPtr model_from_json(const json& j, const std::string& path, bool top_level) {
  if (top_level) {
    check_object(j, path, {"model", "dim", "rank", "table", "generators", "radius"}, {"model"});
  } else {
    check_object(j, path, {"model", "dim", "rank", "table"}, {"model"});
  }
  const json& model = j.at("model");
  if (model.is_string()) {
    const std::string name = model.get<std::string>();
    if (name == "Z^d") return integer_lattice(as_count(field(j, path, "dim"), path + ".dim"));
    if (name == "free") return free_group(as_count(field(j, path, "rank"), path + ".rank"));
    if (name == "table") {
      const json& table = field(j, path, "table");
      std::vector<std::vector<std::int64_t>> rows;
      try {
        rows = table.get<std::vector<std::vector<std::int64_t>>>();
      } catch (const json::exception&) {
        fail(path + ".table", "expected a square integer table");
      }
      return table_group(std::move(rows));
    }
    fail(path + ".model", "unknown model '" + name + "'");
  }
  if (model.is_object() && model.size() == 1) {
    const auto& [key, list] = *model.items().begin();
    if ((key == "product" || key == "freeprod") && list.is_array() && !list.empty()) {
      std::vector<GroupPtr> factors;
      for (std::size_t k = 0; k < list.size(); ++k) {
        factors.push_back(model_from_json(list[k], path + ".model." + key + "[" + std::to_string(k) + "]", false));
      }
      return key == "product" ? direct_product(std::move(factors)) : free_product_group(std::move(factors));
    }
  }
  fail(path + ".model", "expected a model name or {\"product\": [..]} / {\"freeprod\": [..]}");
}

}  // namespace

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read '" + path + "'");
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

void write_file_atomic(const std::string& path, const std::string& content) {
  const std::filesystem::path target(path);
  const std::filesystem::path temp = target.string() + ".tmp";
  {
    std::ofstream out(temp, std::ios::binary | std::ios::trunc);
    if (!out) throw InputError("cannot write '" + temp.string() + "'");
    out << content;
    out.flush();
    if (!out) throw InputError("cannot write '" + temp.string() + "'");
  }
  std::error_code ec;
  std::filesystem::rename(temp, target, ec);
  if (ec) throw InputError("cannot move '" + temp.string() + "' to '" + path + "': " + ec.message());
}

SpacePtr space_from_generator(const std::string& spec) {
  const json j = parse_text(spec, "generator spec");
  const std::string path = "$.metric.spec";
  if (!j.is_object() || !j.contains("type") || !j.at("type").is_string()) fail(path, "expected an object with a \"type\"");
  const std::string type = j.at("type").get<std::string>();
  auto integer = [&](const char* key) {
    const json& v = field(j, path, key);
    if (!v.is_number_integer()) fail(path + "." + key, "expected an integer");
    return v.get<std::int64_t>();
  };
  if (type == "interval") {
    check_object(j, path, {"type", "lo", "hi"}, {"lo", "hi"});
    return interval_space(integer("lo"), integer("hi"));
  }
  if (type == "grid") {
    check_object(j, path, {"type", "extents"}, {"extents"});
    std::vector<std::int64_t> extents;
    try {
      extents = j.at("extents").get<std::vector<std::int64_t>>();
    } catch (const json::exception&) {
      fail(path + ".extents", "expected an integer array");
    }
    return grid_space(extents);
  }
  if (type == "path") {
    check_object(j, path, {"type", "n", "spacing"}, {"n"});
    const Rational spacing = j.contains("spacing") ? as_rational(j.at("spacing"), path + ".spacing") : Rational(1);
    return path_space(static_cast<std::size_t>(integer("n")), spacing);
  }
  if (type == "cycle") {
    check_object(j, path, {"type", "n"}, {"n"});
    return cycle_space(static_cast<std::size_t>(integer("n")));
  }
  if (type == "star") {
    check_object(j, path, {"type", "leaves"}, {"leaves"});
    return star_space(static_cast<std::size_t>(integer("leaves")));
  }
  if (type == "hypercube_union") {
    check_object(j, path, {"type", "n"}, {"n"});
    return hypercube_union(static_cast<int>(integer("n")));
  }
  fail(path + ".type", "unknown generator '" + type + "'");
}

SpacePtr parse_space(const std::string& text) { return space_from_json(parse_text(text, "space file"), "$"); }

std::string dump_space(const FiniteMetricSpace& space) { return finish(space_json(space)); }

RootedTree parse_tree(const std::string& text) {
  const json j = parse_text(text, "tree file");
  check_object(j, "$", {"root", "edges"}, {"root", "edges"});
  const std::string root = as_id(j.at("root"), "$.root");
  const json& edges = j.at("edges");
  if (!edges.is_array()) fail("$.edges", "expected an array");
  std::vector<std::pair<std::string, std::string>> pairs;
  for (std::size_t k = 0; k < edges.size(); ++k) {
    const std::string p = "$.edges[" + std::to_string(k) + "]";
    if (!edges[k].is_array() || edges[k].size() != 2) fail(p, "expected [parent, child]");
    pairs.emplace_back(as_id(edges[k][0], p + "[0]"), as_id(edges[k][1], p + "[1]"));
  }
  try {
    return RootedTree::from_edges(root, pairs);
  } catch (const InputError& e) {
    fail("$.edges", e.what());
  }
}

std::string dump_tree(const RootedTree& tree) {
  ordered out;
  out["root"] = tree.label(tree.root());
  ordered edges = ordered::array();
  for (const auto& [p, c] : tree.edges()) edges.push_back({tree.label(p), tree.label(c)});
  out["edges"] = std::move(edges);
  return finish(out);
}

GroupSpec parse_group(const std::string& text) {
  const json j = parse_text(text, "group file");
  GroupPtr group = model_from_json(j, "$", true);
  std::vector<WeightedGenerator> gens;
  if (j.contains("generators")) {
    const json& list = j.at("generators");
    if (!list.is_array()) fail("$.generators", "expected an array");
    for (std::size_t k = 0; k < list.size(); ++k) {
      const std::string p = "$.generators[" + std::to_string(k) + "]";
      check_object(list[k], p, {"elem", "weight"}, {"elem"});
      Element e;
      try {
        e = group->from_json(list[k].at("elem").dump());
      } catch (const InputError& err) {
        fail(p + ".elem", err.what());
      }
      const Rational w = list[k].contains("weight") ? as_rational(list[k].at("weight"), p + ".weight") : Rational(1);
      gens.push_back({std::move(e), w});
    }
  } else {
    for (auto& e : group->standard_generators()) gens.push_back({std::move(e), Rational(1)});
  }
  const Rational radius = as_rational(field(j, "$", "radius"), "$.radius");
  try {
    return {group, WeightedGeneratingSet(group, std::move(gens)), radius};
  } catch (const InputError& e) {
    fail("$.generators", e.what());
  }
}

std::string dump_group(const GroupSpec& spec) {
  ordered out = ordered::parse(spec.group->describe());
  ordered gens = ordered::array();
  for (const auto& g : spec.generators.generators()) {
    gens.push_back({{"elem", ordered::parse(spec.group->to_json(g.element))}, {"weight", rational_json(g.weight)}});
  }
  out["generators"] = std::move(gens);
  out["radius"] = rational_json(spec.radius);
  return finish(out);
}

WitnessFile parse_witness(const std::string& text, const FiniteMetricSpace& space) {
  const json j = parse_text(text, "witness file");
  check_object(j, "$", {"scales", "extend", "families"}, {"scales", "families"});
  const json& scales = j.at("scales");
  if (!scales.is_array() || scales.empty()) fail("$.scales", "expected a non-empty array");
  std::vector<Rational> prefix;
  for (std::size_t k = 0; k < scales.size(); ++k) prefix.push_back(as_rational(scales[k], "$.scales[" + std::to_string(k) + "]"));
  Rational parameter;
  ScaleSequence::Extension ext = ScaleSequence::Extension::repeat_last;
  if (j.contains("extend")) {
    if (!j.at("extend").is_string()) fail("$.extend", "expected a string");
    try {
      ext = parse_extension(j.at("extend").get<std::string>(), parameter);
    } catch (const std::exception& e) {
      fail("$.extend", e.what());
    }
  }
  WitnessFile out{ScaleSequence({Rational(0)}, ScaleSequence::Extension::repeat_last, Rational(0)), {}};
  try {
    out.scales = ScaleSequence(prefix, ext, parameter);
  } catch (const InputError& e) {
    fail("$.scales", e.what());
  }
  const json& families = j.at("families");
  if (!families.is_array()) fail("$.families", "expected an array");
  for (std::size_t k = 0; k < families.size(); ++k) {
    const std::string p = "$.families[" + std::to_string(k) + "]";
    check_object(families[k], p, {"R", "mesh", "sets", "label"}, {"sets"});
    WitnessEntry entry;
    entry.scale = families[k].contains("R") ? as_rational(families[k].at("R"), p + ".R") : Rational(0);
    entry.mesh_bound = families[k].contains("mesh") ? as_length(families[k].at("mesh"), p + ".mesh") : Length(0);
    if (families[k].contains("label")) {
      if (!families[k].at("label").is_string()) fail(p + ".label", "expected a string");
      entry.family.label = families[k].at("label").get<std::string>();
    }
    const json& sets = families[k].at("sets");
    if (!sets.is_array()) fail(p + ".sets", "expected an array of arrays");
    for (std::size_t s = 0; s < sets.size(); ++s) {
      const std::string sp = p + ".sets[" + std::to_string(s) + "]";
      if (!sets[s].is_array()) fail(sp, "expected an array of point ids");
      std::vector<PointIndex> members;
      for (std::size_t m = 0; m < sets[s].size(); ++m) {
        const std::string id = as_id(sets[s][m], sp + "[" + std::to_string(m) + "]");
        const auto idx = space.find(id);
        if (!idx) fail(sp + "[" + std::to_string(m) + "]", "unknown point '" + id + "'");
        members.push_back(*idx);
      }
      entry.family.add(make_point_set(std::move(members)));
    }
    out.witness.entries.push_back(std::move(entry));
  }
  return out;
}

std::string dump_witness(const FiniteMetricSpace& space, const CoverWitness& witness_in, const ScaleSequence& scales) {
  CoverWitness witness = witness_in;
  witness.canonicalize();
  const ScaleSequence stream = scales.fresh();
  ordered out;
  ordered list = ordered::array();
  for (std::size_t k = 1; k <= std::max<std::size_t>(1, witness.size()); ++k) list.push_back(rational_json(stream.at(k)));
  out["scales"] = std::move(list);
  out["extend"] = "repeat";
  ordered families = ordered::array();
  for (const auto& e : witness.entries) {
    ordered f;
    f["R"] = rational_json(e.scale);
    f["mesh"] = length_json(e.mesh_bound);
    if (!e.family.label.empty()) f["label"] = e.family.label;
    ordered sets = ordered::array();
    for (const auto& s : e.family.sets) {
      ordered ids = ordered::array();
      for (PointIndex p : s) ids.push_back(space.label(p));
      sets.push_back(std::move(ids));
    }
    f["sets"] = std::move(sets);
    families.push_back(std::move(f));
  }
  out["families"] = std::move(families);
  return finish(out);
}

std::string dump_report(const FiniteMetricSpace& space, const VerificationReport& report, bool text) {
  if (text) return report.summary(space) + "\n";
  ordered out;
  out["ok"] = report.ok;
  out["points_checked"] = report.points_checked;
  ordered entries = ordered::array();
  for (std::size_t k = 0; k < report.entries.size(); ++k) {
    const auto& e = report.entries[k];
    entries.push_back({{"slot", k + 1},
                       {"required_scale", rational_json(e.required_scale)},
                       {"sets", e.sets},
                       {"disjoint", e.disjoint},
                       {"mesh_ok", e.mesh_ok},
                       {"actual_mesh", length_json(e.actual_mesh)}});
  }
  out["entries"] = std::move(entries);
  ordered violations = ordered::array();
  for (const auto& v : report.violations) {
    ordered points = ordered::array();
    for (PointIndex p : v.points) points.push_back(space.label(p));
    violations.push_back({{"kind", kind_name(v.kind)},
                          {"slot", v.entry},
                          {"points", std::move(points)},
                          {"value", length_json(v.value)},
                          {"detail", v.detail}});
  }
  out["violations"] = std::move(violations);
  return finish(out);
}

std::string dump_word_window(const FreeProductWindow& window) {
  ordered out;
  out["base"] = space_json(*window.base());
  out["max_order"] = window.max_order();
  out["max_norm"] = rational_json(window.max_norm());
  ordered words = ordered::array();
  for (PointIndex w = 0; w < window.size(); ++w) {
    ordered letters = ordered::array();
    for (PointIndex l : window.word(w)) letters.push_back(window.base()->label(l));
    words.push_back(std::move(letters));
  }
  out["words"] = std::move(words);
  return finish(out);
}

FreeProductWindow parse_word_window(const std::string& text) {
  const json j = parse_text(text, "word window file");
  check_object(j, "$", {"base", "max_order", "max_norm", "words"}, {"base", "max_order", "max_norm"});
  SpacePtr base = space_from_json(j.at("base"), "$.base");
  FreeProductWindow window(base, as_count(j.at("max_order"), "$.max_order"), as_rational(j.at("max_norm"), "$.max_norm"));
  if (j.contains("words")) {
    const json& words = j.at("words");
    if (!words.is_array() || words.size() != window.size()) fail("$.words", "does not match the window");
    for (std::size_t k = 0; k < words.size(); ++k) {
      const std::string p = "$.words[" + std::to_string(k) + "]";
      if (!words[k].is_array()) fail(p, "expected an array of letter ids");
      Word w;
      for (std::size_t m = 0; m < words[k].size(); ++m) {
        const std::string id = as_id(words[k][m], p + "[" + std::to_string(m) + "]");
        const auto idx = base->find(id);
        if (!idx) fail(p + "[" + std::to_string(m) + "]", "unknown letter '" + id + "'");
        w.push_back(*idx);
      }
      if (w != window.word(static_cast<PointIndex>(k))) fail(p, "does not match the window");
    }
  }
  return window;
}

namespace {

std::string quoted(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + "\"";
}

constexpr const char* kPalette[] = {"#4e79a7", "#f28e2b", "#59a14f", "#e15759", "#76b7b2",
                                    "#edc948", "#b07aa1", "#ff9da7", "#9c755f", "#bab0ac"};

}  // namespace

std::string dot_proximity(const FiniteMetricSpace& space, const Rational& r, const CoverWitness* witness) {
  std::vector<int> slot(space.size(), -1);
  if (witness) {
    for (std::size_t t = 0; t < witness->size(); ++t) {
      for (const auto& s : witness->entries[t].family.sets) {
        for (PointIndex p : s) {
          if (slot.at(p) < 0) slot[p] = static_cast<int>(t);
        }
      }
    }
  }
  std::ostringstream out;
  out << "graph proximity {\n  node [style=filled, fillcolor=white];\n";
  for (PointIndex p = 0; p < space.size(); ++p) {
    out << "  " << p << " [label=" << quoted(space.label(p));
    if (slot[p] >= 0) out << ", fillcolor=\"" << kPalette[slot[p] % 10] << "\", slot=" << slot[p] + 1;
    out << "];\n";
  }
  const Length bound(r);
  for (PointIndex p = 0; p < space.size(); ++p) {
    for (PointIndex q = p + 1; q < space.size(); ++q) {
      const Length d = space.dist(p, q);
      if (d <= bound) out << "  " << p << " -- " << q << " [label=" << quoted(d.to_string()) << "];\n";
    }
  }
  out << "}\n";
  return out.str();
}

std::string dot_tree(const RootedTree& tree, const TreeCover* cover) {
  std::vector<int> parity(tree.size(), -1);
  if (cover) {
    for (const auto& s : cover->even.sets) {
      for (PointIndex p : s) parity.at(p) = 0;
    }
    for (const auto& s : cover->odd.sets) {
      for (PointIndex p : s) parity.at(p) = 1;
    }
  }
  std::ostringstream out;
  out << "digraph tree {\n  node [style=filled, fillcolor=white];\n";
  for (std::uint32_t v : tree.bfs_order()) {
    out << "  " << v << " [label=" << quoted(tree.label(v));
    if (parity[v] >= 0) out << ", fillcolor=\"" << kPalette[parity[v]] << "\"";
    out << "];\n";
  }
  for (const auto& [p, c] : tree.edges()) out << "  " << p << " -> " << c << ";\n";
  out << "}\n";
  return out.str();
}

}  // namespace coarse
