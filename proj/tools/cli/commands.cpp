#include "commands.hpp"

#include <algorithm>
#include <fstream>
#include <functional>
#include <memory>
#include <ostream>
#include <sstream>

#include "json.hpp"

#include "coarse/combinators.hpp"
#include "coarse/cover.hpp"
#include "coarse/error.hpp"
#include "coarse/free_product.hpp"
#include "coarse/generators.hpp"
#include "coarse/groups.hpp"
#include "coarse/io.hpp"
#include "coarse/oracles.hpp"
#include "coarse/solver.hpp"
#include "coarse/tree.hpp"

namespace coarse::cli {

using Json = nlohmann::ordered_json;

namespace {

Json rational_json(const Rational& r) {
  if (r.is_integer()) return r.num();
  return r.to_string();
}

Json length_json(const Length& l) {
  if (l.is_rational()) return rational_json(l.rational());
  return l.to_string();
}

Rational parse_rational(const std::string& text, const std::string& flag) {
  try {
    return Rational::parse(text);
  } catch (const std::exception& e) {
    throw InputError(flag + ": " + e.what());
  }
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, sep)) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

ScaleSequence parse_scales(const RunConfig& config) {
  std::vector<Rational> prefix;
  for (const auto& item : split(config.scales, ',')) prefix.push_back(parse_rational(item, "--scales"));
  Rational parameter;
  const auto extension = parse_extension(config.extend, parameter);
  return ScaleSequence(std::move(prefix), extension, parameter);
}

/// Order and norm of a free-product window from "m,L".
std::pair<std::size_t, Rational> parse_word_window_flag(const std::string& text) {
  const auto parts = split(text, ',');
  if (parts.size() != 2) throw InputError("--window: expected \"order,norm\" such as \"3,9\"");
  const Rational order = parse_rational(parts[0], "--window");
  if (!order.is_integer() || order.sign() < 0) throw InputError("--window: order must be a non-negative integer");
  return {static_cast<std::size_t>(order.num()), parse_rational(parts[1], "--window")};
}

/// A space loaded from any of the file kinds, with enough context to build
/// an oracle for it and to save it again.
struct Loaded {
  SpacePtr space;
  std::shared_ptr<RootedTree> tree;
  std::shared_ptr<FreeProductWindow> words;
  WindowPtr group;
  std::function<std::string()> save;
};

Loaded load_any(const std::string& path, const RunConfig& config) {
  const std::string text = read_file(path);
  nlohmann::json probe;
  try {
    probe = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw InputError(path + ": not valid JSON: " + e.what());
  }
  Loaded out;
  if (probe.is_object() && probe.contains("edges")) {
    out.tree = std::make_shared<RootedTree>(parse_tree(text));
    out.space = out.tree->as_space();
    out.save = [tree = out.tree] { return dump_tree(*tree); };
  } else if (probe.is_object() && probe.contains("max_order")) {
    out.words = std::make_shared<FreeProductWindow>(parse_word_window(text));
    out.space = out.words->space();
    out.save = [w = out.words] { return dump_word_window(*w); };
  } else if (probe.is_object() && probe.contains("model")) {
    GroupSpec spec = parse_group(text);
    if (!config.window.empty()) spec.radius = parse_rational(config.window, "--window");
    out.group = std::make_shared<const CayleyWindow>(spec.generators, spec.radius);
    out.space = out.group->space();
    out.save = [spec] { return dump_group(spec); };
  } else {
    out.space = parse_space(text);
    out.save = [space = out.space] { return dump_space(*space); };
  }
  return out;
}

/// Coordinates of a space that sits isometrically on the line, if known.
std::optional<std::vector<Rational>> line_coordinates(const Loaded& loaded) {
  if (loaded.group && loaded.group->group()->name() == "Z^1" ) {
    std::vector<Rational> coords;
    for (PointIndex p = 0; p < loaded.group->size(); ++p) coords.emplace_back(loaded.group->element(p).at(0));
    return coords;
  }
  const std::string& gen = loaded.space->generator();
  if (gen.empty()) return std::nullopt;
  const auto spec = nlohmann::json::parse(gen);
  const std::string type = spec.at("type").get<std::string>();
  std::vector<Rational> coords;
  if (type == "interval") {
    for (const auto& label : loaded.space->labels()) coords.push_back(Rational::parse(label));
    return coords;
  }
  if (type == "path") {
    const Rational spacing = spec.contains("spacing") ? Rational::parse(spec.at("spacing").get<std::string>()) : Rational(1);
    for (std::size_t i = 0; i < loaded.space->size(); ++i) coords.push_back(Rational(static_cast<std::int64_t>(i)) * spacing);
    return coords;
  }
  return std::nullopt;
}

ApcOracle auto_oracle(const Loaded& loaded, const RunConfig& config) {
  if (loaded.tree) {
    ApcOracle oracle = tree_oracle(*loaded.tree);
    oracle.space = loaded.space;
    return oracle;
  }
  if (auto coords = line_coordinates(loaded)) return line_oracle(loaded.space, std::move(*coords));
  const std::string& gen = loaded.space->generator();
  if (!gen.empty()) {
    const auto spec = nlohmann::json::parse(gen);
    if (spec.at("type") == "grid") return grid_oracle(loaded.space, spec.at("extents").get<std::vector<std::int64_t>>());
  }
  if (loaded.space->size() <= config.cap) return exact_oracle(loaded.space, SolverOptions{config.cap});
  return trivial_oracle(loaded.space);
}

void emit(std::ostream& out, const Json& report, const std::string& text, bool as_text) {
  if (as_text) {
    out << text;
  } else {
    out << report.dump(2) << "\n";
  }
}

Json report_json(const FiniteMetricSpace& space, const VerificationReport& report) {
  return Json::parse(dump_report(space, report));
}

/// Verifies a freshly built witness, writes it (and its space and DOT view
/// when asked), reloads the written text and verifies again.
struct Finished {
  VerificationReport report;
  bool roundtrip = true;
  Json json;
};

Finished finish_witness(const Loaded& loaded, const CoverWitness& witness, const ScaleSequence& scales,
                        const RunConfig& config, const std::optional<PointSet>& domain = {}) {
  Finished f;
  const FiniteMetricSpace& space = *loaded.space;
  f.report = verify_apc_witness(space, scales.fresh(), witness, domain);
  const std::string text = dump_witness(space, witness, scales);
  const WitnessFile again = parse_witness(text, space);
  const VerificationReport second = verify_apc_witness(space, again.scales, again.witness, domain);
  f.roundtrip = second.ok == f.report.ok;
  if (!config.out.empty()) write_file_atomic(config.out, text);
  if (!config.space_out.empty()) write_file_atomic(config.space_out, loaded.save());
  if (!config.dot.empty()) write_file_atomic(config.dot, dot_proximity(space, scales.fresh().at(1), &witness));
  f.json["families"] = witness.size();
  f.json["verification"] = report_json(space, f.report);
  f.json["roundtrip"] = f.roundtrip;
  return f;
}

std::string verdict_line(const std::string& what, bool ok) { return what + (ok ? ": ok\n" : ": FAILED\n"); }

void require_inputs(const RunConfig& config, std::size_t n, const std::string& command) {
  if (config.inputs.size() != n) {
    throw InputError(command + ": expected " + std::to_string(n) + " input file" + (n == 1 ? "" : "s") + ", got " +
                     std::to_string(config.inputs.size()));
  }
}

// --- space -----------------------------------------------------------------

int space_validate(const RunConfig& config, std::ostream& out) {
  require_inputs(config, 1, "space validate");
  const Loaded loaded = load_any(config.inputs[0], config);
  ValidationLimits limits;
  limits.seed = config.seed;
  const MetricReport report = validate_metric(*loaded.space, limits);
  Json j;
  j["valid"] = report.valid;
  j["points"] = loaded.space->size();
  j["pairs_checked"] = report.pairs_checked;
  j["triangles_checked"] = report.triangles_checked;
  j["pairs_exhaustive"] = report.pairs_exhaustive;
  j["triangles_exhaustive"] = report.triangles_exhaustive;
  Json issues = Json::array();
  std::string text = verdict_line("metric on " + std::to_string(loaded.space->size()) + " points", report.valid);
  for (const auto& issue : report.issues) {
    Json points = Json::array();
    for (PointIndex p : issue.points) points.push_back(loaded.space->label(p));
    issues.push_back({{"axiom", issue.axiom}, {"points", points}, {"detail", issue.detail}});
    text += "  " + issue.axiom + ": " + issue.detail + "\n";
  }
  j["issues"] = std::move(issues);
  emit(out, j, text, config.text);
  return report.valid ? kPass : kFail;
}

int space_export(const RunConfig& config, std::ostream& out) {
  SpacePtr space;
  Loaded loaded;
  if (!config.generator.empty()) {
    if (!config.inputs.empty()) throw InputError("space export: give either an input file or --gen, not both");
    loaded.space = space_from_generator(config.generator);
    loaded.save = [s = loaded.space] { return dump_space(*s); };
  } else {
    require_inputs(config, 1, "space export");
    loaded = load_any(config.inputs[0], config);
  }
  const std::string text = loaded.save();
  if (!config.dot.empty()) {
    const Rational r = parse_rational(split(config.scales, ',').at(0), "--scales");
    write_file_atomic(config.dot, loaded.tree ? dot_tree(*loaded.tree) : dot_proximity(*loaded.space, r));
  }
  if (config.out.empty()) {
    out << text;
  } else {
    write_file_atomic(config.out, text);
  }
  return kPass;
}

// --- cover -----------------------------------------------------------------

int cover_verify(const RunConfig& config, std::ostream& out) {
  require_inputs(config, 2, "cover verify");
  const Loaded loaded = load_any(config.inputs[0], config);
  const WitnessFile file = parse_witness(read_file(config.inputs[1]), *loaded.space);
  std::optional<PointSet> domain;
  if (config.margin) {
    if (!loaded.words) throw InputError("--margin applies to word window files only");
    domain = loaded.words->domain(parse_rational(*config.margin, "--margin"));
  }
  const VerificationReport report = verify_apc_witness(*loaded.space, file.scales, file.witness, domain);
  if (!config.dot.empty()) {
    write_file_atomic(config.dot, dot_proximity(*loaded.space, file.scales.fresh().at(1), &file.witness));
  }
  out << dump_report(*loaded.space, report, config.text);
  return report.ok ? kPass : kFail;
}

int cover_solve(const RunConfig& config, std::ostream& out) {
  require_inputs(config, 1, "cover solve");
  const Loaded loaded = load_any(config.inputs[0], config);
  const FiniteMetricSpace& space = *loaded.space;
  const ScaleSequence scales = parse_scales(config);
  const Length bound = Length::parse(config.bound);
  SolveResult result;
  if (config.method == "exact") {
    const ScaleSequence stream = scales.fresh();
    result = min_families_with_scales(space, [&stream](std::size_t t) { return stream.at(t); }, bound,
                                      SolverOptions{config.cap});
  } else if (config.method == "greedy") {
    // Greedy works at one scale; at R_n an n-family answer is good for the
    // first n slots of a non-decreasing stream.
    for (std::size_t n = 1;; ++n) {
      result = greedy_families_at_scale(space, scales.at(n), bound, config.seed);
      if (result.families <= n || n >= space.size()) break;
    }
  } else {
    throw InputError("--method: expected exact or greedy");
  }
  CoverWitness witness;
  for (std::size_t t = 0; t < result.cover.size(); ++t) witness.entries.push_back({scales.at(t + 1), result.cover[t], bound});
  Finished f = finish_witness(loaded, witness, scales, config);
  f.json["method"] = config.method;
  f.json["bound"] = length_json(bound);
  f.json["nodes"] = result.nodes;
  if (result.negative) {
    const ReplayResult replay = replay_negative_certificate(space, *result.negative);
    f.json["negative_certificate"] = {{"families", result.negative->scales.size()},
                                      {"nodes", result.negative->nodes},
                                      {"replayed", replay.replayed},
                                      {"confirmed", replay.confirmed}};
  }
  const bool ok = f.report.ok && f.roundtrip;
  emit(out, f.json,
       config.method + " solver: " + std::to_string(result.families) + " families\n" + f.report.summary(space) + "\n",
       config.text);
  return ok ? kPass : kFail;
}

// --- combinators -----------------------------------------------------------

int product(const RunConfig& config, std::ostream& out) {
  require_inputs(config, 2, "product");
  const Loaded x = load_any(config.inputs[0], config);
  const Loaded y = load_any(config.inputs[1], config);
  ProductMetric kind;
  if (config.metric == "l1") {
    kind = ProductMetric::l1;
  } else if (config.metric == "l2") {
    kind = ProductMetric::l2;
  } else {
    throw InputError("--metric: expected l1 or l2");
  }
  const ScaleSequence scales = parse_scales(config);
  ProductResult result = product_cover(auto_oracle(x, config), auto_oracle(y, config), scales, kind);
  Loaded loaded;
  loaded.space = result.space;
  loaded.save = [s = result.space] { return dump_space(*s); };
  Finished f = finish_witness(loaded, result.witness, scales, config);
  f.json["columns"] = result.log.columns;
  f.json["column_counts"] = result.log.column_counts;
  f.json["scales_consumed"] = result.log.scales_consumed;
  emit(out, f.json, f.report.summary(*result.space) + "\n", config.text);
  return f.report.ok && f.roundtrip ? kPass : kFail;
}

Modulus parse_modulus(const nlohmann::json& j) {
  if (j.is_string() && j.get<std::string>() == "identity") return identity_modulus();
  if (j.is_object() && j.size() == 2 && j.contains("step") && j.contains("gain")) {
    auto value = [&](const char* key) {
      const auto& v = j.at(key);
      return v.is_string() ? Rational::parse(v.get<std::string>()) : Rational(v.get<std::int64_t>());
    };
    return step_modulus(value("step"), value("gain"));
  }
  throw InputError("$.modulus: expected \"identity\" or {\"step\": s, \"gain\": g}");
}

int fibering(const RunConfig& config, std::ostream& out) {
  require_inputs(config, 3, "fibering");
  const Loaded x = load_any(config.inputs[0], config);
  const Loaded y = load_any(config.inputs[1], config);
  nlohmann::json spec;
  try {
    spec = nlohmann::json::parse(read_file(config.inputs[2]));
  } catch (const nlohmann::json::exception& e) {
    throw InputError(config.inputs[2] + ": not valid JSON: " + e.what());
  }
  if (!spec.is_object()) throw InputError("$: expected an object");
  for (const auto& [key, value] : spec.items()) {
    if (key != "image" && key != "modulus") throw InputError("$." + key + ": unknown field");
  }
  if (!spec.contains("image") || !spec.at("image").is_object()) throw InputError("$.image: expected an object");
  UniformlyExpansiveMap map{x.space, y.space, std::vector<PointIndex>(x.space->size(), 0),
                            spec.contains("modulus") ? parse_modulus(spec.at("modulus")) : identity_modulus()};
  std::vector<char> seen(x.space->size(), 0);
  for (const auto& [from, to] : spec.at("image").items()) {
    const auto p = x.space->find(from);
    if (!p) throw InputError("$.image." + from + ": unknown source point");
    if (!to.is_string() && !to.is_number_integer()) throw InputError("$.image." + from + ": expected a point id");
    const std::string id = to.is_string() ? to.get<std::string>() : std::to_string(to.get<std::int64_t>());
    const auto q = y.space->find(id);
    if (!q) throw InputError("$.image." + from + ": unknown target point '" + id + "'");
    map.image[*p] = *q;
    seen[*p] = 1;
  }
  for (PointIndex p = 0; p < x.space->size(); ++p) {
    if (!seen[p]) throw InputError("$.image: no image for '" + x.space->label(p) + "'");
  }
  // Every fiber is covered by itself; the diameter of the source bounds all
  // fibers at every scale.
  const Length diameter = set_diameter(*x.space, all_points(*x.space));
  FiberSchemeFactory scheme = [diameter](const ScaleSequence&) {
    FiberCoverScheme s;
    s.family_count = 1;
    s.bound_for_scale = [diameter](const Rational&) { return diameter; };
    s.cover = [](const PointSet& a, const Rational&) { return std::vector<Family>{Family({a})}; };
    return s;
  };
  const ScaleSequence scales = parse_scales(config);
  FiberingResult result = fibering_cover(map, auto_oracle(y, config), scheme, scales);
  Finished f = finish_witness(x, result.witness, scales, config);
  Json audit = Json::array();
  for (const auto& a : result.audit) {
    audit.push_back({{"column", a.column},
                     {"fiber_scale", rational_json(a.fiber_scale)},
                     {"bound", length_json(a.bound)},
                     {"fibers", a.fibers},
                     {"max_mesh", length_json(a.max_mesh)}});
  }
  f.json["audit"] = std::move(audit);
  emit(out, f.json, f.report.summary(*x.space) + "\n", config.text);
  return f.report.ok && f.roundtrip ? kPass : kFail;
}

int decompose_command(const RunConfig& config, std::ostream& out) {
  require_inputs(config, 1, "decompose");
  const Loaded loaded = load_any(config.inputs[0], config);
  const std::size_t k = config.k;
  if (k == 0) throw InputError("--k must be positive");
  const ApcOracle oracle = auto_oracle(loaded, config);
  auto last = std::make_shared<CoverWitness>();
  DecomposableOracle hypothesis;
  hypothesis.families = [oracle, last](const ScaleSequence& stream) {
    *last = oracle(stream);
    std::vector<Family> families;
    for (const auto& e : last->entries) families.push_back(e.family);
    return families;
  };
  const auto coords = line_coordinates(loaded);
  hypothesis.subcover = [coords, last, k](std::size_t i, const PointSet& u, const Rational& r) {
    SubCover sub;
    sub.families.resize(k);
    if (coords && k >= 2) {
      // Blocks [jl, (j+1)l) along the line, even j first; same-parity
      // blocks are more than l >= r apart.
      const std::int64_t l = std::max<std::int64_t>(1, r.ceil());
      std::map<std::int64_t, PointSet> blocks;
      for (PointIndex p : u) blocks[((*coords)[p] / Rational(l)).floor()].push_back(p);
      for (auto& [j, members] : blocks) sub.families[static_cast<std::size_t>(((j % 2) + 2) % 2)].add(std::move(members));
      sub.bound = Length(Rational(l));
    } else {
      sub.families[0].add(u);
      sub.bound = last->entries.at(i - 1).mesh_bound;
    }
    return sub;
  };
  const ScaleSequence scales = parse_scales(config);
  DecomposeResult result = decompose(loaded.space, k, hypothesis, scales);
  Finished f = finish_witness(loaded, result.witness, scales, config);
  Json audit = Json::array();
  for (const auto& a : result.audit) {
    audit.push_back({{"family", a.family_index},
                     {"scale", rational_json(a.scale)},
                     {"bound", length_json(a.bound)},
                     {"members", a.members},
                     {"max_mesh", length_json(a.max_mesh)}});
  }
  f.json["oracle"] = oracle.name;
  f.json["audit"] = std::move(audit);
  f.json["scales_consumed"] = result.scales_consumed;
  emit(out, f.json, f.report.summary(*loaded.space) + "\n", config.text);
  return f.report.ok && f.roundtrip ? kPass : kFail;
}

int tree_cover_command(const RunConfig& config, std::ostream& out) {
  Loaded loaded;
  if (config.random_tree > 0) {
    if (!config.inputs.empty()) throw InputError("tree-cover: give either a tree file or --random, not both");
    loaded.tree = std::make_shared<RootedTree>(random_tree(config.random_tree, config.seed));
    loaded.space = loaded.tree->as_space();
    loaded.save = [tree = loaded.tree] { return dump_tree(*tree); };
  } else {
    require_inputs(config, 1, "tree-cover");
    loaded = load_any(config.inputs[0], config);
    if (!loaded.tree) throw InputError("tree-cover: input is not a tree file");
  }
  const Rational r = parse_rational(config.radius.empty() ? "1" : config.radius, "--r");
  const TreeCover cover = tree_cover(*loaded.tree, r);
  const ScaleSequence scales({r});
  RunConfig plain = config;
  plain.dot.clear();
  Finished f = finish_witness(loaded, tree_cover_witness(cover), scales, plain);
  if (!config.dot.empty()) write_file_atomic(config.dot, dot_tree(*loaded.tree, &cover));
  f.json["r"] = rational_json(r);
  f.json["mesh_bound"] = length_json(cover.mesh_bound);
  f.json["vertices"] = loaded.tree->size();
  f.json["height"] = loaded.tree->height();
  emit(out, f.json, f.report.summary(*loaded.space) + "\n", config.text);
  return f.report.ok && f.roundtrip ? kPass : kFail;
}

// --- free products ---------------------------------------------------------

FreeProductWindow window_from(const RunConfig& config, const Loaded& base) {
  if (config.window.empty()) throw InputError("--window \"order,norm\" is required");
  const auto [order, norm] = parse_word_window_flag(config.window);
  return FreeProductWindow(base.space, order, norm);
}

int freeprod_window(const RunConfig& config, std::ostream& out) {
  require_inputs(config, 1, "freeprod window");
  const Loaded base = load_any(config.inputs[0], config);
  const FreeProductWindow window = window_from(config, base);
  const std::string text = dump_word_window(window);
  if (!config.dot.empty()) write_file_atomic(config.dot, dot_proximity(*window.space(), window.gap()));
  if (config.out.empty()) {
    out << text;
    return kPass;
  }
  write_file_atomic(config.out, text);
  Json j;
  j["words"] = window.size();
  j["gap"] = rational_json(window.gap());
  emit(out, j, std::to_string(window.size()) + " words\n", config.text);
  return kPass;
}

int freeprod_cover(const RunConfig& config, std::ostream& out) {
  require_inputs(config, 1, "freeprod cover");
  const Loaded base = load_any(config.inputs[0], config);
  auto window = std::make_shared<FreeProductWindow>(window_from(config, base));
  const ScaleSequence scales = parse_scales(config);
  std::optional<Rational> margin;
  if (config.margin) margin = parse_rational(*config.margin, "--margin");
  ApcOracle oracle = auto_oracle(base, config);
  oracle.space = window->base();
  FreeProductResult result = free_product_cover(*window, oracle, scales, margin);
  Loaded loaded;
  loaded.space = window->space();
  loaded.words = window;
  loaded.save = [window] { return dump_word_window(*window); };
  Finished f = finish_witness(loaded, result.witness, scales, config, result.domain);
  f.json["words"] = window->size();
  f.json["domain"] = result.domain.size();
  f.json["margin"] = rational_json(result.margin);
  f.json["base_families"] = result.base_families;
  f.json["cone_scale"] = rational_json(result.cone_scale);
  f.json["artifacts"] = result.artifacts;
  f.json["v_families"] = {{"ok", result.v.ok()}, {"problems", result.v.problems}};
  const bool ok = f.report.ok && f.roundtrip && result.v.ok();
  emit(out, f.json,
       f.report.summary(*window->space()) + "\n" + verdict_line("V-family certificate", result.v.ok()), config.text);
  return ok ? kPass : kFail;
}

int freeprod_qi(const RunConfig& config, std::ostream& out) {
  require_inputs(config, 1, "freeprod qi-check");
  const Loaded base = load_any(config.inputs[0], config);
  const FreeProductWindow window = window_from(config, base);
  const Rational m = parse_rational(config.radius.empty() ? "1" : config.radius, "--m");
  std::uint64_t pairs = 0;
  std::size_t bases = 0;
  Json failures = Json::array();
  // One maximal flat base per prefix: all one-letter extensions in the window.
  for (PointIndex x = 0; x < window.size(); ++x) {
    const auto& kids = window.children(x);
    if (kids.empty()) continue;
    const PointSet flat = make_point_set(kids);
    const QiReport report = qi_check(window, cone_tree(window, flat, m));
    ++bases;
    pairs += report.pairs;
    if (!report.ok) failures.push_back({{"prefix", window.label(window.word(x))}, {"detail", report.detail}});
  }
  Json j;
  j["bases"] = bases;
  j["pairs"] = pairs;
  j["ok"] = failures.empty();
  j["failures"] = failures;
  emit(out, j,
       verdict_line("quasi-isometry on " + std::to_string(bases) + " bases, " + std::to_string(pairs) + " pairs",
                    failures.empty()),
       config.text);
  return failures.empty() ? kPass : kFail;
}

// --- groups ----------------------------------------------------------------

int group_ball(const RunConfig& config, std::ostream& out) {
  require_inputs(config, 1, "group ball");
  const Loaded loaded = load_any(config.inputs[0], config);
  if (!loaded.group) throw InputError("group ball: input is not a group file");
  const CayleyWindow& window = *loaded.group;
  std::map<Rational, std::size_t> spheres;
  for (PointIndex p = 0; p < window.size(); ++p) ++spheres[window.point_norm(p)];
  Json sizes = Json::array();
  std::size_t running = 0;
  for (const auto& [norm, count] : spheres) {
    running += count;
    sizes.push_back({{"norm", rational_json(norm)}, {"sphere", count}, {"ball", running}});
  }
  const std::size_t samples = window.size() <= 200 ? 0 : 20000;
  const PredicateResult invariance = check_left_invariance(window, samples, config.seed);
  const PredicateResult symmetry = check_norm_symmetry(window);
  Json j;
  j["group"] = window.group()->name();
  j["radius"] = rational_json(window.radius());
  j["elements"] = window.size();
  j["balls"] = std::move(sizes);
  j["left_invariance"] = {{"ok", invariance.ok}, {"exhaustive", samples == 0}, {"detail", invariance.detail}};
  j["norm_symmetry"] = {{"ok", symmetry.ok}, {"detail", symmetry.detail}};
  if (!config.out.empty()) write_file_atomic(config.out, dump_space(*materialize(window.space())));
  const bool ok = invariance.ok && symmetry.ok;
  emit(out, j,
       std::to_string(window.size()) + " elements\n" + verdict_line("left invariance", invariance.ok) +
           verdict_line("norm symmetry", symmetry.ok),
       config.text);
  return ok ? kPass : kFail;
}

WindowPtr standard_window(const GroupPtr& group, const Rational& radius) {
  return std::make_shared<const CayleyWindow>(WeightedGeneratingSet::standard(group), radius);
}

int group_pipeline(const RunConfig& config, std::ostream& out) {
  require_inputs(config, 1, "group pipeline");
  const Loaded loaded = load_any(config.inputs[0], config);
  if (!loaded.group) throw InputError("group pipeline: input is not a group file");
  const WindowPtr g = loaded.group;
  const GroupPtr& group = g->group();
  const ScaleSequence scales = parse_scales(config);
  const auto model = nlohmann::json::parse(group->describe());
  Json j;
  j["group"] = group->name();
  bool ok = true;
  std::string text;

  if (model.at("model") == "Z^d" && model.at("dim").get<std::size_t>() == 1) {
    Finished f = finish_witness(loaded, integer_window_oracle(g)(scales.fresh()), scales, config);
    j["route"] = "line";
    j.update(f.json);
    ok = f.report.ok && f.roundtrip;
    text = f.report.summary(*g->space()) + "\n";
  } else if (model.at("model") == "Z^d" && model.at("dim").get<std::size_t>() >= 2) {
    // Z^d -> Z^(d-1) forgetting the first coordinate; the kernel is the
    // first axis.
    const std::size_t d = model.at("dim").get<std::size_t>();
    std::vector<std::size_t> keep;
    for (std::size_t c = 1; c < d; ++c) keep.push_back(c);
    const Homomorphism f = coordinate_projection(group, keep);
    const WindowPtr h = standard_window(f.target, g->radius());
    const ApcOracle oracle_h = d == 2 ? integer_window_oracle(h) : trivial_oracle(h->space());
    ExtensionResult result = extension_cover(g, f, h, coordinate_kernel_provider(g, f, h, 0), oracle_h, scales);
    Finished fin = finish_witness(loaded, result.fibering.witness, scales, config);
    Json audit = Json::array();
    for (const auto& [key, bound] : result.audit->bounds) {
      audit.push_back({{"M", rational_json(key.first)}, {"r", rational_json(key.second)}, {"B", length_json(bound)}});
    }
    j["route"] = "extension";
    j.update(fin.json);
    j["scheme_bounds"] = std::move(audit);
    j["scheme_consistent"] = result.audit->consistent;
    ok = fin.report.ok && fin.roundtrip && result.audit->consistent;
    text = fin.report.summary(*g->space()) + "\n" + verdict_line("fiber bound audit", result.audit->consistent);
  } else if (model.at("model") == "free" && model.at("rank").get<std::size_t>() == 2) {
    const auto& gens = g->generators().generators();
    const bool standard = gens.size() == 4 && std::all_of(gens.begin(), gens.end(), [](const WeightedGenerator& s) {
      return s.weight == Rational(1) && s.element.size() == 1;
    });
    if (!standard) {
      throw InputError("group pipeline: F2 is supported with its standard unit-weight generators only");
    }
    std::optional<Rational> margin;
    if (config.margin) margin = parse_rational(*config.margin, "--margin");
    const Rational radius = g->radius();
    FreeGroupCoverResult result =
        free_product_cover_groups(static_cast<std::size_t>(radius.floor()), radius, scales, margin);
    Loaded reduced;
    reduced.group = result.group_window;
    reduced.space = result.group_window->space();
    const GroupSpec spec{group, g->generators(), result.group_window->radius()};
    reduced.save = [spec] { return dump_group(spec); };
    Finished fin = finish_witness(reduced, result.witness, scales, config);
    j["route"] = "free product";
    j["radius"] = rational_json(result.group_window->radius());
    j.update(fin.json);
    j["embedding"] = {{"ok", result.embedding.ok}, {"pairs", result.embedding.pairs}};
    j["v_families"] = result.words.v.ok();
    ok = fin.report.ok && fin.roundtrip && result.embedding.ok && result.words.v.ok();
    text = fin.report.summary(*reduced.space) + "\n" + verdict_line("wedge embedding", result.embedding.ok);
  } else if (model.at("model").is_object() && model.at("model").contains("product") &&
             model.at("model").at("product").size() == 2) {
    std::vector<ApcOracle> oracles;
    for (const auto& factor : model.at("model").at("product")) {
      if (factor.at("model") != "Z^d" || factor.at("dim") != 1) {
        throw InputError("group pipeline: products are supported for Z x Z only");
      }
      oracles.push_back(integer_window_oracle(standard_window(integer_lattice(1), g->radius())));
    }
    GroupProductResult result = product_cover_groups(oracles[0], oracles[1], scales);
    Loaded box;
    box.space = result.direct.space;
    box.save = [s = box.space] { return dump_space(*s); };
    Finished fin = finish_witness(box, result.direct.witness, scales, config);
    j["route"] = "product";
    j.update(fin.json);
    j["fibered_ok"] = result.fibered_report.ok;
    j["slots_match"] = result.slots_match;
    ok = fin.report.ok && fin.roundtrip && result.fibered_report.ok && result.slots_match;
    text = fin.report.summary(*box.space) + "\n" + verdict_line("fibered cover", result.fibered_report.ok) +
           verdict_line("slot comparison", result.slots_match);
  } else {
    // Finite groups: the whole window is one bounded set.
    Finished f = finish_witness(loaded, trivial_oracle(g->space())(scales.fresh()), scales, config);
    j["route"] = "bounded";
    j.update(f.json);
    ok = f.report.ok && f.roundtrip;
    text = f.report.summary(*g->space()) + "\n";
  }
  emit(out, j, text, config.text);
  return ok ? kPass : kFail;
}

int demo_hypercubes(const RunConfig& config, std::ostream& out) {
  const Rational r = config.radius.empty() ? Rational(2) : parse_rational(config.radius, "--r");
  const HypercubeDemo demo = hypercube_demo(config.max_n, config.k, r, config.seed);
  const std::string text = render_demo(demo, config.text);
  if (!config.out.empty()) write_file_atomic(config.out, text);
  out << text;
  return demo.ok ? kPass : kFail;
}

}  // namespace

HypercubeDemo hypercube_demo(int max_n, std::size_t k, const Rational& r, std::uint64_t seed) {
  if (max_n < 1 || max_n > 5) throw InputError("demo hypercubes: --max-n must be in 1..5");
  HypercubeDemo demo;
  demo.k = k;
  demo.r = r;
  demo.seed = seed;
  const SpacePtr all = hypercube_union(max_n);
  for (int n = 1; n <= max_n; ++n) {
    std::vector<PointIndex> members;
    for (PointIndex p = 0; p < all->size(); ++p) {
      if (hypercube_of(*all, p) == n) members.push_back(p);
    }
    const SpacePtr cube = subspace(all, make_point_set(std::move(members)));
    HypercubeRow row;
    row.n = n;
    row.points = cube->size();
    const MinimalBound exact = exact_minimal_bound(*cube, r, k, SolverOptions{32});
    const MinimalBound greedy = greedy_minimal_bound(*cube, r, k, seed);
    row.exact_bound = exact.bound;
    row.greedy_bound = greedy.bound;
    row.exact_nodes = exact.nodes;
    auto verifies = [&](const MinimalBound& b) {
      CoverWitness w;
      for (const auto& family : b.cover) w.entries.push_back({r, family, b.bound});
      return verify_apc_witness(*cube, ScaleSequence({r}), w).ok;
    };
    row.exact_verified = verifies(exact);
    row.greedy_verified = verifies(greedy);
    if (!row.exact_verified) demo.problems.push_back("n=" + std::to_string(n) + ": exact witness fails");
    if (!row.greedy_verified) demo.problems.push_back("n=" + std::to_string(n) + ": greedy witness fails");
    if (greedy.bound < exact.bound) demo.problems.push_back("n=" + std::to_string(n) + ": greedy beats exact");
    demo.rows.push_back(row);
  }
  demo.ok = demo.problems.empty();
  return demo;
}

std::string render_demo(const HypercubeDemo& demo, bool text) {
  if (text) {
    std::ostringstream out;
    out << "k=" << demo.k << " R=" << demo.r.to_string() << " seed=" << demo.seed << "\n";
    out << "n  points  exact_B  greedy_B  verified\n";
    for (const auto& row : demo.rows) {
      out << row.n << "  " << row.points << "  " << row.exact_bound.to_string() << "  " << row.greedy_bound.to_string()
          << "  " << (row.exact_verified && row.greedy_verified ? "yes" : "no") << "\n";
    }
    for (const auto& p : demo.problems) out << "problem: " << p << "\n";
    return out.str();
  }
  Json j;
  j["k"] = demo.k;
  j["R"] = rational_json(demo.r);
  j["seed"] = demo.seed;
  Json rows = Json::array();
  for (const auto& row : demo.rows) {
    rows.push_back({{"n", row.n},
                    {"points", row.points},
                    {"exact_B", length_json(row.exact_bound)},
                    {"greedy_B", length_json(row.greedy_bound)},
                    {"exact_nodes", row.exact_nodes},
                    {"exact_verified", row.exact_verified},
                    {"greedy_verified", row.greedy_verified}});
  }
  j["rows"] = std::move(rows);
  j["ok"] = demo.ok;
  j["problems"] = demo.problems;
  return j.dump(2) + "\n";
}

int run_command(const std::string& command, const RunConfig& config, std::ostream& out, std::ostream& err) {
  static const std::map<std::string, std::function<int(const RunConfig&, std::ostream&)>> table = {
      {"space validate", space_validate},   {"space export", space_export},
      {"cover verify", cover_verify},       {"cover solve", cover_solve},
      {"product", product},                 {"fibering", fibering},
      {"decompose", decompose_command},     {"tree-cover", tree_cover_command},
      {"freeprod window", freeprod_window}, {"freeprod cover", freeprod_cover},
      {"freeprod qi-check", freeprod_qi},   {"group ball", group_ball},
      {"group pipeline", group_pipeline},   {"demo hypercubes", demo_hypercubes},
  };
  const auto it = table.find(command);
  if (it == table.end()) {
    err << "unknown command '" << command << "'\n";
    return kInputError;
  }
  try {
    return it->second(config, out);
  } catch (const InputError& e) {
    err << "input error: " << e.what() << "\n";
    return kInputError;
  } catch (const WindowExhausted& e) {
    err << "window too small: " << e.what() << "\n";
    return kInputError;
  } catch (const OracleViolation& e) {
    err << "construction failed: " << e.what() << "\n";
    return kFail;
  }
}

}  // namespace coarse::cli
