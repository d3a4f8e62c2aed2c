#include <iostream>
#include <string>

#include "CLI11.hpp"

#include "commands.hpp"

namespace {

using coarse::cli::RunConfig;

void scale_flags(CLI::App* app, RunConfig& c) {
  app->add_option("--scales", c.scales, "Comma-separated non-decreasing scales R_1,R_2,...")->capture_default_str();
  app->add_option("--extend", c.extend, "Tail rule: repeat, arith:<step> or geom:<factor>")->capture_default_str();
}

void output_flags(CLI::App* app, RunConfig& c, bool witness) {
  app->add_option("--out", c.out, witness ? "Write the witness here" : "Write the result here");
  if (witness) app->add_option("--space-out", c.space_out, "Write the space the witness lives on");
  app->add_option("--dot", c.dot, "Write a DOT view");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"coarse: covers of finite metric spaces, trees, free products and groups"};
  app.require_subcommand(1);
  app.fallthrough();
  RunConfig config;
  std::string format = "structured";
  app.add_option("--format", format, "Report format")->check(CLI::IsMember({"structured", "text"}))->capture_default_str();
  app.add_option("--seed", config.seed, "Seed for sampled checks and randomized solvers")->capture_default_str();
  app.add_option("--cap", config.cap, "Largest space handed to the exact solver")
      ->check(CLI::Range(1, 64))
      ->capture_default_str();

  std::string command;
  auto leaf = [&](CLI::App* parent, const std::string& name, const std::string& help, std::size_t inputs) {
    CLI::App* sub = parent->add_subcommand(name, help);
    const std::string full = parent == &app ? name : parent->get_name() + " " + name;
    sub->callback([&command, full] { command = full; });
    if (inputs > 0) sub->add_option("inputs", config.inputs, "Input files")->expected(0, static_cast<int>(inputs));
    return sub;
  };

  auto* space = app.add_subcommand("space", "Metric space files")->require_subcommand(1);
  leaf(space, "validate", "Check the metric axioms", 1);
  auto* exp = leaf(space, "export", "Write the canonical form of a space (or of a generator)", 1);
  exp->add_option("--gen", config.generator, "Generator spec, e.g. {\"type\":\"grid\",\"extents\":[4,4]}");
  exp->add_option("--scales", config.scales, "DOT proximity scale")->capture_default_str();
  output_flags(exp, config, false);

  auto* cover = app.add_subcommand("cover", "Witness files")->require_subcommand(1);
  auto* verify = leaf(cover, "verify", "Verify a witness against a space: SPACE WITNESS", 2);
  verify->add_option("--margin", config.margin, "Word windows: verify on words of norm <= L - margin");
  verify->add_option("--window", config.window, "Group files: radius override");
  verify->add_option("--dot", config.dot, "Write a DOT view");
  auto* solve = leaf(cover, "solve", "Cover a space with the exact or greedy solver", 1);
  solve->add_option("--method", config.method)->check(CLI::IsMember({"exact", "greedy"}))->capture_default_str();
  solve->add_option("--bound", config.bound, "Mesh bound B")->capture_default_str();
  scale_flags(solve, config);
  output_flags(solve, config, true);

  auto* prod = leaf(&app, "product", "Cover X x Y from covers of X and Y: X Y", 2);
  prod->add_option("--metric", config.metric)->check(CLI::IsMember({"l1", "l2"}))->capture_default_str();
  scale_flags(prod, config);
  output_flags(prod, config, true);

  auto* fib = leaf(&app, "fibering", "Cover X through a map X -> Y: X Y MAP", 3);
  scale_flags(fib, config);
  output_flags(fib, config, true);

  auto* dec = leaf(&app, "decompose", "Re-cover each hypothesis member by k families", 1);
  dec->add_option("--k", config.k)->capture_default_str();
  scale_flags(dec, config);
  output_flags(dec, config, true);

  auto* tree = leaf(&app, "tree-cover", "Two r-disjoint families on a tree", 1);
  tree->add_option("--r", config.radius, "Disjointness scale r")->default_str("1");
  tree->add_option("--random", config.random_tree, "Use a random tree with this many vertices");
  output_flags(tree, config, true);

  auto* fp = app.add_subcommand("freeprod", "Free-product windows over a pointed base")->require_subcommand(1);
  auto* fpw = leaf(fp, "window", "Enumerate the words of a window", 1);
  fpw->add_option("--window", config.window, "order,norm")->required();
  output_flags(fpw, config, false);
  auto* fpc = leaf(fp, "cover", "Free-product cover from a cover of the base", 1);
  fpc->add_option("--window", config.window, "order,norm")->required();
  fpc->add_option("--margin", config.margin, "Verify on words of norm <= L - margin");
  scale_flags(fpc, config);
  output_flags(fpc, config, true);
  auto* fpq = leaf(fp, "qi-check", "Cone-tree quasi-isometry inequalities on flat bases", 1);
  fpq->add_option("--window", config.window, "order,norm")->required();
  fpq->add_option("--m", config.radius, "Cone scale M")->default_str("1");

  auto* group = app.add_subcommand("group", "Finitely generated groups")->require_subcommand(1);
  auto* ball = leaf(group, "ball", "Enumerate a ball and check the word metric", 1);
  ball->add_option("--window", config.window, "Radius override");
  ball->add_option("--out", config.out, "Write the ball as a space file");
  auto* pipe = leaf(group, "pipeline", "Cover a group window", 1);
  pipe->add_option("--window", config.window, "Radius override");
  pipe->add_option("--margin", config.margin, "Free groups: margin of the verified ball");
  scale_flags(pipe, config);
  output_flags(pipe, config, true);

  auto* demo = app.add_subcommand("demo", "Demonstrations")->require_subcommand(1);
  auto* cubes = leaf(demo, "hypercubes", "Minimal mesh bound per cube {0,1}^n", 0);
  cubes->add_option("--max-n", config.max_n)->capture_default_str();
  cubes->add_option("--k", config.k)->capture_default_str();
  cubes->add_option("--r", config.radius)->default_str("2");
  cubes->add_option("--out", config.out, "Write the table here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : coarse::cli::kInputError;
  }
  config.text = format == "text";
  return coarse::cli::run_command(command, config, std::cout, std::cerr);
}
