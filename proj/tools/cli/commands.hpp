#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "coarse/rational.hpp"
#include "coarse/length.hpp"

namespace coarse::cli {

/// Everything a command reads from the command line. Commands ignore the
/// fields they do not use.
struct RunConfig {
  std::vector<std::string> inputs;
  std::string scales = "1";
  std::string extend = "repeat";
  std::string window;            // freeprod "m,L"; group radius override
  std::optional<std::string> margin;
  std::size_t cap = 16;          // exact solver point cap
  std::uint64_t seed = 1;
  std::string out;               // witness (or main artifact) path
  std::string space_out;         // space the witness lives on
  std::string dot;
  bool text = false;             // --format text
  std::string method = "exact";
  std::string bound = "0";
  std::string metric = "l1";
  std::string radius;            // tree-cover r; qi-check cone scale
  std::size_t k = 2;
  std::string generator;         // space export --gen
  std::size_t random_tree = 0;
  int max_n = 4;
};

enum ExitCode : int { kPass = 0, kFail = 1, kInputError = 2 };

/// Runs "space validate", "cover verify", ... and returns the exit code.
/// Errors are reported on `err`; the report goes to `out`.
int run_command(const std::string& command, const RunConfig& config, std::ostream& out, std::ostream& err);

struct HypercubeRow {
  int n = 0;
  std::size_t points = 0;
  Length exact_bound;
  Length greedy_bound;
  std::uint64_t exact_nodes = 0;
  bool exact_verified = false;
  bool greedy_verified = false;
};

struct HypercubeDemo {
  std::size_t k = 2;
  Rational r;
  std::uint64_t seed = 1;
  std::vector<HypercubeRow> rows;
  bool ok = true;
  std::vector<std::string> problems;
};

/// Minimal mesh bound with k r-disjoint families on each cube {0,1}^n of
/// hypercube_union(max_n), from the exact and the seeded greedy solver.
/// ok requires both witnesses to verify and greedy >= exact on every row.
HypercubeDemo hypercube_demo(int max_n, std::size_t k, const Rational& r, std::uint64_t seed);
std::string render_demo(const HypercubeDemo& demo, bool text);

}  // namespace coarse::cli
