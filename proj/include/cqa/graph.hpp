#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace cqa {

struct GraphError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ParseError : GraphError {
  ParseError(int line, const std::string& what)
      : GraphError("line " + std::to_string(line) + ": " + what), line(line) {}
  int line;
};

// Undirected simple graph. Edges are stored normalized: i < j, sorted,
// no duplicates, no self-loops.
struct Graph {
  int n_nodes = 0;
  std::vector<std::pair<int, int>> edges;

  int num_edges() const { return static_cast<int>(edges.size()); }

  // Normalizes edge orientation/order and throws GraphError on
  // self-loops, duplicates, or out-of-range indices.
  void normalize();
};

struct ColoringOracleResult {
  std::int64_t proper_coloring_count = 0;
  std::int64_t min_classical_energy = 0;
  std::int64_t ground_degeneracy = 0;
};

// Samples a simple c-regular graph on n nodes via the pairing
// (configuration) model, restarting from scratch whenever a self-loop or
// multi-edge appears. Deterministic for a fixed seed.
Graph random_regular(int n, int c, std::uint64_t seed);

// Exhaustive enumeration of all q^N color assignments. Exact integer
// energies: each edge contributes q if its endpoints share a color,
// q - 4 otherwise. Throws GraphError if q^N exceeds the enumeration
// budget (2^24 assignments).
ColoringOracleResult coloring_oracle(const Graph& g, int q);

// Edge-list text format: first line N, then one "i j" per line,
// '#' starts a comment line.
Graph parse_edge_list(const std::string& text);
std::string write_edge_list(const Graph& g);

// A 6-node graph that is uniquely 4-colorable (exactly 4! = 24 proper
// 4-colorings): K4 on {0,1,2,3}, node 4 adjacent to {0,1,2}, node 5
// adjacent to {0,1,3}.
Graph uniquely_colorable_graph();

}  // namespace cqa
