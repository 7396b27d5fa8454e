#include "cqa/graph.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <set>
#include <sstream>

namespace cqa {

void Graph::normalize() {
  if (n_nodes <= 0) throw GraphError("graph must have at least one node");
  for (auto& [i, j] : edges) {
    if (i == j) throw GraphError("self-loop at node " + std::to_string(i));
    if (i < 0 || j < 0 || i >= n_nodes || j >= n_nodes)
      throw GraphError("edge (" + std::to_string(i) + ", " + std::to_string(j) +
                       ") out of range for " + std::to_string(n_nodes) + " nodes");
    if (i > j) std::swap(i, j);
  }
  std::sort(edges.begin(), edges.end());
  if (std::adjacent_find(edges.begin(), edges.end()) != edges.end())
    throw GraphError("duplicate edge");
}

Graph random_regular(int n, int c, std::uint64_t seed) {
  if (c < 1 || c >= n)
    throw GraphError("invalid degree: need 1 <= c < n, got c=" + std::to_string(c) +
                     ", n=" + std::to_string(n));
  if ((static_cast<std::int64_t>(n) * c) % 2 != 0)
    throw GraphError("invalid degree: n*c must be even");

  constexpr int kMaxRestarts = 10000;
  std::mt19937_64 rng(seed);

  std::vector<int> stubs(static_cast<std::size_t>(n) * c);
  for (int v = 0; v < n; ++v)
    for (int k = 0; k < c; ++k) stubs[static_cast<std::size_t>(v) * c + k] = v;

  for (int attempt = 0; attempt < kMaxRestarts; ++attempt) {
    std::shuffle(stubs.begin(), stubs.end(), rng);
    std::set<std::pair<int, int>> seen;
    bool ok = true;
    for (std::size_t p = 0; p + 1 < stubs.size(); p += 2) {
      int i = stubs[p], j = stubs[p + 1];
      if (i == j) { ok = false; break; }
      if (i > j) std::swap(i, j);
      if (!seen.insert({i, j}).second) { ok = false; break; }
    }
    if (!ok) continue;
    Graph g;
    g.n_nodes = n;
    g.edges.assign(seen.begin(), seen.end());
    g.normalize();
    return g;
  }
  throw GraphError("random_regular: restart limit exceeded");
}

ColoringOracleResult coloring_oracle(const Graph& g, int q) {
  if (q < 2) throw GraphError("coloring_oracle: need q >= 2");
  constexpr double kBudget = double(1 << 24);
  double dim_d = std::pow(double(q), double(g.n_nodes));
  if (dim_d > kBudget)
    throw GraphError("coloring_oracle: q^N exceeds enumeration budget");
  std::int64_t dim = static_cast<std::int64_t>(std::llround(dim_d));

  const std::int64_t m = g.num_edges();
  ColoringOracleResult res;
  res.min_classical_energy = m * q + 1;  // above any attainable energy

  std::vector<int> colors(static_cast<std::size_t>(g.n_nodes), 0);
  for (std::int64_t b = 0; b < dim; ++b) {
    std::int64_t energy = 0;
    int conflicts = 0;
    for (const auto& [i, j] : g.edges) {
      if (colors[i] == colors[j]) {
        energy += q;
        ++conflicts;
      } else {
        energy += q - 4;
      }
    }
    if (conflicts == 0) ++res.proper_coloring_count;
    if (energy < res.min_classical_energy) {
      res.min_classical_energy = energy;
      res.ground_degeneracy = 1;
    } else if (energy == res.min_classical_energy) {
      ++res.ground_degeneracy;
    }
    // mixed-radix odometer, least-significant node first
    for (int v = 0; v < g.n_nodes; ++v) {
      if (++colors[v] < q) break;
      colors[v] = 0;
    }
  }
  return res;
}

Graph parse_edge_list(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  Graph g;
  bool have_n = false;
  while (std::getline(in, line)) {
    ++lineno;
    std::string_view sv(line);
    auto first = sv.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) continue;
    if (sv[first] == '#') continue;
    std::istringstream ls(line);
    if (!have_n) {
      if (!(ls >> g.n_nodes) || g.n_nodes <= 0)
        throw ParseError(lineno, "expected positive node count");
      have_n = true;
      continue;
    }
    int i, j;
    if (!(ls >> i >> j)) throw ParseError(lineno, "expected 'i j' edge line");
    std::string rest;
    if (ls >> rest && rest[0] != '#')
      throw ParseError(lineno, "trailing tokens after edge");
    g.edges.emplace_back(i, j);
  }
  if (!have_n) throw ParseError(lineno, "empty edge-list input");
  g.normalize();
  return g;
}

std::string write_edge_list(const Graph& g) {
  std::ostringstream out;
  out << g.n_nodes << "\n";
  for (const auto& [i, j] : g.edges) out << i << " " << j << "\n";
  return out.str();
}

Graph uniquely_colorable_graph() {
  Graph g;
  g.n_nodes = 6;
  g.edges = {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3},
             {0, 4}, {1, 4}, {2, 4}, {0, 5}, {1, 5}, {3, 5}};
  g.normalize();
  return g;
}

}  // namespace cqa
