#pragma once

// Shared graph builders for the test suites.

#include <vector>

#include "graphfool/eval.hpp"
#include "graphfool/graph.hpp"
#include "graphfool/rng.hpp"

namespace graphfool::testing {

inline Graph path_graph(std::size_t n) {
  std::vector<Edge> edges;
  for (std::size_t i = 0; i + 1 < n; ++i) edges.emplace_back(i, i + 1);
  return Graph(n, std::move(edges), {}, {}, {});
}

inline Graph star_graph(std::size_t n_leaves) {
  std::vector<Edge> edges;
  for (std::size_t i = 1; i <= n_leaves; ++i) edges.emplace_back(0, i);
  return Graph(n_leaves + 1, std::move(edges), {}, {}, {});
}

inline Graph triangle_graph() {
  return Graph(3, {{0, 1}, {1, 2}, {0, 2}}, {}, {}, {});
}

/// Two disjoint 5-cliques, identity features, labels 0/1 per clique,
/// labeled_per_class vertices of each clique in the train mask.
inline Graph two_cliques(std::size_t per_clique = 5, std::size_t labeled_per_class = 2) {
  const std::size_t n = 2 * per_clique;
  std::vector<Edge> edges;
  for (std::size_t b = 0; b < 2; ++b) {
    const std::size_t base = b * per_clique;
    for (std::size_t i = 0; i < per_clique; ++i)
      for (std::size_t j = i + 1; j < per_clique; ++j)
        edges.emplace_back(base + i, base + j);
  }
  std::vector<int> labels(n);
  std::vector<bool> mask(n, false);
  for (std::size_t v = 0; v < n; ++v) labels[v] = v < per_clique ? 0 : 1;
  for (std::size_t i = 0; i < labeled_per_class; ++i) {
    mask[i] = true;
    mask[per_clique + i] = true;
  }
  return Graph(n, std::move(edges), {}, std::move(labels), std::move(mask));
}

/// Erdos-Renyi-style graph: one SBM block (labels all 0, identity features).
inline Graph er_graph(std::size_t n, double p, std::uint64_t seed) {
  return generate_sbm(n, 1, p, 0.0, seed);
}

/// Random feature matrix with entries in [-1, 1].
inline Matrix random_features(std::size_t rows, std::size_t cols, std::uint64_t seed) {
  Rng rng(seed);
  Matrix m(rows, cols);
  for (double& x : m.data()) x = rng.next_symmetric(1.0);
  return m;
}

}  // namespace graphfool::testing
