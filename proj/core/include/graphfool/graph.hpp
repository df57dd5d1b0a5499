#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "graphfool/matrix.hpp"

namespace graphfool {

using VertexId = std::size_t;
using Edge = std::pair<VertexId, VertexId>;

/// Label value for vertices whose class is not observed.
inline constexpr int kUnknownLabel = -1;

/// Undirected attributed graph with partially observed labels.
///
/// Immutable after construction; safe to share read-only across attack
/// workers. The constructor canonicalizes edges (u < v, sorted, duplicates
/// removed) and enforces:
///   - no self-loops,
///   - all endpoints < n_vertices,
///   - feature row count == n_vertices,
///   - every train_mask vertex has a known label.
/// An empty feature matrix selects identity features X = I_N, the usual
/// featureless fallback that keeps the GCN forward pass well defined.
class Graph {
 public:
  Graph(std::size_t n_vertices, std::vector<Edge> edges, Matrix features,
        std::vector<int> labels, std::vector<bool> train_mask);

  std::size_t n_vertices() const { return n_; }
  const std::vector<Edge>& edges() const { return edges_; }
  const Matrix& features() const { return features_; }
  const std::vector<int>& labels() const { return labels_; }
  const std::vector<bool>& train_mask() const { return train_mask_; }

  const std::vector<VertexId>& neighbors(VertexId v) const { return adjacency_[v]; }
  std::size_t degree(VertexId v) const { return adjacency_[v].size(); }
  bool has_edge(VertexId u, VertexId v) const;

  /// Number of classes = max observed label + 1.
  int n_classes() const { return n_classes_; }

  /// Same vertices, features, labels and mask, with the edge set replaced by
  /// the nonzeros of a binary symmetric adjacency matrix.
  Graph with_adjacency(const Matrix& adjacency) const;

 private:
  std::size_t n_ = 0;
  std::vector<Edge> edges_;
  Matrix features_;
  std::vector<int> labels_;
  std::vector<bool> train_mask_;
  std::vector<std::vector<VertexId>> adjacency_;
  int n_classes_ = 0;
};

/// Dense binary symmetric zero-diagonal adjacency matrix.
class AdjacencyMatrix {
 public:
  /// Validates symmetry, zero diagonal and {0,1} entries.
  explicit AdjacencyMatrix(Matrix entries);

  static AdjacencyMatrix from_graph(const Graph& g);

  const Matrix& entries() const { return entries_; }
  std::size_t size() const { return entries_.rows(); }
  bool has_edge(VertexId u, VertexId v) const { return entries_(u, v) != 0.0; }

  /// Applies A_ij += delta on both triangles. delta must be +1 onto an
  /// absent edge or -1 onto a present one; anything else throws.
  void toggle(VertexId i, VertexId j, int delta);

 private:
  Matrix entries_;
};

/// Normalized propagation operator entries of the GCN.
struct NormalizedAdjacency {
  Matrix entries;
};

/// Renormalization trick on an arbitrary dense matrix: with T = A + I and
/// s_i = sum_j T_ij, returns T_ij / sqrt(s_i s_j). Works on non-binary input
/// so finite-difference probes can pass through it.
Matrix normalize_dense(const Matrix& a);

/// D^{-1/2} (A + I) D^{-1/2} for a valid adjacency matrix. Total: the added
/// self-loop keeps every degree >= 1.
NormalizedAdjacency normalize(const AdjacencyMatrix& adj);

/// Vertices at shortest-path distance <= k from v, including v itself.
/// k = 1 yields v plus its direct neighbors. Throws on v out of range or
/// k < 1.
std::vector<VertexId> k_order_neighborhood(const Graph& g, VertexId v, int k);

/// 2|E| / N.
double average_degree(const Graph& g);

/// Loads a graph from an edge list, an optional CSV feature file (empty path
/// selects identity features) and a CSV label file. Parse failures report
/// the offending file and line number.
Graph load_graph(const std::string& edge_path, const std::string& feature_path,
                 const std::string& label_path);

}  // namespace graphfool
