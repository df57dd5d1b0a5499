#include "graphfool/graph.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace graphfool {

Graph::Graph(std::size_t n_vertices, std::vector<Edge> edges, Matrix features,
             std::vector<int> labels, std::vector<bool> train_mask)
    : n_(n_vertices),
      edges_(std::move(edges)),
      features_(std::move(features)),
      labels_(std::move(labels)),
      train_mask_(std::move(train_mask)) {
  for (auto& [u, v] : edges_) {
    if (u == v) {
      throw std::invalid_argument("graph: self-loop on vertex " + std::to_string(u));
    }
    if (u >= n_ || v >= n_) {
      throw std::invalid_argument("graph: edge endpoint out of range (" +
                                  std::to_string(u) + "," + std::to_string(v) + ")");
    }
    if (u > v) std::swap(u, v);
  }
  std::sort(edges_.begin(), edges_.end());
  edges_.erase(std::unique(edges_.begin(), edges_.end()), edges_.end());

  if (features_.size() == 0) {
    features_ = Matrix::identity(n_);
  } else if (features_.rows() != n_) {
    throw std::invalid_argument("graph: feature row count " +
                                std::to_string(features_.rows()) +
                                " != n_vertices " + std::to_string(n_));
  }
  if (labels_.empty()) labels_.assign(n_, kUnknownLabel);
  if (labels_.size() != n_) {
    throw std::invalid_argument("graph: label count != n_vertices");
  }
  if (train_mask_.empty()) {
    train_mask_.assign(n_, false);
    for (std::size_t i = 0; i < n_; ++i) train_mask_[i] = labels_[i] != kUnknownLabel;
  }
  if (train_mask_.size() != n_) {
    throw std::invalid_argument("graph: train_mask size != n_vertices");
  }
  for (std::size_t i = 0; i < n_; ++i) {
    if (train_mask_[i] && labels_[i] == kUnknownLabel) {
      throw std::invalid_argument("graph: train vertex " + std::to_string(i) +
                                  " has unknown label");
    }
    if (labels_[i] != kUnknownLabel && labels_[i] < 0) {
      throw std::invalid_argument("graph: negative label on vertex " + std::to_string(i));
    }
  }

  adjacency_.assign(n_, {});
  for (const auto& [u, v] : edges_) {
    adjacency_[u].push_back(v);
    adjacency_[v].push_back(u);
  }
  for (auto& nbrs : adjacency_) std::sort(nbrs.begin(), nbrs.end());

  for (int label : labels_) n_classes_ = std::max(n_classes_, label + 1);
}

bool Graph::has_edge(VertexId u, VertexId v) const {
  const auto& nbrs = adjacency_[u];
  return std::binary_search(nbrs.begin(), nbrs.end(), v);
}

Graph Graph::with_adjacency(const Matrix& adjacency) const {
  if (adjacency.rows() != n_ || adjacency.cols() != n_) {
    throw std::invalid_argument("with_adjacency: shape mismatch");
  }
  std::vector<Edge> new_edges;
  for (VertexId u = 0; u < n_; ++u) {
    for (VertexId v = u + 1; v < n_; ++v) {
      if (adjacency(u, v) != 0.0) new_edges.emplace_back(u, v);
    }
  }
  return Graph(n_, std::move(new_edges), features_, labels_, train_mask_);
}

AdjacencyMatrix::AdjacencyMatrix(Matrix entries) : entries_(std::move(entries)) {
  if (entries_.rows() != entries_.cols()) {
    throw std::invalid_argument("adjacency: not square");
  }
  const std::size_t n = entries_.rows();
  for (std::size_t i = 0; i < n; ++i) {
    if (entries_(i, i) != 0.0) {
      throw std::invalid_argument("adjacency: nonzero diagonal at " + std::to_string(i));
    }
    for (std::size_t j = i + 1; j < n; ++j) {
      const double x = entries_(i, j);
      if (x != 0.0 && x != 1.0) {
        throw std::invalid_argument("adjacency: non-binary entry");
      }
      if (x != entries_(j, i)) {
        throw std::invalid_argument("adjacency: not symmetric");
      }
    }
  }
}

AdjacencyMatrix AdjacencyMatrix::from_graph(const Graph& g) {
  Matrix m(g.n_vertices(), g.n_vertices());
  for (const auto& [u, v] : g.edges()) {
    m(u, v) = 1.0;
    m(v, u) = 1.0;
  }
  return AdjacencyMatrix(std::move(m));
}

void AdjacencyMatrix::toggle(VertexId i, VertexId j, int delta) {
  if (i == j) throw std::invalid_argument("toggle: self-loop");
  if (i >= size() || j >= size()) throw std::invalid_argument("toggle: out of range");
  const double current = entries_(i, j);
  if (delta == 1 && current == 0.0) {
    entries_(i, j) = entries_(j, i) = 1.0;
  } else if (delta == -1 && current == 1.0) {
    entries_(i, j) = entries_(j, i) = 0.0;
  } else {
    throw std::invalid_argument("toggle: infeasible flip (" + std::to_string(i) +
                                "," + std::to_string(j) + ") delta " +
                                std::to_string(delta));
  }
}

Matrix normalize_dense(const Matrix& a) {
  if (a.rows() != a.cols()) throw std::invalid_argument("normalize: not square");
  const std::size_t n = a.rows();
  std::vector<double> inv_sqrt(n);
  for (std::size_t i = 0; i < n; ++i) {
    double s = 1.0 + a(i, i);  // self-loop
    for (std::size_t j = 0; j < n; ++j)
      if (j != i) s += a(i, j);
    inv_sqrt[i] = 1.0 / std::sqrt(s);
  }
  Matrix out(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const double t = a(i, j) + (i == j ? 1.0 : 0.0);
      out(i, j) = t * inv_sqrt[i] * inv_sqrt[j];
    }
  }
  return out;
}

NormalizedAdjacency normalize(const AdjacencyMatrix& adj) {
  return NormalizedAdjacency{normalize_dense(adj.entries())};
}

std::vector<VertexId> k_order_neighborhood(const Graph& g, VertexId v, int k) {
  if (v >= g.n_vertices()) {
    throw std::invalid_argument("k_order_neighborhood: vertex " + std::to_string(v) +
                                " out of range");
  }
  if (k < 1) throw std::invalid_argument("k_order_neighborhood: k must be >= 1");
  std::vector<int> dist(g.n_vertices(), -1);
  std::deque<VertexId> frontier{v};
  dist[v] = 0;
  while (!frontier.empty()) {
    const VertexId u = frontier.front();
    frontier.pop_front();
    if (dist[u] == k) continue;
    for (VertexId w : g.neighbors(u)) {
      if (dist[w] < 0) {
        dist[w] = dist[u] + 1;
        frontier.push_back(w);
      }
    }
  }
  std::vector<VertexId> out;
  for (VertexId u = 0; u < g.n_vertices(); ++u) {
    if (dist[u] >= 0 && dist[u] <= k) out.push_back(u);
  }
  return out;
}

double average_degree(const Graph& g) {
  return 2.0 * static_cast<double>(g.edges().size()) /
         static_cast<double>(g.n_vertices());
}

namespace {

[[noreturn]] void parse_fail(const std::string& path, std::size_t line_no,
                             const std::string& what) {
  throw std::runtime_error(path + ":" + std::to_string(line_no) + ": " + what);
}

std::vector<Edge> load_edge_list(const std::string& path, VertexId& max_vertex) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open edge file: " + path);
  std::vector<Edge> edges;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ss(line);
    long long u = -1, v = -1;
    if (!(ss >> u >> v)) parse_fail(path, line_no, "expected two vertex ids");
    std::string rest;
    if (ss >> rest) parse_fail(path, line_no, "trailing tokens after edge");
    if (u < 0 || v < 0) parse_fail(path, line_no, "negative vertex id");
    if (u == v) parse_fail(path, line_no, "self-loop " + std::to_string(u));
    edges.emplace_back(static_cast<VertexId>(u), static_cast<VertexId>(v));
    max_vertex = std::max({max_vertex, static_cast<VertexId>(u), static_cast<VertexId>(v)});
  }
  return edges;
}

Matrix load_feature_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open feature file: " + path);
  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t line_no = 0;
  std::size_t width = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::vector<double> row;
    std::istringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      try {
        std::size_t used = 0;
        row.push_back(std::stod(cell, &used));
        while (used < cell.size() && std::isspace(static_cast<unsigned char>(cell[used]))) ++used;
        if (used != cell.size()) throw std::invalid_argument(cell);
      } catch (const std::exception&) {
        parse_fail(path, line_no, "bad real value '" + cell + "'");
      }
    }
    if (row.empty()) parse_fail(path, line_no, "empty feature row");
    if (width == 0) width = row.size();
    if (row.size() != width) parse_fail(path, line_no, "ragged feature row");
    rows.push_back(std::move(row));
  }
  Matrix m(rows.size(), width);
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < width; ++j) m(i, j) = rows[i][j];
  return m;
}

void load_label_csv(const std::string& path, std::vector<int>& labels) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open label file: " + path);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ss(line);
    std::string vertex_cell, label_cell;
    if (!std::getline(ss, vertex_cell, ',') || !std::getline(ss, label_cell)) {
      parse_fail(path, line_no, "expected 'vertex_id,label_id'");
    }
    long long v = -1, y = -1;
    try {
      v = std::stoll(vertex_cell);
      y = std::stoll(label_cell);
    } catch (const std::exception&) {
      parse_fail(path, line_no, "bad integer");
    }
    if (v < 0 || static_cast<std::size_t>(v) >= labels.size()) {
      parse_fail(path, line_no, "vertex id " + std::to_string(v) + " out of range");
    }
    if (y < 0) parse_fail(path, line_no, "negative label");
    labels[static_cast<std::size_t>(v)] = static_cast<int>(y);
  }
}

}  // namespace

Graph load_graph(const std::string& edge_path, const std::string& feature_path,
                 const std::string& label_path) {
  VertexId max_vertex = 0;
  std::vector<Edge> edges = load_edge_list(edge_path, max_vertex);

  Matrix features;
  if (!feature_path.empty()) features = load_feature_csv(feature_path);

  // Vertex count: feature rows when given, else 1 + max edge endpoint.
  std::size_t n = features.size() ? features.rows()
                                  : (edges.empty() ? 0 : max_vertex + 1);
  if (n == 0) throw std::runtime_error("load_graph: empty graph");
  if (!edges.empty() && max_vertex >= n) {
    throw std::runtime_error("load_graph: edge endpoint " + std::to_string(max_vertex) +
                             " exceeds feature row count " + std::to_string(n));
  }

  std::vector<int> labels(n, kUnknownLabel);
  if (!label_path.empty()) load_label_csv(label_path, labels);

  return Graph(n, std::move(edges), std::move(features), std::move(labels), {});
}

}  // namespace graphfool
