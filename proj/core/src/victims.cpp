#include "graphfool/victims.hpp"

#include <cmath>
#include <stdexcept>

namespace graphfool {

std::vector<int> retrained_gcn_victim(const Graph& g,
                                      const AdjacencyMatrix& adjacency,
                                      const TrainConfig& config) {
  const Graph poisoned = g.with_adjacency(adjacency.entries());
  const TrainOutput out = train(poisoned, config);
  return predict(out.model, poisoned, adjacency);
}

std::vector<int> propagation_linear_victim(const Graph& g,
                                           const AdjacencyMatrix& adjacency,
                                           const LinearVictimConfig& config) {
  const std::size_t n = g.n_vertices();
  const int n_classes = g.n_classes();
  if (n_classes < 1) throw std::invalid_argument("linear victim: no labeled vertices");
  std::size_t n_train = 0;
  for (std::size_t i = 0; i < n; ++i) n_train += g.train_mask()[i] ? 1 : 0;
  if (n_train == 0) throw std::invalid_argument("linear victim: empty train set");

  const Matrix p = normalize(adjacency).entries;
  const Matrix feats = matmul(p, matmul(p, g.features()));
  const std::size_t c = feats.cols();
  const std::size_t f = static_cast<std::size_t>(n_classes);

  Matrix w(c, f);
  std::vector<double> bias(f, 0.0);
  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    Matrix logits = matmul(feats, w);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t k = 0; k < f; ++k) logits(i, k) += bias[k];
    const Matrix z = row_softmax(logits);

    Matrix dlogits(n, f);
    for (std::size_t i = 0; i < n; ++i) {
      if (!g.train_mask()[i]) continue;
      for (std::size_t k = 0; k < f; ++k) dlogits(i, k) = z(i, k);
      dlogits(i, static_cast<std::size_t>(g.labels()[i])) -= 1.0;
    }
    const Matrix dw = matmul(transpose(feats), dlogits);
    const double step = config.learning_rate / static_cast<double>(n_train);
    for (std::size_t idx = 0; idx < w.size(); ++idx) {
      w.data()[idx] -= step * dw.data()[idx];
    }
    for (std::size_t k = 0; k < f; ++k) {
      double db = 0.0;
      for (std::size_t i = 0; i < n; ++i) db += dlogits(i, k);
      bias[k] -= step * db;
    }
  }

  Matrix logits = matmul(feats, w);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < f; ++k) logits(i, k) += bias[k];
  return predict_rows(logits);
}

}  // namespace graphfool
