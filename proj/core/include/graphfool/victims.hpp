#pragma once

#include <vector>

#include "graphfool/gcn.hpp"
#include "graphfool/graph.hpp"

namespace graphfool {

/// Trains a fresh GCN on the given (possibly adversarial) adjacency and
/// predicts every vertex. Poisoning-style evaluation: the victim never sees
/// the clean graph.
std::vector<int> retrained_gcn_victim(const Graph& g,
                                      const AdjacencyMatrix& adjacency,
                                      const TrainConfig& config);

struct LinearVictimConfig {
  double learning_rate = 0.5;
  int epochs = 300;
};

/// Transfer surrogate with a structurally different pipeline: propagate
/// features two steps (A_hat^2 X, no nonlinearity) and fit a multinomial
/// linear classifier on the labeled rows by gradient descent from zero
/// init, so the fit is deterministic without a seed. Throws when the train
/// set is empty.
std::vector<int> propagation_linear_victim(const Graph& g,
                                           const AdjacencyMatrix& adjacency,
                                           const LinearVictimConfig& config = {});

}  // namespace graphfool
