#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "graphfool/graph.hpp"
#include "graphfool/matrix.hpp"

namespace graphfool {

/// Two-layer GCN: Z = softmax(P relu(P X W0) W1) with P the normalized
/// adjacency.
struct GcnModel {
  Matrix w0;  // in_dim x hidden
  Matrix w1;  // hidden x n_classes

  std::size_t in_dim() const { return w0.rows(); }
  std::size_t hidden_dim() const { return w0.cols(); }
  std::size_t n_classes() const { return w1.cols(); }
};

struct TrainConfig {
  double learning_rate = 0.01;
  int epochs = 200;
  std::uint64_t seed = 0;
  double weight_decay = 0.0;  // 0 keeps the plain cross-entropy objective
  int hidden_dim = 16;
};

/// Glorot-uniform initialized model, seeded.
GcnModel init_model(std::size_t in_dim, std::size_t hidden_dim,
                    std::size_t n_classes, std::uint64_t seed);

struct ForwardPass {
  Matrix hidden_pre;  // P X W0, before relu
  Matrix logits;      // P relu(hidden_pre) W1
  Matrix z;           // row softmax of logits
};

ForwardPass forward(const GcnModel& model, const NormalizedAdjacency& a_hat,
                    const Matrix& x);

/// Cross-entropy over labeled examples: -sum_{l in train} ln Z[l, y_l].
/// Throws if the train set is empty.
double loss(const Matrix& z, const std::vector<int>& labels,
            const std::vector<bool>& train_mask);

struct TrainOutput {
  GcnModel model;
  std::vector<double> epoch_losses;
};

/// Analytic dL/dW0, dL/dW1 of the cross-entropy objective at the given
/// model; the exact gradients the trainer steps along.
struct WeightGradients {
  Matrix dw0;
  Matrix dw1;
};
WeightGradients loss_weight_gradients(const GcnModel& model, const Graph& g);

/// Full-batch gradient descent: W <- W - lr * dL/dW, `epochs` steps.
/// epochs = 0 returns the seeded init model untouched. Bit-reproducible for
/// a fixed seed. Throws if a class has no training example or the loss goes
/// non-finite (message carries the epoch index).
TrainOutput train(const Graph& g, const TrainConfig& config);

/// Argmax class per vertex; ties break to the lowest class id.
std::vector<int> predict(const GcnModel& model, const Graph& g,
                         const AdjacencyMatrix& adjacency);

std::vector<int> predict_rows(const Matrix& logits);

/// Forward tensors plus degree terms for gradients of vertex logits with
/// respect to the adjacency matrix, all at a fixed (model, X, A).
///
/// The gradient treats the normalization as part of the network: with
/// T = A + I, s = row sums of T, P_ij = T_ij / sqrt(s_i s_j), perturbing
/// A[p][q] moves both T[p][q] and s_p. For g = sum_k alpha_k logit[v][k],
/// reverse accumulation through logits = P relu(P X W0) W1 gives dg/dP, and
/// the normalization chain closes with
///   dg/dA[p][q] = dg/dP[p][q] / sqrt(s_p s_q)
///                 - (row_p + col_p) / (2 s_p^{3/2}),
///   row_p = sum_j dg/dP[p][j] T[p][j] / sqrt(s_j),
///   col_p = sum_i dg/dP[i][p] T[i][p] / sqrt(s_i).
/// Dropping the degree terms changes the ranking of candidate edges, so they
/// are always included.
class AdjacencyGradientContext {
 public:
  AdjacencyGradientContext(const GcnModel& model, const Matrix& x,
                           const AdjacencyMatrix& adjacency);

  const Matrix& logits() const { return logits_; }
  int predicted_class(VertexId v) const;

  /// Gradient of sum_k coeffs[k] * logit[v][k] w.r.t. every adjacency entry.
  Matrix weighted_logit_grad(VertexId v, std::span<const double> coeffs) const;

  /// Gradient of the single pre-softmax logit of vertex v, class k.
  Matrix logit_grad(VertexId v, int k) const;

 private:
  const GcnModel* model_;
  Matrix p_;                          // normalized adjacency
  Matrix t_;                          // A + I
  std::vector<double> inv_sqrt_deg_;  // s^{-1/2}
  std::vector<double> deg_;           // s
  Matrix xw0_;                        // X W0
  Matrix hidden_pre_;                 // P X W0
  Matrix hidden_;                     // relu of the above
  Matrix logits_;
};

/// Convenience wrapper: d logit[v][k] / dA as a dense N x N matrix.
Matrix logit_grad_wrt_A(const GcnModel& model, const Graph& g,
                        const AdjacencyMatrix& adjacency, VertexId v, int k);

/// Binary checkpoint (shapes + row-major weights); round-trips bit-exactly.
void save_checkpoint(const GcnModel& model, const std::string& path);
GcnModel load_checkpoint(const std::string& path);

}  // namespace graphfool
