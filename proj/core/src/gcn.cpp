#include "graphfool/gcn.hpp"

#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <stdexcept>

#include "graphfool/rng.hpp"

namespace graphfool {

GcnModel init_model(std::size_t in_dim, std::size_t hidden_dim,
                    std::size_t n_classes, std::uint64_t seed) {
  Rng rng(seed);
  auto glorot = [&rng](std::size_t fan_in, std::size_t fan_out) {
    Matrix w(fan_in, fan_out);
    const double limit = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
    for (double& x : w.data()) x = rng.next_symmetric(limit);
    return w;
  };
  return GcnModel{glorot(in_dim, hidden_dim), glorot(hidden_dim, n_classes)};
}

ForwardPass forward(const GcnModel& model, const NormalizedAdjacency& a_hat,
                    const Matrix& x) {
  if (x.cols() != model.in_dim()) {
    throw std::invalid_argument("forward: feature dim != model in_dim");
  }
  if (a_hat.entries.rows() != x.rows()) {
    throw std::invalid_argument("forward: adjacency size != feature rows");
  }
  ForwardPass out;
  out.hidden_pre = matmul(a_hat.entries, matmul(x, model.w0));
  out.logits = matmul(a_hat.entries, matmul(relu(out.hidden_pre), model.w1));
  out.z = row_softmax(out.logits);
  return out;
}

double loss(const Matrix& z, const std::vector<int>& labels,
            const std::vector<bool>& train_mask) {
  if (z.rows() != labels.size() || z.rows() != train_mask.size()) {
    throw std::invalid_argument("loss: size mismatch");
  }
  double total = 0.0;
  std::size_t n_train = 0;
  for (std::size_t i = 0; i < z.rows(); ++i) {
    if (!train_mask[i]) continue;
    const int y = labels[i];
    if (y < 0 || static_cast<std::size_t>(y) >= z.cols()) {
      throw std::invalid_argument("loss: label out of range at vertex " +
                                  std::to_string(i));
    }
    total -= std::log(z(i, static_cast<std::size_t>(y)));
    ++n_train;
  }
  if (n_train == 0) throw std::invalid_argument("loss: empty train set");
  return total;
}

namespace {

struct EpochState {
  double loss = 0.0;
  Matrix dw0;
  Matrix dw1;
};

// Shared by train() and the public gradient probe so the oracle checks the
// exact path the trainer uses. p and px are the propagation operator and
// p * features, precomputed once per graph.
EpochState epoch_gradients(const GcnModel& model, const Graph& g,
                           const Matrix& p, const Matrix& px) {
  const std::size_t n = g.n_vertices();
  const Matrix hidden_pre = matmul(px, model.w0);
  const Matrix hidden = relu(hidden_pre);
  const Matrix ph = matmul(p, hidden);
  const Matrix logits = matmul(ph, model.w1);
  const Matrix z = row_softmax(logits);

  EpochState state;
  state.loss = loss(z, g.labels(), g.train_mask());

  // dL/dlogits = Z - Y on labeled rows, 0 elsewhere.
  Matrix dlogits(n, z.cols());
  for (std::size_t i = 0; i < n; ++i) {
    if (!g.train_mask()[i]) continue;
    for (std::size_t k = 0; k < dlogits.cols(); ++k) dlogits(i, k) = z(i, k);
    dlogits(i, static_cast<std::size_t>(g.labels()[i])) -= 1.0;
  }

  state.dw1 = matmul(transpose(ph), dlogits);
  Matrix dhidden = matmul(matmul(transpose(p), dlogits), transpose(model.w1));
  for (std::size_t i = 0; i < dhidden.size(); ++i) {
    if (hidden_pre.data()[i] <= 0.0) dhidden.data()[i] = 0.0;
  }
  state.dw0 = matmul(transpose(px), dhidden);
  return state;
}

}  // namespace

WeightGradients loss_weight_gradients(const GcnModel& model, const Graph& g) {
  const Matrix p = normalize(AdjacencyMatrix::from_graph(g)).entries;
  const Matrix px = matmul(p, g.features());
  EpochState state = epoch_gradients(model, g, p, px);
  return WeightGradients{std::move(state.dw0), std::move(state.dw1)};
}

TrainOutput train(const Graph& g, const TrainConfig& config) {
  if (config.epochs < 0) throw std::invalid_argument("train: negative epochs");
  if (config.learning_rate <= 0.0) throw std::invalid_argument("train: learning rate must be > 0");
  const std::size_t n = g.n_vertices();
  const int n_classes = g.n_classes();
  if (n_classes < 1) throw std::invalid_argument("train: no labeled vertices");

  std::vector<int> seen(n_classes, 0);
  std::size_t n_train = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (g.train_mask()[i]) {
      ++seen[static_cast<std::size_t>(g.labels()[i])];
      ++n_train;
    }
  }
  if (n_train == 0) throw std::invalid_argument("train: empty train set");
  for (int c = 0; c < n_classes; ++c) {
    if (seen[c] == 0) {
      throw std::invalid_argument("train: class " + std::to_string(c) +
                                  " has no training example");
    }
  }

  const Matrix p = normalize(AdjacencyMatrix::from_graph(g)).entries;
  const Matrix& x = g.features();
  const Matrix px = matmul(p, x);  // constant across epochs

  TrainOutput out;
  out.model = init_model(x.cols(), static_cast<std::size_t>(config.hidden_dim),
                         static_cast<std::size_t>(n_classes), config.seed);

  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    EpochState state = epoch_gradients(out.model, g, p, px);
    if (!std::isfinite(state.loss)) {
      throw std::runtime_error("train: non-finite loss at epoch " +
                               std::to_string(epoch));
    }
    out.epoch_losses.push_back(state.loss);

    if (config.weight_decay > 0.0) {
      state.dw0 = add(state.dw0, scale(out.model.w0, config.weight_decay));
      state.dw1 = add(state.dw1, scale(out.model.w1, config.weight_decay));
    }
    out.model.w0 = sub(out.model.w0, scale(state.dw0, config.learning_rate));
    out.model.w1 = sub(out.model.w1, scale(state.dw1, config.learning_rate));
  }
  return out;
}

std::vector<int> predict_rows(const Matrix& logits) {
  std::vector<int> out(logits.rows());
  for (std::size_t i = 0; i < logits.rows(); ++i) {
    std::size_t best = 0;
    for (std::size_t k = 1; k < logits.cols(); ++k) {
      if (logits(i, k) > logits(i, best)) best = k;
    }
    out[i] = static_cast<int>(best);
  }
  return out;
}

std::vector<int> predict(const GcnModel& model, const Graph& g,
                         const AdjacencyMatrix& adjacency) {
  const auto pass = forward(model, normalize(adjacency), g.features());
  return predict_rows(pass.logits);
}

AdjacencyGradientContext::AdjacencyGradientContext(const GcnModel& model,
                                                   const Matrix& x,
                                                   const AdjacencyMatrix& adjacency)
    : model_(&model) {
  const std::size_t n = adjacency.size();
  if (x.rows() != n) throw std::invalid_argument("gradient context: feature rows != N");
  if (x.cols() != model.in_dim()) {
    throw std::invalid_argument("gradient context: feature dim != model in_dim");
  }
  const Matrix& a = adjacency.entries();
  t_ = a;
  deg_.resize(n);
  inv_sqrt_deg_.resize(n);
  // Same summation order as normalize_dense, so the context's operator is
  // bit-identical to the one forward/predict see.
  for (std::size_t i = 0; i < n; ++i) {
    t_(i, i) += 1.0;
    double s = 1.0 + a(i, i);
    for (std::size_t j = 0; j < n; ++j)
      if (j != i) s += a(i, j);
    deg_[i] = s;
    inv_sqrt_deg_[i] = 1.0 / std::sqrt(s);
  }
  p_ = Matrix(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      p_(i, j) = t_(i, j) * inv_sqrt_deg_[i] * inv_sqrt_deg_[j];

  xw0_ = matmul(x, model.w0);
  hidden_pre_ = matmul(p_, xw0_);
  hidden_ = relu(hidden_pre_);
  // Same association as forward() so the logits agree bitwise.
  logits_ = matmul(p_, matmul(hidden_, model.w1));
}

int AdjacencyGradientContext::predicted_class(VertexId v) const {
  std::size_t best = 0;
  for (std::size_t k = 1; k < logits_.cols(); ++k) {
    if (logits_(v, k) > logits_(v, best)) best = k;
  }
  return static_cast<int>(best);
}

Matrix AdjacencyGradientContext::weighted_logit_grad(
    VertexId v, std::span<const double> coeffs) const {
  const std::size_t n = p_.rows();
  const std::size_t h = model_->hidden_dim();
  const std::size_t f = model_->n_classes();
  if (v >= n) throw std::invalid_argument("weighted_logit_grad: vertex out of range");
  if (coeffs.size() != f) {
    throw std::invalid_argument("weighted_logit_grad: coeffs size != n_classes");
  }

  // u = W1 coeffs, the hidden-space direction of the objective.
  std::vector<double> u(h, 0.0);
  for (std::size_t i = 0; i < h; ++i)
    for (std::size_t k = 0; k < f; ++k) u[i] += model_->w1(i, k) * coeffs[k];

  // dg/dP. Outer factor: row v picks up (hidden u). Inner factor: backprop
  // through relu into hidden_pre = P (X W0).
  Matrix dp(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    double q = 0.0;
    for (std::size_t i = 0; i < h; ++i) q += hidden_(j, i) * u[i];
    dp(v, j) += q;
  }
  for (std::size_t i = 0; i < n; ++i) {
    const double pvi = p_(v, i);
    if (pvi == 0.0) continue;
    for (std::size_t j = 0; j < n; ++j) {
      double acc = 0.0;
      for (std::size_t hh = 0; hh < h; ++hh) {
        if (hidden_pre_(i, hh) > 0.0) acc += u[hh] * xw0_(j, hh);
      }
      dp(i, j) += pvi * acc;
    }
  }

  // Close the normalization chain.
  std::vector<double> row_term(n, 0.0), col_term(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const double w = dp(i, j) * t_(i, j);
      if (w == 0.0) continue;
      row_term[i] += w * inv_sqrt_deg_[j];
      col_term[j] += w * inv_sqrt_deg_[i];
    }
  }
  Matrix grad(n, n);
  for (std::size_t pidx = 0; pidx < n; ++pidx) {
    const double half_deg_term =
        0.5 * inv_sqrt_deg_[pidx] / deg_[pidx] * (row_term[pidx] + col_term[pidx]);
    for (std::size_t q = 0; q < n; ++q) {
      grad(pidx, q) =
          dp(pidx, q) * inv_sqrt_deg_[pidx] * inv_sqrt_deg_[q] - half_deg_term;
    }
  }
  return grad;
}

Matrix AdjacencyGradientContext::logit_grad(VertexId v, int k) const {
  if (k < 0 || static_cast<std::size_t>(k) >= model_->n_classes()) {
    throw std::invalid_argument("logit_grad: class out of range");
  }
  std::vector<double> coeffs(model_->n_classes(), 0.0);
  coeffs[static_cast<std::size_t>(k)] = 1.0;
  return weighted_logit_grad(v, coeffs);
}

Matrix logit_grad_wrt_A(const GcnModel& model, const Graph& g,
                        const AdjacencyMatrix& adjacency, VertexId v, int k) {
  return AdjacencyGradientContext(model, g.features(), adjacency).logit_grad(v, k);
}

namespace {
constexpr char kCheckpointMagic[4] = {'G', 'F', 'C', 'K'};
constexpr std::uint32_t kCheckpointVersion = 1;

void write_u64(std::ofstream& out, std::uint64_t v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(v));
}
std::uint64_t read_u64(std::ifstream& in) {
  std::uint64_t v = 0;
  in.read(reinterpret_cast<char*>(&v), sizeof(v));
  return v;
}
}  // namespace

void save_checkpoint(const GcnModel& model, const std::string& path) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write checkpoint: " + path);
    out.write(kCheckpointMagic, 4);
    const std::uint32_t version = kCheckpointVersion;
    out.write(reinterpret_cast<const char*>(&version), sizeof(version));
    write_u64(out, model.in_dim());
    write_u64(out, model.hidden_dim());
    write_u64(out, model.n_classes());
    out.write(reinterpret_cast<const char*>(model.w0.data().data()),
              static_cast<std::streamsize>(model.w0.size() * sizeof(double)));
    out.write(reinterpret_cast<const char*>(model.w1.data().data()),
              static_cast<std::streamsize>(model.w1.size() * sizeof(double)));
    if (!out) throw std::runtime_error("checkpoint write failed: " + path);
  }
  std::filesystem::rename(tmp, path);
}

GcnModel load_checkpoint(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open checkpoint: " + path);
  char magic[4] = {};
  in.read(magic, 4);
  if (std::memcmp(magic, kCheckpointMagic, 4) != 0) {
    throw std::runtime_error("not a checkpoint file: " + path);
  }
  std::uint32_t version = 0;
  in.read(reinterpret_cast<char*>(&version), sizeof(version));
  if (version != kCheckpointVersion) {
    throw std::runtime_error("unsupported checkpoint version " +
                             std::to_string(version));
  }
  const std::uint64_t in_dim = read_u64(in);
  const std::uint64_t hidden = read_u64(in);
  const std::uint64_t classes = read_u64(in);
  GcnModel model{Matrix(in_dim, hidden), Matrix(hidden, classes)};
  in.read(reinterpret_cast<char*>(model.w0.data().data()),
          static_cast<std::streamsize>(model.w0.size() * sizeof(double)));
  in.read(reinterpret_cast<char*>(model.w1.data().data()),
          static_cast<std::streamsize>(model.w1.size() * sizeof(double)));
  if (!in) throw std::runtime_error("truncated checkpoint: " + path);
  return model;
}

}  // namespace graphfool
