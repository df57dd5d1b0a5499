#include "graphfool/attack.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace graphfool {

namespace {
constexpr double kDegenerateNorm = 1e-12;
constexpr double kNoiseFloor = 1e-12;
}  // namespace

Matrix symmetrize_zero_diag(const Matrix& r) {
  if (r.rows() != r.cols()) throw std::invalid_argument("symmetrize: not square");
  const std::size_t n = r.rows();
  Matrix out(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double v = 0.5 * (r(i, j) + r(j, i));
      out(i, j) = v;
      out(j, i) = v;
    }
  }
  return out;
}

std::optional<BoundaryLinearization> linearized_boundary_distance(
    const AdjacencyGradientContext& ctx, VertexId v, int k, int k_hat) {
  if (k == k_hat) {
    throw std::invalid_argument("boundary: k must differ from current prediction");
  }
  const Matrix w = sub(ctx.logit_grad(v, k), ctx.logit_grad(v, k_hat));
  const double df = ctx.logits()(v, static_cast<std::size_t>(k)) -
                    ctx.logits()(v, static_cast<std::size_t>(k_hat));
  const double norm = frobenius_norm(w);
  if (norm < kDegenerateNorm) return std::nullopt;
  BoundaryLinearization out;
  out.score = std::abs(df) / norm;
  out.direction = scale(w, std::abs(df) / (norm * norm));
  return out;
}

std::optional<BoundaryLinearization> linearized_boundary_distance(
    const GcnModel& model, const Matrix& x, const AdjacencyMatrix& adjacency,
    VertexId v, int k, int k_hat) {
  AdjacencyGradientContext ctx(model, x, adjacency);
  return linearized_boundary_distance(ctx, v, k, k_hat);
}

std::optional<UntargetedPerturbation> minimal_perturbation_untargeted(
    const AdjacencyGradientContext& ctx, VertexId v) {
  const int k_hat = ctx.predicted_class(v);
  const int n_classes = static_cast<int>(ctx.logits().cols());
  std::optional<UntargetedPerturbation> best;
  double best_score = 0.0;
  for (int k = 0; k < n_classes; ++k) {
    if (k == k_hat) continue;
    auto boundary = linearized_boundary_distance(ctx, v, k, k_hat);
    if (!boundary) continue;
    if (!best || boundary->score < best_score) {  // strict < keeps lowest class on ties
      best_score = boundary->score;
      best = UntargetedPerturbation{
          k, PerturbationMatrix{boundary->direction,
                                symmetrize_zero_diag(boundary->direction)}};
    }
  }
  return best;
}

std::optional<PerturbationMatrix> minimal_perturbation_targeted(
    const AdjacencyGradientContext& ctx, VertexId v, int target_label) {
  const int k_hat = ctx.predicted_class(v);
  if (target_label == k_hat) {
    throw std::invalid_argument("targeted perturbation: already predicted as target");
  }
  auto boundary = linearized_boundary_distance(ctx, v, target_label, k_hat);
  if (!boundary) return std::nullopt;
  return PerturbationMatrix{boundary->direction,
                            symmetrize_zero_diag(boundary->direction)};
}

std::vector<FlipCandidate> feasible_candidates(
    const AdjacencyMatrix& adjacency, const Matrix& r_hat, const AttackPlan& plan,
    const std::vector<VertexId>& limited_vertices) {
  const std::size_t n = adjacency.size();
  if (r_hat.rows() != n || r_hat.cols() != n) {
    throw std::invalid_argument("feasible_candidates: perturbation shape mismatch");
  }
  if (plan.scope.kind == ScopeKind::limited && limited_vertices.empty()) {
    throw std::invalid_argument("feasible_candidates: limited scope needs a neighborhood");
  }
  const VertexId target = plan.target;
  auto in_limited = [&limited_vertices](VertexId u) {
    return std::binary_search(limited_vertices.begin(), limited_vertices.end(), u);
  };

  std::vector<FlipCandidate> out;
  for (VertexId i = 0; i < n; ++i) {
    for (VertexId j = i + 1; j < n; ++j) {
      const double value = r_hat(i, j);
      if (std::abs(value) < kNoiseFloor) continue;
      const bool edge = adjacency.has_edge(i, j);
      if (value > 0.0 && edge) continue;   // cannot re-add
      if (value < 0.0 && !edge) continue;  // cannot re-delete
      switch (plan.scope.kind) {
        case ScopeKind::unlimited:
          break;
        case ScopeKind::direct:
          if (i != target && j != target) continue;
          break;
        case ScopeKind::indirect:
          if (i == target || j == target) continue;
          break;
        case ScopeKind::limited:
          if (!in_limited(i) || !in_limited(j)) continue;
          break;
      }
      out.push_back(FlipCandidate{i, j, value});
    }
  }
  std::sort(out.begin(), out.end(), [](const FlipCandidate& a, const FlipCandidate& b) {
    const double aa = std::abs(a.value), bb = std::abs(b.value);
    if (aa != bb) return aa > bb;
    if (a.i != b.i) return a.i < b.i;
    return a.j < b.j;
  });
  return out;
}

AdjacencyMatrix apply_flip(const AdjacencyMatrix& adjacency, VertexId i,
                           VertexId j, int delta) {
  AdjacencyMatrix out = adjacency;
  out.toggle(i, j, delta);
  return out;
}

std::uint64_t checksum_adjacency(const Matrix& adjacency) {
  std::uint64_t hash = 1469598103934665603ULL;  // FNV offset basis
  auto mix = [&hash](std::uint64_t x) {
    for (int b = 0; b < 8; ++b) {
      hash ^= (x >> (8 * b)) & 0xff;
      hash *= 1099511628211ULL;  // FNV prime
    }
  };
  for (std::size_t i = 0; i < adjacency.rows(); ++i) {
    for (std::size_t j = i + 1; j < adjacency.cols(); ++j) {
      if (adjacency(i, j) != 0.0) {
        mix(i);
        mix(j);
      }
    }
  }
  return hash;
}

Matrix replay_flips(const Graph& g, const std::vector<EdgeFlip>& flips) {
  AdjacencyMatrix a = AdjacencyMatrix::from_graph(g);
  for (const EdgeFlip& f : flips) a.toggle(f.u, f.v, f.delta);
  return a.entries();
}

int default_budget(const Graph& g) {
  const int k = static_cast<int>(std::ceil(2.0 * average_degree(g)));
  return std::max(1, std::min(20, k));
}

AttackResult run_attack(const GcnModel& model, const Graph& g,
                        const AttackPlan& plan) {
  const std::size_t n = g.n_vertices();
  if (plan.target >= n) throw std::invalid_argument("run_attack: target out of range");
  if (plan.budget < 1) throw std::invalid_argument("run_attack: budget must be >= 1");
  if (plan.mode == AttackMode::targeted) {
    if (!plan.target_label) {
      throw std::invalid_argument("run_attack: targeted mode needs a label");
    }
    if (*plan.target_label < 0 ||
        static_cast<std::size_t>(*plan.target_label) >= model.n_classes()) {
      throw std::invalid_argument("run_attack: target label out of range");
    }
  }
  if (plan.scope.kind == ScopeKind::limited && plan.scope.order < 1) {
    throw std::invalid_argument("run_attack: limited scope order must be >= 1");
  }

  AttackResult res;
  res.method = "graphfool";
  res.target = plan.target;
  res.mode = plan.mode;
  res.target_label = plan.target_label;
  res.scope = plan.scope;
  res.budget = plan.budget;

  // The modifiable subgraph of a limited attack is fixed by the original
  // graph, not recomputed as edges change.
  std::vector<VertexId> limited;
  if (plan.scope.kind == ScopeKind::limited) {
    limited = k_order_neighborhood(g, plan.target, plan.scope.order);
  }

  AdjacencyMatrix working = AdjacencyMatrix::from_graph(g);
  AdjacencyGradientContext ctx(model, g.features(), working);
  res.pre_label = ctx.predicted_class(plan.target);
  if (plan.mode == AttackMode::targeted && *plan.target_label == res.pre_label) {
    throw std::invalid_argument("run_attack: target label equals clean prediction");
  }
  int current = res.pre_label;

  for (;;) {
    const bool goal_met = (plan.mode == AttackMode::untargeted)
                              ? current != res.pre_label
                              : current == *plan.target_label;
    if (goal_met) {
      res.success = true;
      break;
    }
    if (res.n_modified() >= plan.budget) {
      res.failure_reason = "budget_exhausted";
      break;
    }

    Matrix r_hat;
    if (plan.mode == AttackMode::untargeted) {
      auto step = minimal_perturbation_untargeted(ctx, plan.target);
      if (!step) {
        res.failure_reason = "degenerate_boundary";
        break;
      }
      res.boundary_classes.push_back(step->boundary_class);
      r_hat = std::move(step->perturbation.symmetrized);
    } else {
      auto step = minimal_perturbation_targeted(ctx, plan.target, *plan.target_label);
      if (!step) {
        res.failure_reason = "degenerate_boundary";
        break;
      }
      res.boundary_classes.push_back(*plan.target_label);
      r_hat = std::move(step->symmetrized);
    }
    if (!all_finite(r_hat)) {
      res.failure_reason = "degenerate_boundary";
      break;
    }

    const auto candidates = feasible_candidates(working, r_hat, plan, limited);
    if (candidates.empty()) {
      res.failure_reason = "no_feasible_move";
      break;
    }
    const FlipCandidate& top = candidates.front();
    const int delta = top.value > 0.0 ? 1 : -1;
    working.toggle(top.i, top.j, delta);
    res.flips.push_back(EdgeFlip{top.i, top.j, delta});

    ctx = AdjacencyGradientContext(model, g.features(), working);
    current = ctx.predicted_class(plan.target);
    res.iteration_labels.push_back(current);
  }

  res.post_label = current;
  res.adjacency_checksum = checksum_adjacency(working.entries());
  return res;
}

}  // namespace graphfool
