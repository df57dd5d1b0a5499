#include "graphfool/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "graphfool/rng.hpp"

namespace graphfool {

namespace {

AttackResult make_result(const char* method, VertexId target, ScopeSpec scope,
                         int budget) {
  AttackResult res;
  res.method = method;
  res.target = target;
  res.mode = AttackMode::untargeted;
  res.scope = scope;
  res.budget = budget;
  return res;
}

/// All pairs (i < j) the scope admits, lexicographic order.
std::vector<Edge> in_scope_pairs(const Graph& g, VertexId target, ScopeSpec scope) {
  const std::size_t n = g.n_vertices();
  std::vector<VertexId> limited;
  if (scope.kind == ScopeKind::limited) {
    limited = k_order_neighborhood(g, target, scope.order);
  }
  auto in_limited = [&limited](VertexId u) {
    return std::binary_search(limited.begin(), limited.end(), u);
  };
  std::vector<Edge> out;
  for (VertexId i = 0; i < n; ++i) {
    for (VertexId j = i + 1; j < n; ++j) {
      switch (scope.kind) {
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
      out.emplace_back(i, j);
    }
  }
  return out;
}

}  // namespace

AttackResult dice_attack(const Graph& g, const std::vector<int>& labels,
                         VertexId target, int budget, double b_fraction,
                         std::uint64_t seed) {
  if (target >= g.n_vertices()) throw std::invalid_argument("dice: target out of range");
  if (budget < 1) throw std::invalid_argument("dice: budget must be >= 1");
  if (b_fraction < 0.0 || b_fraction > 1.0) {
    throw std::invalid_argument("dice: b_fraction must be in [0, 1]");
  }
  if (labels.size() != g.n_vertices()) {
    throw std::invalid_argument("dice: labels size mismatch");
  }
  const int own_label = labels[target];

  std::vector<VertexId> cross_label;
  for (VertexId u = 0; u < g.n_vertices(); ++u) {
    if (u != target && labels[u] != own_label) cross_label.push_back(u);
  }
  if (cross_label.empty()) {
    throw std::runtime_error("dice: no differently-labeled vertices available");
  }

  AttackResult res = make_result("dice", target, ScopeSpec{ScopeKind::direct, 1}, budget);
  Rng rng(seed);
  AdjacencyMatrix working = AdjacencyMatrix::from_graph(g);

  const int requested_deletions =
      static_cast<int>(std::lround(b_fraction * static_cast<double>(budget)));
  std::vector<VertexId> incident(g.neighbors(target));
  const auto deleted = rng.sample(std::move(incident),
                                  static_cast<std::size_t>(requested_deletions));
  for (VertexId u : deleted) {
    working.toggle(target, u, -1);
    res.flips.push_back(EdgeFlip{std::min(target, u), std::max(target, u), -1});
  }

  const int n_additions = budget - static_cast<int>(deleted.size());
  std::vector<VertexId> addable;
  for (VertexId u : cross_label) {
    // a deleted partner is non-adjacent now, but re-adding it would revert
    const bool just_deleted =
        std::find(deleted.begin(), deleted.end(), u) != deleted.end();
    if (!working.has_edge(target, u) && !just_deleted) addable.push_back(u);
  }
  for (VertexId u : rng.sample(std::move(addable), static_cast<std::size_t>(n_additions))) {
    working.toggle(target, u, +1);
    res.flips.push_back(EdgeFlip{std::min(target, u), std::max(target, u), +1});
  }

  res.adjacency_checksum = checksum_adjacency(working.entries());
  return res;
}

AttackResult fga_attack(const GcnModel& model, const Graph& g, VertexId target,
                        int budget, ScopeSpec scope) {
  if (target >= g.n_vertices()) throw std::invalid_argument("fga: target out of range");
  if (budget < 1) throw std::invalid_argument("fga: budget must be >= 1");

  AttackResult res = make_result("fga", target, scope, budget);
  std::vector<VertexId> limited;
  if (scope.kind == ScopeKind::limited) {
    limited = k_order_neighborhood(g, target, scope.order);
  }

  AdjacencyMatrix working = AdjacencyMatrix::from_graph(g);
  AdjacencyGradientContext ctx(model, g.features(), working);
  res.pre_label = ctx.predicted_class(target);
  const int anchor = g.labels()[target] != kUnknownLabel
                         ? g.labels()[target]
                         : res.pre_label;
  int current = res.pre_label;

  const std::size_t n_classes = model.n_classes();
  AttackPlan scope_plan;  // reuse the scope filtering of feasible_candidates
  scope_plan.target = target;
  scope_plan.scope = scope;

  for (;;) {
    if (current != res.pre_label) {
      res.success = true;
      break;
    }
    if (res.n_modified() >= budget) {
      res.failure_reason = "budget_exhausted";
      break;
    }

    // d loss / d logits at the target row is softmax(logits) - onehot(anchor);
    // the adjacency gradient is the matching weighted logit gradient.
    std::vector<double> coeffs(n_classes, 0.0);
    double row_max = ctx.logits()(target, 0);
    for (std::size_t k = 1; k < n_classes; ++k) {
      row_max = std::max(row_max, ctx.logits()(target, k));
    }
    double denom = 0.0;
    for (std::size_t k = 0; k < n_classes; ++k) {
      coeffs[k] = std::exp(ctx.logits()(target, k) - row_max);
      denom += coeffs[k];
    }
    for (std::size_t k = 0; k < n_classes; ++k) coeffs[k] /= denom;
    coeffs[static_cast<std::size_t>(anchor)] -= 1.0;

    const Matrix grad =
        symmetrize_zero_diag(ctx.weighted_logit_grad(target, coeffs));
    if (!all_finite(grad)) {
      res.failure_reason = "degenerate_boundary";
      break;
    }
    const auto candidates = feasible_candidates(working, grad, scope_plan, limited);
    if (candidates.empty()) {
      res.failure_reason = "no_feasible_move";
      break;
    }
    const FlipCandidate& top = candidates.front();
    const int delta = top.value > 0.0 ? 1 : -1;
    working.toggle(top.i, top.j, delta);
    res.flips.push_back(EdgeFlip{top.i, top.j, delta});

    ctx = AdjacencyGradientContext(model, g.features(), working);
    current = ctx.predicted_class(target);
    res.iteration_labels.push_back(current);
  }

  res.post_label = current;
  res.adjacency_checksum = checksum_adjacency(working.entries());
  return res;
}

AttackResult random_attack(const Graph& g, VertexId target, int budget,
                           ScopeSpec scope, std::uint64_t seed) {
  if (target >= g.n_vertices()) throw std::invalid_argument("random: target out of range");
  if (budget < 1) throw std::invalid_argument("random: budget must be >= 1");

  AttackResult res = make_result("random", target, scope, budget);
  auto pairs = in_scope_pairs(g, target, scope);
  if (pairs.empty()) {
    throw std::runtime_error("random_attack: no feasible flips in scope");
  }

  Rng rng(seed);
  AdjacencyMatrix working = AdjacencyMatrix::from_graph(g);
  for (const auto& [i, j] : rng.sample(std::move(pairs), static_cast<std::size_t>(budget))) {
    const int delta = working.has_edge(i, j) ? -1 : +1;
    working.toggle(i, j, delta);
    res.flips.push_back(EdgeFlip{i, j, delta});
  }
  res.adjacency_checksum = checksum_adjacency(working.entries());
  return res;
}

}  // namespace graphfool
