#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "graphfool/gcn.hpp"
#include "graphfool/graph.hpp"

namespace graphfool {

enum class AttackMode { untargeted, targeted };

enum class ScopeKind { unlimited, direct, indirect, limited };

/// Which vertex pairs an attack may flip, relative to the target vertex:
/// unlimited = any pair, direct = pairs incident to the target, indirect =
/// pairs not incident to the target, limited = both endpoints within the
/// target's k-order neighborhood (computed on the original graph).
struct ScopeSpec {
  ScopeKind kind = ScopeKind::unlimited;
  int order = 1;  // used by limited only
};

struct AttackPlan {
  VertexId target = 0;
  AttackMode mode = AttackMode::untargeted;
  std::optional<int> target_label;  // required for targeted mode
  ScopeSpec scope;
  int budget = 1;  // max edge flips, >= 1
};

struct EdgeFlip {
  VertexId u = 0;
  VertexId v = 0;
  int delta = 0;  // +1 add, -1 delete

  bool operator==(const EdgeFlip&) const = default;
};

/// Raw perturbation direction and its symmetrized form.
struct PerturbationMatrix {
  Matrix raw;
  Matrix symmetrized;
};

/// (R + R^T)/2 off the diagonal, zero on it.
Matrix symmetrize_zero_diag(const Matrix& r);

/// Linearized distance from the current prediction k_hat to the boundary of
/// class k at vertex v: with w = grad logit_k - grad logit_khat and
/// df = logit_k - logit_khat,
///   score     = |df| / ||w||_2
///   direction = (|df| / ||w||_2^2) w
/// Returns nullopt when ||w||_2 < 1e-12 (degenerate boundary; callers skip
/// the class).
struct BoundaryLinearization {
  double score = 0.0;
  Matrix direction;
};
std::optional<BoundaryLinearization> linearized_boundary_distance(
    const AdjacencyGradientContext& ctx, VertexId v, int k, int k_hat);
std::optional<BoundaryLinearization> linearized_boundary_distance(
    const GcnModel& model, const Matrix& x, const AdjacencyMatrix& adjacency,
    VertexId v, int k, int k_hat);

/// Untargeted step: scans every class other than the current prediction,
/// keeps the boundary with the smallest score (ties to the lowest class id)
/// and returns its perturbation. nullopt when every boundary is degenerate.
struct UntargetedPerturbation {
  int boundary_class = 0;
  PerturbationMatrix perturbation;
};
std::optional<UntargetedPerturbation> minimal_perturbation_untargeted(
    const AdjacencyGradientContext& ctx, VertexId v);

/// Targeted step: perturbation toward the boundary between the requested
/// label and the current prediction.
std::optional<PerturbationMatrix> minimal_perturbation_targeted(
    const AdjacencyGradientContext& ctx, VertexId v, int target_label);

struct FlipCandidate {
  VertexId i = 0;
  VertexId j = 0;
  double value = 0.0;  // symmetrized perturbation entry; its sign is the flip
};

/// Pairs (i < j) ordered by |r_hat_ij| descending (ties lexicographic),
/// dropping pairs that cannot move in the indicated direction (adding an
/// existing edge, deleting an absent one), entries below 1e-12, and pairs
/// outside the plan's scope. For limited scope the caller supplies the
/// sorted neighborhood vertex set.
std::vector<FlipCandidate> feasible_candidates(
    const AdjacencyMatrix& adjacency, const Matrix& r_hat, const AttackPlan& plan,
    const std::vector<VertexId>& limited_vertices = {});

/// A_ij += delta on a copy, both triangles. Throws on infeasible flips.
AdjacencyMatrix apply_flip(const AdjacencyMatrix& adjacency, VertexId i,
                           VertexId j, int delta);

struct AttackResult {
  std::string method;
  VertexId target = 0;
  AttackMode mode = AttackMode::untargeted;
  std::optional<int> target_label;
  ScopeSpec scope;
  int budget = 0;
  std::vector<EdgeFlip> flips;
  std::vector<int> iteration_labels;   // target's predicted label after each flip
  std::vector<int> boundary_classes;   // chosen boundary class per iteration
  bool success = false;
  int pre_label = -1;
  int post_label = -1;
  std::string failure_reason;  // empty on success; otherwise budget_exhausted,
                               // no_feasible_move or degenerate_boundary
  std::uint64_t adjacency_checksum = 0;  // of the final adjacency

  int n_modified() const { return static_cast<int>(flips.size()); }
};

/// FNV-1a over the sorted upper-triangle edge list of a binary adjacency.
std::uint64_t checksum_adjacency(const Matrix& adjacency);

/// Replays a flip sequence onto the graph's adjacency, validating each flip
/// is feasible at its turn. Throws on an infeasible replay.
Matrix replay_flips(const Graph& g, const std::vector<EdgeFlip>& flips);

/// Default flip budget: min(20, ceil(2 * average degree)), at least 1.
int default_budget(const Graph& g);

/// One boundary-linearization attack: per iteration, compute the minimal
/// perturbation at the current adversarial adjacency, flip the top feasible
/// candidate, re-predict, and stop on success, exhausted budget or no
/// feasible move. Degenerate boundaries and empty candidate lists come back
/// as unsuccessful results, not errors.
AttackResult run_attack(const GcnModel& model, const Graph& g,
                        const AttackPlan& plan);

}  // namespace graphfool
