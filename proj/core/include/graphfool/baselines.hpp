#pragma once

#include <cstdint>
#include <vector>

#include "graphfool/attack.hpp"

namespace graphfool {

/// DICE: delete random incident edges, then connect the target to random
/// vertices of a different class. b = round(b_fraction * budget) deletions,
/// clamped to the target's degree; the unspent deletion budget moves to
/// additions. `labels` must be complete (substitute model predictions for
/// unknown labels before calling). Throws when no differently-labeled
/// vertex exists.
AttackResult dice_attack(const Graph& g, const std::vector<int>& labels,
                         VertexId target, int budget, double b_fraction,
                         std::uint64_t seed);

/// Gradient attack: per iteration, flip the feasible pair with the largest
/// absolute entry of the symmetrized gradient of the target's cross-entropy
/// loss w.r.t. the adjacency, in the direction that increases the loss.
/// Same skip rule, scope filters and early stop as run_attack. The loss
/// anchors to the target's known label, falling back to its clean
/// prediction.
AttackResult fga_attack(const GcnModel& model, const Graph& g, VertexId target,
                        int budget, ScopeSpec scope);

/// Uniform floor: `budget` distinct in-scope pairs toggled at random.
AttackResult random_attack(const Graph& g, VertexId target, int budget,
                           ScopeSpec scope, std::uint64_t seed);

}  // namespace graphfool
