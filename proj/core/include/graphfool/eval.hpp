#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "graphfool/attack.hpp"
#include "graphfool/graph.hpp"

namespace graphfool {

/// Stochastic block model: n_blocks blocks of n_per_block vertices, edge
/// probability p_in within a block and p_out across. Identity features,
/// block-id labels, every vertex in the train mask. Requires
/// 0 <= p_out < p_in <= 1.
Graph generate_sbm(std::size_t n_per_block, std::size_t n_blocks, double p_in,
                   double p_out, std::uint64_t seed);

/// Seeded uniform sample of per_class vertices per true label, unlabeled
/// vertices excluded. Classes with fewer members contribute all of them (a
/// warning goes to stderr). Returned sorted.
std::vector<VertexId> sample_victims(const Graph& g, std::size_t per_class,
                                     std::uint64_t seed);

/// Mean over the attacked set of 100 * |k-order neighborhood| / N.
double neighbor_order_ratio(const Graph& g, const std::vector<VertexId>& attacked,
                            int k);

/// One attacked vertex scored against one victim.
struct VertexOutcome {
  VertexId vertex = 0;
  bool excluded = false;  // victim was already wrong (untargeted) or already
                          // predicted the target label (targeted)
  bool success = false;
  int n_modified = 0;
};

/// 100 * successes / non-excluded. Throws when nothing remains to score.
double asr(const std::vector<VertexOutcome>& outcomes);

/// Mean modified-edge count over non-excluded outcomes; failures contribute
/// the budget they spent. successes_only restricts to successful attacks.
double ame(const std::vector<VertexOutcome>& outcomes, bool successes_only = false);

struct PlanTemplate {
  AttackMode mode = AttackMode::untargeted;
  /// Targeted runs attack this label; nullopt means every label other than
  /// the victim's clean prediction, one attack per (vertex, label).
  std::optional<int> target_label;
  int budget = 0;  // 0 selects default_budget(graph)
};

struct ExperimentSpec {
  std::string dataset_id = "dataset";
  std::vector<std::string> methods = {"graphfool"};  // graphfool|fga|dice|random
  std::vector<ScopeSpec> scopes = {ScopeSpec{}};
  PlanTemplate plan;
  std::vector<std::string> victims = {"gcn"};  // gcn|retrained-gcn|prop-linear
  std::size_t per_class = 20;
  std::vector<std::uint64_t> seeds = {1};
  TrainConfig train;
  double dice_b_fraction = 0.5;
  bool ame_successes_only = false;
  std::string output_path;  // echoed in the report; empty when not file-bound
};

struct SeedStats {
  std::uint64_t seed = 0;
  double asr = 0.0;
  double ame = 0.0;
  std::size_t n_scored = 0;
  std::size_t n_excluded = 0;
};

struct ReportCell {
  std::string method;
  AttackMode mode = AttackMode::untargeted;
  ScopeSpec scope;
  std::string victim;
  double asr_mean = 0.0;
  double asr_stddev = 0.0;
  double ame_mean = 0.0;
  double ame_stddev = 0.0;
  std::vector<SeedStats> per_seed;
  std::vector<std::string> errors;
};

struct PerVertexRecord {
  std::uint64_t seed = 0;
  std::string method;
  ScopeSpec scope;
  std::string victim;
  VertexId vertex = 0;
  std::optional<int> target_label;
  bool excluded = false;
  bool success = false;
  int n_modified = 0;
  int victim_pre = -1;
  int victim_post = -1;
};

struct NeighborRatio {
  int order = 0;
  double ratio_percent = 0.0;  // seed-averaged over the attacked sets
};

struct MetricsReport {
  ExperimentSpec spec;
  std::vector<ReportCell> cells;
  std::vector<PerVertexRecord> per_vertex;
  std::vector<NeighborRatio> neighbor_ratios;
};

/// Full protocol: per seed, train the attacker GCN, sample the victim set,
/// attack every (method, scope, vertex[, label]) cell and score each victim,
/// then aggregate ASR/AME as mean +/- sample stddev over seeds. Per-cell
/// failures are recorded in the cell and do not abort the experiment.
/// Attacks and victim evaluations for different vertices run on a thread
/// pool sized by default_thread_count(); results are deterministic for a
/// fixed spec.
MetricsReport run_experiment(const Graph& g, const ExperimentSpec& spec);

/// GRAPHFOOL_THREADS when set, else hardware concurrency, at least 1.
std::size_t default_thread_count();

}  // namespace graphfool
