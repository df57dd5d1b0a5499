// Acceptance suite: nine end-to-end checks over the trained-GCN attack
// pipeline, each printed as one PASS/FAIL line. Run with no arguments for
// all criteria or with a criterion number (1-9) for a single one. Exit code
// is the number of failures.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "graphfool/attack.hpp"
#include "graphfool/baselines.hpp"
#include "graphfool/eval.hpp"
#include "graphfool/gcn.hpp"
#include "graphfool/results_io.hpp"
#include "graphfool/rng.hpp"
#include "graphfool/victims.hpp"

using namespace graphfool;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

double mean_of(const std::vector<double>& xs) {
  double m = 0.0;
  for (double x : xs) m += x;
  return xs.empty() ? 0.0 : m / static_cast<double>(xs.size());
}

std::string fmt(double x, int prec = 2) {
  std::ostringstream ss;
  ss.setf(std::ios::fixed);
  ss.precision(prec);
  ss << x;
  return ss.str();
}

double cell_asr(const MetricsReport& report, const std::string& method,
                ScopeKind kind, int order, const std::string& victim) {
  for (const auto& c : report.cells) {
    if (c.method == method && c.victim == victim && c.scope.kind == kind &&
        (kind != ScopeKind::limited || c.scope.order == order)) {
      return c.asr_mean;
    }
  }
  throw std::runtime_error("missing report cell for " + method);
}

double cell_ame(const MetricsReport& report, const std::string& method,
                ScopeKind kind, int order, const std::string& victim) {
  for (const auto& c : report.cells) {
    if (c.method == method && c.victim == victim && c.scope.kind == kind &&
        (kind != ScopeKind::limited || c.scope.order == order)) {
      return c.ame_mean;
    }
  }
  throw std::runtime_error("missing report cell for " + method);
}

// ---------------------------------------------------------------------------
// 1. Gradient correctness: analytic adjacency gradients vs central finite
//    differences (eps 1e-5), max relative error < 1e-4 over entries with
//    |grad| > 1e-8, on a seeded 12-vertex random fixture with random weights.
Outcome criterion_gradient_correctness() {
  const Graph base = generate_sbm(12, 1, 0.35, 0.0, 20240);
  Matrix features(12, 5);
  {
    Rng rng(7);
    for (double& x : features.data()) x = rng.next_symmetric(1.0);
  }
  const Graph g(12, std::vector<Edge>(base.edges()), features, {}, {});
  const GcnModel model = init_model(5, 4, 3, 11);
  const AdjacencyMatrix adj = AdjacencyMatrix::from_graph(g);

  // Keep every hidden pre-activation clear of the relu kink so the central
  // difference never straddles it.
  const auto pass = forward(model, normalize(adj), features);
  double min_pre = 1e18;
  for (double h : pass.hidden_pre.data()) min_pre = std::min(min_pre, std::abs(h));
  if (min_pre < 1e-3) {
    return {false, "fixture invalid: relu margin " + fmt(min_pre, 6)};
  }

  double worst = 0.0;
  std::size_t compared = 0;
  for (VertexId v = 0; v < 12; ++v) {
    for (int k = 0; k < 3; ++k) {
      const Matrix analytic = logit_grad_wrt_A(model, g, adj, v, k);
      const Matrix fd = finite_diff_grad(
          [&](const Matrix& a) {
            const auto probe =
                forward(model, NormalizedAdjacency{normalize_dense(a)}, features);
            return probe.logits(v, static_cast<std::size_t>(k));
          },
          adj.entries(), 1e-5);
      for (std::size_t i = 0; i < analytic.size(); ++i) {
        const double ga = analytic.data()[i], gf = fd.data()[i];
        const double mag = std::max(std::abs(ga), std::abs(gf));
        if (mag < 1e-8) continue;
        ++compared;
        worst = std::max(worst, std::abs(ga - gf) / mag);
      }
    }
  }
  return {worst < 1e-4, "max rel err " + fmt(worst, 8) + " over " +
                            std::to_string(compared) + " entries (bound 1e-4)"};
}

// ---------------------------------------------------------------------------
// 2. Training sanity: two-clique fixture reaches train and full accuracy 1.0
//    within 200 epochs at lr 0.01 for at least 4 of 5 seeds.
Outcome criterion_training_sanity() {
  Graph g = [] {
    std::vector<Edge> edges;
    for (std::size_t b = 0; b < 2; ++b)
      for (std::size_t i = 0; i < 5; ++i)
        for (std::size_t j = i + 1; j < 5; ++j)
          edges.emplace_back(b * 5 + i, b * 5 + j);
    std::vector<int> labels(10);
    std::vector<bool> mask(10, false);
    for (std::size_t v = 0; v < 10; ++v) labels[v] = v < 5 ? 0 : 1;
    mask[0] = mask[1] = mask[5] = mask[6] = true;
    return Graph(10, std::move(edges), {}, std::move(labels), std::move(mask));
  }();

  int passed = 0;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    TrainConfig config;
    config.learning_rate = 0.01;
    config.epochs = 200;
    config.seed = seed;
    const auto out = train(g, config);
    const auto preds = predict(out.model, g, AdjacencyMatrix::from_graph(g));
    bool ok = true;
    for (VertexId v = 0; v < 10; ++v) ok = ok && preds[v] == g.labels()[v];
    passed += ok ? 1 : 0;
  }
  return {passed >= 4,
          std::to_string(passed) + "/5 seeds reached accuracy 1.0 (need >= 4)"};
}

// ---------------------------------------------------------------------------
// 3. Single-edge oracle: the single direct flip chosen by the linearized
//    attack ranks in the top 20% of all feasible single flips by true margin
//    reduction for >= 80% of correctly classified targets. Individual
//    instances of this fixture fluctuate (56%..100%), so the rate pools all
//    targets across generator seeds 1..10 of the pinned shape.
Outcome criterion_single_edge_oracle() {
  std::size_t checked = 0, well_ranked = 0;
  for (std::uint64_t fixture_seed = 1; fixture_seed <= 10; ++fixture_seed) {
    const Graph g = generate_sbm(8, 2, 0.6, 0.05, fixture_seed);
    TrainConfig config;
    config.seed = fixture_seed;
    const GcnModel model = train(g, config).model;
    const AdjacencyMatrix adj = AdjacencyMatrix::from_graph(g);
    const auto clean_pred = predict(model, g, adj);
    const std::size_t n = g.n_vertices();

    const auto margin = [&](const Matrix& a, VertexId v, int k_hat) {
      const auto pass = forward(model, NormalizedAdjacency{normalize_dense(a)},
                                g.features());
      double best_other = -1e300;
      for (std::size_t k = 0; k < pass.logits.cols(); ++k) {
        if (static_cast<int>(k) != k_hat) {
          best_other = std::max(best_other, pass.logits(v, k));
        }
      }
      return pass.logits(v, static_cast<std::size_t>(k_hat)) - best_other;
    };

    for (VertexId v = 0; v < n; ++v) {
      if (clean_pred[v] != g.labels()[v]) continue;

      AttackPlan plan;
      plan.target = v;
      plan.scope = ScopeSpec{ScopeKind::direct, 1};
      plan.budget = 1;
      const AttackResult res = run_attack(model, g, plan);
      if (res.flips.empty()) {
        ++checked;  // no move counts against the attacker
        continue;
      }

      const double base = margin(adj.entries(), v, clean_pred[v]);
      std::vector<double> drops;
      double chosen_drop = -1e300;
      for (VertexId u = 0; u < n; ++u) {
        if (u == v) continue;
        Matrix flipped = adj.entries();
        const double newval = flipped(u, v) == 0.0 ? 1.0 : 0.0;
        flipped(u, v) = flipped(v, u) = newval;
        const double drop = base - margin(flipped, v, clean_pred[v]);
        drops.push_back(drop);
        if (res.flips.front().u == std::min(u, v) &&
            res.flips.front().v == std::max(u, v)) {
          chosen_drop = drop;
        }
      }
      std::sort(drops.rbegin(), drops.rend());
      const std::size_t top = (drops.size() + 4) / 5;  // ceil(20%)
      ++checked;
      if (chosen_drop >= drops[top - 1]) ++well_ranked;
    }
  }
  const double rate = 100.0 * double(well_ranked) / double(checked);
  return {rate >= 80.0, fmt(rate, 1) + "% of " + std::to_string(checked) +
                            " pooled targets in the top 20% of the true-margin "
                            "enumeration (need >= 80%)"};
}

ExperimentSpec untargeted_sbm_spec() {
  ExperimentSpec spec;
  spec.dataset_id = "sbm-2x20";
  spec.methods = {"graphfool"};
  spec.scopes = {ScopeSpec{ScopeKind::direct, 1}};
  spec.victims = {"gcn"};
  spec.per_class = 20;
  spec.seeds = {1, 2, 3, 4, 5};
  spec.plan.budget = 0;  // min(20, ceil(2 * avg degree))
  return spec;
}

// ---------------------------------------------------------------------------
// 4. Untargeted strength: white-box ASR >= 85% mean over 5 seeds, direct
//    scope, default budget, on the 2x20 block-model fixture.
Outcome criterion_untargeted_strength() {
  const Graph g = generate_sbm(20, 2, 0.5, 0.05, 100);
  const MetricsReport report = run_experiment(g, untargeted_sbm_spec());
  const double asr_mean = cell_asr(report, "graphfool", ScopeKind::direct, 1, "gcn");
  const double ame_mean = cell_ame(report, "graphfool", ScopeKind::direct, 1, "gcn");
  return {asr_mean >= 85.0, "white-box ASR " + fmt(asr_mean, 1) + "% (need >= 85%), AME " +
                                fmt(ame_mean, 2) + ", budget " +
                                std::to_string(default_budget(g))};
}

// ---------------------------------------------------------------------------
// 5. Baseline ordering: graphfool >= fga >= dice >= random in mean white-box
//    ASR, and graphfool beats dice by at least 15 points.
Outcome criterion_baseline_ordering() {
  const Graph g = generate_sbm(20, 2, 0.5, 0.05, 100);
  ExperimentSpec spec = untargeted_sbm_spec();
  spec.methods = {"graphfool", "fga", "dice", "random"};
  const MetricsReport report = run_experiment(g, spec);

  const double gf = cell_asr(report, "graphfool", ScopeKind::direct, 1, "gcn");
  const double fga = cell_asr(report, "fga", ScopeKind::direct, 1, "gcn");
  const double dice = cell_asr(report, "dice", ScopeKind::direct, 1, "gcn");
  const double rnd = cell_asr(report, "random", ScopeKind::direct, 1, "gcn");

  const bool ordered = gf >= fga && fga >= dice && dice >= rnd;
  const bool gap = gf - dice >= 15.0;
  return {ordered && gap,
          "ASR graphfool " + fmt(gf, 1) + " >= fga " + fmt(fga, 1) + " >= dice " +
              fmt(dice, 1) + " >= random " + fmt(rnd, 1) +
              (ordered ? " (ordered)" : " (ORDER VIOLATED)") + ", graphfool-dice gap " +
              fmt(gf - dice, 1) + " (need >= 15)"};
}

// ---------------------------------------------------------------------------
// 6. Targeted attack on a 3-block fixture: mean white-box ASR >= 60% over
//    every wrong label, and targeted AME >= untargeted AME.
Outcome criterion_targeted_attack() {
  const Graph g = generate_sbm(15, 3, 0.5, 0.03, 300);
  ExperimentSpec spec;
  spec.dataset_id = "sbm-3x15";
  spec.methods = {"graphfool"};
  spec.scopes = {ScopeSpec{ScopeKind::unlimited, 1}};
  spec.victims = {"gcn"};
  spec.per_class = 15;
  spec.seeds = {1, 2, 3};
  spec.plan.budget = 0;

  ExperimentSpec targeted = spec;
  targeted.plan.mode = AttackMode::targeted;  // no fixed label: every wrong label
  const MetricsReport targeted_report = run_experiment(g, targeted);
  const double t_asr = cell_asr(targeted_report, "graphfool", ScopeKind::unlimited, 1, "gcn");
  const double t_ame = cell_ame(targeted_report, "graphfool", ScopeKind::unlimited, 1, "gcn");

  const MetricsReport untargeted_report = run_experiment(g, spec);
  const double u_ame = cell_ame(untargeted_report, "graphfool", ScopeKind::unlimited, 1, "gcn");

  const bool pass = t_asr >= 60.0 && t_ame >= u_ame;
  return {pass, "targeted ASR " + fmt(t_asr, 1) + "% (need >= 60%), targeted AME " +
                    fmt(t_ame, 2) + " vs untargeted AME " + fmt(u_ame, 2) +
                    " (need targeted >= untargeted)"};
}

// ---------------------------------------------------------------------------
// 7. Disturbance-limited trend: over k = 1..4, seed-averaged ASR
//    non-decreasing and AME non-increasing, allowing one adjacent-pair
//    violation of at most 2 ASR points / 0.5 AME.
Outcome criterion_limited_trend() {
  const Graph g = generate_sbm(20, 2, 0.5, 0.05, 100);
  ExperimentSpec spec = untargeted_sbm_spec();
  spec.scopes = {ScopeSpec{ScopeKind::limited, 1}, ScopeSpec{ScopeKind::limited, 2},
                 ScopeSpec{ScopeKind::limited, 3}, ScopeSpec{ScopeKind::limited, 4}};
  const MetricsReport report = run_experiment(g, spec);

  std::vector<double> asrs, ames;
  for (int k = 1; k <= 4; ++k) {
    asrs.push_back(cell_asr(report, "graphfool", ScopeKind::limited, k, "gcn"));
    ames.push_back(cell_ame(report, "graphfool", ScopeKind::limited, k, "gcn"));
  }

  int asr_violations = 0, ame_violations = 0;
  bool asr_within_slack = true, ame_within_slack = true;
  for (int i = 0; i + 1 < 4; ++i) {
    if (asrs[i + 1] < asrs[i]) {
      ++asr_violations;
      asr_within_slack = asr_within_slack && (asrs[i] - asrs[i + 1] <= 2.0);
    }
    if (ames[i + 1] > ames[i]) {
      ++ame_violations;
      ame_within_slack = ame_within_slack && (ames[i + 1] - ames[i] <= 0.5);
    }
  }
  const bool pass = asr_violations <= 1 && asr_within_slack && ame_violations <= 1 &&
                    ame_within_slack;
  std::string detail = "ASR by order:";
  for (double a : asrs) detail += " " + fmt(a, 1);
  detail += "; AME by order:";
  for (double a : ames) detail += " " + fmt(a, 2);
  detail += "; violations ASR=" + std::to_string(asr_violations) +
            " AME=" + std::to_string(ame_violations) + " (allow <= 1 each within slack)";
  return {pass, detail};
}

// ---------------------------------------------------------------------------
// 8. Transferability: adversarial graphs transferred to the
//    propagation-linear victim beat random flips by >= 10 ASR points.
Outcome criterion_transferability() {
  const Graph g = generate_sbm(20, 2, 0.5, 0.05, 100);
  ExperimentSpec spec = untargeted_sbm_spec();
  spec.methods = {"graphfool", "random"};
  spec.victims = {"prop-linear"};
  const MetricsReport report = run_experiment(g, spec);
  const double gf = cell_asr(report, "graphfool", ScopeKind::direct, 1, "prop-linear");
  const double rnd = cell_asr(report, "random", ScopeKind::direct, 1, "prop-linear");
  return {gf - rnd >= 10.0, "transfer ASR graphfool " + fmt(gf, 1) + "% vs random " +
                                fmt(rnd, 1) + "%, gap " + fmt(gf - rnd, 1) +
                                " (need >= 10)"};
}

// ---------------------------------------------------------------------------
// 9. Invariant suite over 100 randomized instances: replay integrity,
//    perturbation symmetry, scope soundness, budget bounds, determinism,
//    and metric recomputation.
Outcome criterion_invariant_suite() {
  std::size_t instances = 0;
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    Rng rng(seed * 977);
    const std::size_t blocks = 2 + rng.next_index(2);       // 2..3
    const std::size_t per_block = 5 + rng.next_index(4);    // 5..8
    const double p_in = 0.5 + 0.3 * rng.next_double();
    const double p_out = 0.02 + 0.08 * rng.next_double();
    const Graph g = generate_sbm(per_block, blocks, p_in, p_out, seed);

    TrainConfig config;
    config.seed = seed;
    config.epochs = 40;
    config.hidden_dim = 8;
    const GcnModel model = train(g, config).model;

    AttackPlan plan;
    plan.target = rng.next_index(g.n_vertices());
    const int scope_pick = static_cast<int>(rng.next_index(4));
    plan.scope.kind = static_cast<ScopeKind>(scope_pick);
    plan.scope.order = 1 + static_cast<int>(rng.next_index(3));
    plan.budget = 1 + static_cast<int>(rng.next_index(10));

    const AttackResult res = run_attack(model, g, plan);
    const AttackResult rerun = run_attack(model, g, plan);

    // determinism
    if (!(res.flips == rerun.flips && res.success == rerun.success &&
          res.adjacency_checksum == rerun.adjacency_checksum)) {
      return {false, "determinism violated at seed " + std::to_string(seed)};
    }
    // budget bound, one edge per iteration
    if (res.n_modified() > plan.budget ||
        res.iteration_labels.size() != res.flips.size()) {
      return {false, "budget/iteration bookkeeping violated at seed " +
                         std::to_string(seed)};
    }
    // replay integrity
    const Matrix replayed = replay_flips(g, res.flips);
    if (checksum_adjacency(replayed) != res.adjacency_checksum) {
      return {false, "replay checksum mismatch at seed " + std::to_string(seed)};
    }
    // success semantics
    if (res.success && res.post_label == res.pre_label) {
      return {false, "success without label change at seed " + std::to_string(seed)};
    }
    // scope soundness
    std::vector<VertexId> hood;
    if (plan.scope.kind == ScopeKind::limited) {
      hood = k_order_neighborhood(g, plan.target, plan.scope.order);
    }
    for (const auto& f : res.flips) {
      bool ok = true;
      switch (plan.scope.kind) {
        case ScopeKind::unlimited: break;
        case ScopeKind::direct: ok = f.u == plan.target || f.v == plan.target; break;
        case ScopeKind::indirect: ok = f.u != plan.target && f.v != plan.target; break;
        case ScopeKind::limited:
          ok = std::binary_search(hood.begin(), hood.end(), f.u) &&
               std::binary_search(hood.begin(), hood.end(), f.v);
          break;
      }
      if (!ok) return {false, "scope violated at seed " + std::to_string(seed)};
    }
    // perturbation symmetry at the clean graph
    const AdjacencyGradientContext ctx(model, g.features(),
                                       AdjacencyMatrix::from_graph(g));
    const auto step = minimal_perturbation_untargeted(ctx, plan.target);
    if (step) {
      const Matrix& r_hat = step->perturbation.symmetrized;
      if (!all_finite(r_hat)) {
        return {false, "non-finite perturbation at seed " + std::to_string(seed)};
      }
      for (std::size_t i = 0; i < r_hat.rows(); ++i) {
        if (r_hat(i, i) != 0.0) {
          return {false, "perturbation diagonal at seed " + std::to_string(seed)};
        }
        for (std::size_t j = 0; j < r_hat.cols(); ++j) {
          if (r_hat(i, j) != r_hat(j, i)) {
            return {false, "perturbation asymmetry at seed " + std::to_string(seed)};
          }
        }
      }
    }
    // serialization round trip
    const AttackResult back =
        attack_result_from_json_line(attack_result_to_json_line(res));
    if (!(back.flips == res.flips && back.success == res.success &&
          back.adjacency_checksum == res.adjacency_checksum)) {
      return {false, "serialization round trip failed at seed " + std::to_string(seed)};
    }
    ++instances;
  }

  // ASR/AME recomputation on an aggregated run.
  const Graph g = generate_sbm(8, 2, 0.6, 0.05, 40);
  ExperimentSpec spec;
  spec.methods = {"graphfool", "dice"};
  spec.scopes = {ScopeSpec{ScopeKind::direct, 1}};
  spec.victims = {"gcn"};
  spec.per_class = 6;
  spec.seeds = {1, 2};
  spec.train.epochs = 80;
  const MetricsReport report = run_experiment(g, spec);
  for (const auto& cell : report.cells) {
    for (const auto& stats : cell.per_seed) {
      std::size_t scored = 0, succ = 0;
      double edges = 0.0;
      for (const auto& rec : report.per_vertex) {
        if (rec.seed != stats.seed || rec.method != cell.method ||
            rec.victim != cell.victim || rec.excluded) {
          continue;
        }
        ++scored;
        succ += rec.success ? 1 : 0;
        edges += rec.n_modified;
      }
      const double asr_re = 100.0 * double(succ) / double(scored);
      const double ame_re = edges / double(scored);
      if (std::abs(asr_re - stats.asr) > 1e-9 || std::abs(ame_re - stats.ame) > 1e-9) {
        return {false, "metric recomputation mismatch"};
      }
    }
  }

  return {true, std::to_string(instances) + " randomized instances + metric "
                                            "recomputation clean"};
}

struct Criterion {
  int id;
  const char* name;
  std::function<Outcome()> run;
};

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> criteria{
      {1, "gradient correctness", criterion_gradient_correctness},
      {2, "training sanity", criterion_training_sanity},
      {3, "single-edge oracle", criterion_single_edge_oracle},
      {4, "untargeted attack strength", criterion_untargeted_strength},
      {5, "baseline ordering", criterion_baseline_ordering},
      {6, "targeted attack", criterion_targeted_attack},
      {7, "disturbance-limited trend", criterion_limited_trend},
      {8, "transferability", criterion_transferability},
      {9, "invariant suite", criterion_invariant_suite},
  };

  int only = 0;
  if (argc > 1) only = std::atoi(argv[1]);
  if (argc > 1 && (only < 1 || only > 9)) {
    std::cerr << "usage: " << argv[0] << " [criterion 1-9]\n";
    return 2;
  }

  int failures = 0;
  for (const auto& criterion : criteria) {
    if (only != 0 && criterion.id != only) continue;
    const auto start = std::chrono::steady_clock::now();
    Outcome outcome;
    try {
      outcome = criterion.run();
    } catch (const std::exception& e) {
      outcome = {false, std::string("exception: ") + e.what()};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::cout << (outcome.pass ? "[PASS]" : "[FAIL]") << " criterion " << criterion.id
              << " (" << criterion.name << "): " << outcome.detail << " ["
              << fmt(secs, 1) << "s]" << std::endl;
    failures += outcome.pass ? 0 : 1;
  }
  return failures;
}
