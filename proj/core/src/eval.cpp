#include "graphfool/eval.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <map>
#include <stdexcept>
#include <thread>

#include "graphfool/baselines.hpp"
#include "graphfool/parallel.hpp"
#include "graphfool/rng.hpp"
#include "graphfool/victims.hpp"

namespace graphfool {

Graph generate_sbm(std::size_t n_per_block, std::size_t n_blocks, double p_in,
                   double p_out, std::uint64_t seed) {
  if (n_per_block < 1 || n_blocks < 1) {
    throw std::invalid_argument("sbm: empty block structure");
  }
  if (!(0.0 <= p_out && p_out < p_in && p_in <= 1.0)) {
    throw std::invalid_argument("sbm: need 0 <= p_out < p_in <= 1");
  }
  const std::size_t n = n_per_block * n_blocks;
  Rng rng(seed);
  std::vector<Edge> edges;
  std::vector<int> labels(n);
  for (std::size_t v = 0; v < n; ++v) labels[v] = static_cast<int>(v / n_per_block);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double p = labels[i] == labels[j] ? p_in : p_out;
      if (rng.bernoulli(p)) edges.emplace_back(i, j);
    }
  }
  std::vector<bool> mask(n, true);
  return Graph(n, std::move(edges), Matrix{}, std::move(labels), std::move(mask));
}

std::vector<VertexId> sample_victims(const Graph& g, std::size_t per_class,
                                     std::uint64_t seed) {
  if (per_class < 1) throw std::invalid_argument("sample_victims: per_class must be >= 1");
  std::map<int, std::vector<VertexId>> by_class;
  for (VertexId v = 0; v < g.n_vertices(); ++v) {
    if (g.labels()[v] != kUnknownLabel) by_class[g.labels()[v]].push_back(v);
  }
  if (by_class.empty()) throw std::invalid_argument("sample_victims: no labeled vertices");

  Rng rng(seed);
  std::vector<VertexId> out;
  for (auto& [label, members] : by_class) {
    if (members.size() < per_class) {
      std::cerr << "sample_victims: class " << label << " has only "
                << members.size() << " members (< " << per_class
                << "), taking all\n";
    }
    for (VertexId v : rng.sample(std::move(members), per_class)) out.push_back(v);
  }
  std::sort(out.begin(), out.end());
  return out;
}

double neighbor_order_ratio(const Graph& g, const std::vector<VertexId>& attacked,
                            int k) {
  if (attacked.empty()) throw std::invalid_argument("neighbor_order_ratio: empty set");
  double acc = 0.0;
  for (VertexId v : attacked) {
    acc += 100.0 * static_cast<double>(k_order_neighborhood(g, v, k).size()) /
           static_cast<double>(g.n_vertices());
  }
  return acc / static_cast<double>(attacked.size());
}

double asr(const std::vector<VertexOutcome>& outcomes) {
  if (outcomes.empty()) throw std::invalid_argument("asr: empty outcome list");
  std::size_t scored = 0, successes = 0;
  for (const auto& o : outcomes) {
    if (o.excluded) continue;
    ++scored;
    successes += o.success ? 1 : 0;
  }
  if (scored == 0) throw std::invalid_argument("asr: every outcome excluded");
  return 100.0 * static_cast<double>(successes) / static_cast<double>(scored);
}

double ame(const std::vector<VertexOutcome>& outcomes, bool successes_only) {
  if (outcomes.empty()) throw std::invalid_argument("ame: empty outcome list");
  double total = 0.0;
  std::size_t counted = 0;
  for (const auto& o : outcomes) {
    if (o.excluded) continue;
    if (successes_only && !o.success) continue;
    total += o.n_modified;
    ++counted;
  }
  if (counted == 0) throw std::invalid_argument("ame: nothing to average");
  return total / static_cast<double>(counted);
}

std::size_t default_thread_count() {
  if (const char* env = std::getenv("GRAPHFOOL_THREADS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v >= 1) return static_cast<std::size_t>(v);
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? hw : 1;
}

namespace {

std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b) {
  // splitmix64 step over the combined words
  std::uint64_t z = a + 0x9e3779b97f4a7c15ULL * (b + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// One attack job: a vertex (and for targeted mode, one candidate label).
struct Job {
  VertexId vertex = 0;
  std::optional<int> target_label;
};

struct JobResult {
  AttackResult attack;
  std::string error;
  bool valid = false;
};

}  // namespace

MetricsReport run_experiment(const Graph& g, const ExperimentSpec& spec) {
  if (spec.seeds.empty()) throw std::invalid_argument("run_experiment: no seeds");
  if (spec.methods.empty()) throw std::invalid_argument("run_experiment: no methods");
  for (const auto& m : spec.methods) {
    if (m != "graphfool" && m != "fga" && m != "dice" && m != "random") {
      throw std::invalid_argument("run_experiment: unknown method " + m);
    }
  }
  for (const auto& v : spec.victims) {
    if (v != "gcn" && v != "retrained-gcn" && v != "prop-linear") {
      throw std::invalid_argument("run_experiment: unknown victim " + v);
    }
  }

  MetricsReport report;
  report.spec = spec;
  const std::size_t n_threads = default_thread_count();
  const AdjacencyMatrix clean_adjacency = AdjacencyMatrix::from_graph(g);

  // cell key -> accumulating state
  struct CellAccum {
    ReportCell cell;
    std::vector<std::vector<VertexOutcome>> per_seed_outcomes;
  };
  std::vector<CellAccum> accums;
  auto cell_index = [&](const std::string& method, const ScopeSpec& scope,
                        const std::string& victim) -> CellAccum& {
    for (auto& a : accums) {
      if (a.cell.method == method && a.cell.victim == victim &&
          a.cell.scope.kind == scope.kind &&
          (scope.kind != ScopeKind::limited || a.cell.scope.order == scope.order)) {
        return a;
      }
    }
    CellAccum a;
    a.cell.method = method;
    a.cell.mode = spec.plan.mode;
    a.cell.scope = scope;
    a.cell.victim = victim;
    a.per_seed_outcomes.resize(spec.seeds.size());
    accums.push_back(std::move(a));
    return accums.back();
  };

  // Neighbor-order ratios for every limited scope, averaged over seeds.
  std::map<int, std::vector<double>> ratio_samples;

  for (std::size_t seed_idx = 0; seed_idx < spec.seeds.size(); ++seed_idx) {
    const std::uint64_t seed = spec.seeds[seed_idx];

    TrainConfig attacker_config = spec.train;
    attacker_config.seed = seed;
    const TrainOutput trained = train(g, attacker_config);
    const GcnModel& model = trained.model;

    const std::vector<int> clean_pred = predict(model, g, clean_adjacency);
    const auto victim_set = sample_victims(g, spec.per_class, mix_seed(seed, 0xA11CE));

    for (const auto& order_scope : spec.scopes) {
      if (order_scope.kind == ScopeKind::limited) {
        ratio_samples[order_scope.order].push_back(
            neighbor_order_ratio(g, victim_set, order_scope.order));
      }
    }

    // Labels for DICE: ground truth where known, model prediction otherwise.
    std::vector<int> dice_labels(g.n_vertices());
    for (VertexId v = 0; v < g.n_vertices(); ++v) {
      dice_labels[v] = g.labels()[v] != kUnknownLabel ? g.labels()[v] : clean_pred[v];
    }

    // Clean predictions per victim, shared across methods and scopes.
    std::map<std::string, std::vector<int>> victim_clean;
    TrainConfig victim_config = spec.train;
    victim_config.seed = mix_seed(seed, 0x5EED);
    for (const auto& victim : spec.victims) {
      if (victim == "gcn") {
        victim_clean[victim] = clean_pred;
      } else if (victim == "retrained-gcn") {
        victim_clean[victim] = retrained_gcn_victim(g, clean_adjacency, victim_config);
      } else {
        victim_clean[victim] = propagation_linear_victim(g, clean_adjacency);
      }
    }

    const int budget = spec.plan.budget > 0 ? spec.plan.budget : default_budget(g);
    const int n_classes = g.n_classes();

    for (std::size_t method_idx = 0; method_idx < spec.methods.size(); ++method_idx) {
      const std::string& method = spec.methods[method_idx];
      for (std::size_t scope_idx = 0; scope_idx < spec.scopes.size(); ++scope_idx) {
        const ScopeSpec scope = spec.scopes[scope_idx];

        // Expand jobs: one per vertex, or per (vertex, wrong label) when a
        // targeted sweep has no fixed label.
        std::vector<Job> jobs;
        std::string cell_error;
        if (spec.plan.mode == AttackMode::untargeted) {
          for (VertexId v : victim_set) jobs.push_back(Job{v, std::nullopt});
        } else if (method != "graphfool") {
          cell_error = "method " + method + " does not support targeted mode";
        } else {
          for (VertexId v : victim_set) {
            if (spec.plan.target_label) {
              if (*spec.plan.target_label != clean_pred[v]) {
                jobs.push_back(Job{v, spec.plan.target_label});
              }
            } else {
              for (int l = 0; l < n_classes; ++l) {
                if (l != clean_pred[v]) jobs.push_back(Job{v, l});
              }
            }
          }
        }

        std::vector<JobResult> results(jobs.size());
        parallel_for(jobs.size(), n_threads, [&](std::size_t idx) {
          const Job& job = jobs[idx];
          JobResult& slot = results[idx];
          const std::uint64_t job_seed =
              mix_seed(seed, mix_seed(method_idx * 1000 + scope_idx,
                                      job.vertex * 131 +
                                          static_cast<std::uint64_t>(
                                              job.target_label.value_or(-1) + 1)));
          try {
            if (method == "graphfool") {
              AttackPlan plan;
              plan.target = job.vertex;
              plan.mode = spec.plan.mode;
              plan.target_label = job.target_label;
              plan.scope = scope;
              plan.budget = budget;
              slot.attack = run_attack(model, g, plan);
            } else if (method == "fga") {
              slot.attack = fga_attack(model, g, job.vertex, budget, scope);
            } else if (method == "dice") {
              slot.attack = dice_attack(g, dice_labels, job.vertex, budget,
                                        spec.dice_b_fraction, job_seed);
            } else {
              slot.attack = random_attack(g, job.vertex, budget, scope, job_seed);
            }
            slot.valid = true;
          } catch (const std::exception& e) {
            slot.error = e.what();
          }
        });

        // Score each victim; retraining victims refit once per adversarial
        // graph, on the same thread pool.
        for (const auto& victim : spec.victims) {
          CellAccum& accum = cell_index(method, scope, victim);
          auto& outcomes = accum.per_seed_outcomes[seed_idx];
          if (!cell_error.empty()) {
            accum.cell.errors.push_back("seed " + std::to_string(seed) + ": " +
                                        cell_error);
            continue;
          }
          const std::vector<int>& pre = victim_clean[victim];

          std::vector<VertexOutcome> scored(jobs.size());
          std::vector<int> posts(jobs.size(), -1);
          std::vector<std::string> errors(jobs.size());
          parallel_for(jobs.size(), n_threads, [&](std::size_t idx) {
            if (!results[idx].valid) {
              errors[idx] = results[idx].error;
              return;
            }
            const AttackResult& attack = results[idx].attack;
            const VertexId v = attack.target;
            try {
              const AdjacencyMatrix adv{replay_flips(g, attack.flips)};
              int post;
              if (victim == "gcn") {
                post = predict(model, g, adv)[v];
              } else if (victim == "retrained-gcn") {
                post = retrained_gcn_victim(g, adv, victim_config)[v];
              } else {
                post = propagation_linear_victim(g, adv)[v];
              }
              posts[idx] = post;
              VertexOutcome o;
              o.vertex = v;
              o.n_modified = attack.n_modified();
              if (spec.plan.mode == AttackMode::untargeted) {
                const int truth = g.labels()[v];
                o.excluded = truth == kUnknownLabel || pre[v] != truth;
                o.success = !o.excluded && post != truth;
              } else {
                const int label = *jobs[idx].target_label;
                o.excluded = pre[v] == label;
                o.success = !o.excluded && post == label;
              }
              scored[idx] = o;
            } catch (const std::exception& e) {
              errors[idx] = e.what();
            }
          });

          // Merge in job order so reruns produce byte-identical reports.
          for (std::size_t idx = 0; idx < jobs.size(); ++idx) {
            if (!errors[idx].empty()) {
              accum.cell.errors.push_back(
                  "seed " + std::to_string(seed) + " vertex " +
                  std::to_string(jobs[idx].vertex) + ": " + errors[idx]);
              continue;
            }
            outcomes.push_back(scored[idx]);
            PerVertexRecord rec;
            rec.seed = seed;
            rec.method = method;
            rec.scope = scope;
            rec.victim = victim;
            rec.vertex = jobs[idx].vertex;
            rec.target_label = jobs[idx].target_label;
            rec.excluded = scored[idx].excluded;
            rec.success = scored[idx].success;
            rec.n_modified = scored[idx].n_modified;
            rec.victim_pre = pre[jobs[idx].vertex];
            rec.victim_post = posts[idx];
            report.per_vertex.push_back(std::move(rec));
          }
        }
      }
    }
  }

  // Aggregate: per-seed ASR/AME, then mean and sample stddev over seeds.
  for (auto& accum : accums) {
    std::vector<double> asrs, ames;
    for (std::size_t s = 0; s < spec.seeds.size(); ++s) {
      const auto& outcomes = accum.per_seed_outcomes[s];
      if (outcomes.empty()) continue;
      SeedStats stats;
      stats.seed = spec.seeds[s];
      stats.n_excluded = static_cast<std::size_t>(
          std::count_if(outcomes.begin(), outcomes.end(),
                        [](const VertexOutcome& o) { return o.excluded; }));
      stats.n_scored = outcomes.size() - stats.n_excluded;
      if (stats.n_scored == 0) {
        accum.cell.errors.push_back("seed " + std::to_string(stats.seed) +
                                    ": every vertex excluded");
        continue;
      }
      stats.asr = asr(outcomes);
      stats.ame = ame(outcomes, spec.ame_successes_only);
      asrs.push_back(stats.asr);
      ames.push_back(stats.ame);
      accum.cell.per_seed.push_back(stats);
    }
    auto mean_of = [](const std::vector<double>& xs) {
      double m = 0.0;
      for (double x : xs) m += x;
      return xs.empty() ? 0.0 : m / static_cast<double>(xs.size());
    };
    auto stddev_of = [&mean_of](const std::vector<double>& xs) {
      if (xs.size() < 2) return 0.0;
      const double m = mean_of(xs);
      double acc = 0.0;
      for (double x : xs) acc += (x - m) * (x - m);
      return std::sqrt(acc / static_cast<double>(xs.size() - 1));
    };
    accum.cell.asr_mean = mean_of(asrs);
    accum.cell.asr_stddev = stddev_of(asrs);
    accum.cell.ame_mean = mean_of(ames);
    accum.cell.ame_stddev = stddev_of(ames);
    report.cells.push_back(std::move(accum.cell));
  }

  for (const auto& [order, samples] : ratio_samples) {
    double m = 0.0;
    for (double x : samples) m += x;
    report.neighbor_ratios.push_back(
        NeighborRatio{order, m / static_cast<double>(samples.size())});
  }
  return report;
}

}  // namespace graphfool
