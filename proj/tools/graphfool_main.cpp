// Command-line front end: dataset generation, GCN training, edge-perturbation
// attacks and ASR/AME evaluation, wired for reproducible seeded runs.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "graphfool/attack.hpp"
#include "graphfool/baselines.hpp"
#include "graphfool/eval.hpp"
#include "graphfool/gcn.hpp"
#include "graphfool/parallel.hpp"
#include "graphfool/results_io.hpp"
#include "graphfool/victims.hpp"

namespace gf = graphfool;

namespace {

struct DatasetArgs {
  std::string edges;
  std::string features;  // empty -> identity features
  std::string labels;
};

void add_dataset_options(CLI::App* cmd, DatasetArgs& args) {
  cmd->add_option("--edges", args.edges, "Edge list file (one 'u v' pair per line)")
      ->required();
  cmd->add_option("--features", args.features,
                  "CSV feature matrix, row i = vertex i (default: identity)");
  cmd->add_option("--labels", args.labels, "CSV 'vertex_id,label_id' file");
}

gf::Graph load_dataset(const DatasetArgs& args) {
  return gf::load_graph(args.edges, args.features, args.labels);
}

std::vector<std::uint64_t> parse_seed_list(const std::string& csv) {
  std::vector<std::uint64_t> out;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(std::stoull(item));
  }
  if (out.empty()) throw CLI::ValidationError("--seeds", "empty seed list");
  return out;
}

gf::ScopeSpec parse_scope(const std::string& name, int order) {
  gf::ScopeSpec scope;
  scope.kind = gf::scope_from_string(name);
  scope.order = order;
  return scope;
}

// "direct,unlimited,limited:2" -> scope specs
std::vector<gf::ScopeSpec> parse_scope_list(const std::string& csv) {
  std::vector<gf::ScopeSpec> out;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    const auto colon = item.find(':');
    if (colon == std::string::npos) {
      out.push_back(parse_scope(item, 1));
    } else {
      out.push_back(parse_scope(item.substr(0, colon),
                                std::stoi(item.substr(colon + 1))));
    }
  }
  if (out.empty()) throw CLI::ValidationError("--scopes", "empty scope list");
  return out;
}

std::vector<std::string> parse_name_list(const std::string& csv) {
  std::vector<std::string> out;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

int run_train(const DatasetArgs& dataset, const gf::TrainConfig& config,
              const std::string& out_path, const std::string& loss_log_flag) {
  const gf::Graph g = load_dataset(dataset);
  const gf::TrainOutput trained = gf::train(g, config);
  gf::save_checkpoint(trained.model, out_path);
  const std::string loss_log =
      loss_log_flag.empty() ? out_path + ".losses.csv" : loss_log_flag;
  {
    const std::string tmp = loss_log + ".tmp";
    {
      std::ofstream out(tmp);
      if (!out) throw std::runtime_error("cannot write loss log: " + loss_log);
      out << "epoch,loss\n";
      for (std::size_t e = 0; e < trained.epoch_losses.size(); ++e) {
        out << e << "," << std::setprecision(17) << trained.epoch_losses[e] << "\n";
      }
    }
    std::filesystem::rename(tmp, loss_log);
  }

  const auto preds = gf::predict(trained.model, g, gf::AdjacencyMatrix::from_graph(g));
  std::size_t train_hits = 0, train_total = 0, full_hits = 0, full_total = 0;
  for (gf::VertexId v = 0; v < g.n_vertices(); ++v) {
    if (g.labels()[v] == gf::kUnknownLabel) continue;
    ++full_total;
    full_hits += preds[v] == g.labels()[v] ? 1 : 0;
    if (g.train_mask()[v]) {
      ++train_total;
      train_hits += preds[v] == g.labels()[v] ? 1 : 0;
    }
  }
  std::cout << "checkpoint: " << out_path << "\n"
            << "final loss: " << trained.epoch_losses.back() << "\n"
            << "train accuracy: " << (train_total ? double(train_hits) / train_total : 0.0)
            << "\nlabeled accuracy: " << (full_total ? double(full_hits) / full_total : 0.0)
            << std::endl;
  return 0;
}

struct AttackArgs {
  std::string checkpoint;
  std::string method = "graphfool";
  std::string mode = "untargeted";
  int label = -1;
  std::string scope = "unlimited";
  int order = 1;
  int budget = 0;  // 0 -> default_budget
  std::string targets_csv;
  std::size_t per_class = 20;
  std::uint64_t sample_seed = 1;
  std::uint64_t seed = 1;
  double dice_b_fraction = 0.5;
  std::string out;
};

int run_attack_cmd(const DatasetArgs& dataset, const AttackArgs& args) {
  const gf::Graph g = load_dataset(dataset);
  const gf::GcnModel model = gf::load_checkpoint(args.checkpoint);
  const gf::AdjacencyMatrix clean = gf::AdjacencyMatrix::from_graph(g);
  const std::vector<int> clean_pred = gf::predict(model, g, clean);
  const gf::AttackMode mode = gf::mode_from_string(args.mode);
  const gf::ScopeSpec scope = parse_scope(args.scope, args.order);
  const int budget = args.budget > 0 ? args.budget : gf::default_budget(g);

  if (mode == gf::AttackMode::targeted) {
    if (args.method != "graphfool") {
      throw std::runtime_error("targeted mode is only available for --method graphfool");
    }
    if (args.label < 0 || args.label >= g.n_classes()) {
      throw std::runtime_error("invalid target label " + std::to_string(args.label) +
                               " (have " + std::to_string(g.n_classes()) + " classes)");
    }
  }

  std::vector<gf::VertexId> targets;
  bool explicit_targets = false;
  if (!args.targets_csv.empty()) {
    explicit_targets = true;
    std::stringstream ss(args.targets_csv);
    std::string item;
    while (std::getline(ss, item, ',')) {
      if (item.empty()) continue;
      const auto v = std::stoull(item);
      if (v >= g.n_vertices()) {
        throw std::runtime_error("target vertex " + item + " out of range");
      }
      targets.push_back(v);
    }
  } else {
    targets = gf::sample_victims(g, args.per_class, args.sample_seed);
  }

  // Targeted attacks on vertices already predicted as the label are vacuous:
  // an explicit request is an error, a sampled vertex is skipped.
  if (mode == gf::AttackMode::targeted) {
    std::vector<gf::VertexId> kept;
    for (gf::VertexId v : targets) {
      if (clean_pred[v] == args.label) {
        if (explicit_targets) {
          throw std::runtime_error("vertex " + std::to_string(v) +
                                   " is already predicted as label " +
                                   std::to_string(args.label));
        }
        std::cerr << "skipping vertex " << v << ": already predicted as label "
                  << args.label << "\n";
        continue;
      }
      kept.push_back(v);
    }
    targets = std::move(kept);
  }

  std::vector<int> dice_labels(g.n_vertices());
  for (gf::VertexId v = 0; v < g.n_vertices(); ++v) {
    dice_labels[v] =
        g.labels()[v] != gf::kUnknownLabel ? g.labels()[v] : clean_pred[v];
  }

  std::vector<gf::AttackResult> results(targets.size());
  std::vector<std::string> errors(targets.size());
  gf::parallel_for(targets.size(), gf::default_thread_count(), [&](std::size_t i) {
    const gf::VertexId v = targets[i];
    try {
      if (args.method == "graphfool") {
        gf::AttackPlan plan;
        plan.target = v;
        plan.mode = mode;
        if (mode == gf::AttackMode::targeted) plan.target_label = args.label;
        plan.scope = scope;
        plan.budget = budget;
        results[i] = gf::run_attack(model, g, plan);
      } else if (args.method == "fga") {
        results[i] = gf::fga_attack(model, g, v, budget, scope);
      } else if (args.method == "dice") {
        results[i] = gf::dice_attack(g, dice_labels, v, budget,
                                     args.dice_b_fraction, args.seed + v);
      } else if (args.method == "random") {
        results[i] = gf::random_attack(g, v, budget, scope, args.seed + v);
      } else {
        throw std::runtime_error("unknown method: " + args.method);
      }
    } catch (const std::exception& e) {
      errors[i] = e.what();
    }
  });
  for (std::size_t i = 0; i < targets.size(); ++i) {
    if (!errors[i].empty()) {
      throw std::runtime_error("attack on vertex " + std::to_string(targets[i]) +
                               " failed: " + errors[i]);
    }
  }

  gf::write_attack_results(args.out, results);
  std::size_t successes = 0;
  for (const auto& r : results) successes += r.success ? 1 : 0;
  std::cout << "attacked " << results.size() << " vertices, " << successes
            << " white-box successes\nresults: " << args.out << std::endl;
  return 0;
}

struct EvaluateArgs {
  std::string checkpoint;
  std::string results;
  std::string victims = "gcn";
  std::uint64_t victim_seed = 1;
  int victim_epochs = 200;
  double victim_lr = 0.01;
  int victim_hidden = 16;
  bool ame_successes_only = false;
  std::string dump_predictions_dir;
  std::string out;
};

void dump_victim_predictions(const std::string& dir, const std::string& victim,
                             const std::vector<int>& preds) {
  std::filesystem::create_directories(dir);
  const std::string path = dir + "/" + victim + ".csv";
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp);
    if (!out) throw std::runtime_error("cannot write predictions: " + path);
    for (std::size_t v = 0; v < preds.size(); ++v) out << v << "," << preds[v] << "\n";
  }
  std::filesystem::rename(tmp, path);
}

int run_evaluate(const DatasetArgs& dataset, const EvaluateArgs& args) {
  const gf::Graph g = load_dataset(dataset);
  const gf::GcnModel model = gf::load_checkpoint(args.checkpoint);
  const auto records = gf::read_attack_results(args.results);
  if (records.empty()) throw std::runtime_error("no records in " + args.results);
  const auto victims = parse_name_list(args.victims);
  if (victims.empty()) throw std::runtime_error("no victims requested");

  const gf::AdjacencyMatrix clean = gf::AdjacencyMatrix::from_graph(g);
  gf::TrainConfig victim_config;
  victim_config.seed = args.victim_seed;
  victim_config.epochs = args.victim_epochs;
  victim_config.learning_rate = args.victim_lr;
  victim_config.hidden_dim = args.victim_hidden;

  std::map<std::string, std::vector<int>> victim_clean;
  for (const auto& victim : victims) {
    if (victim == "gcn") {
      victim_clean[victim] = gf::predict(model, g, clean);
    } else if (victim == "retrained-gcn") {
      victim_clean[victim] = gf::retrained_gcn_victim(g, clean, victim_config);
    } else if (victim == "prop-linear") {
      victim_clean[victim] = gf::propagation_linear_victim(g, clean);
    } else {
      throw std::runtime_error("unknown victim: " + victim);
    }
    if (!args.dump_predictions_dir.empty()) {
      dump_victim_predictions(args.dump_predictions_dir, victim, victim_clean[victim]);
    }
  }

  // Replay every record once, verifying flip feasibility and the stored
  // checksum before any scoring.
  std::vector<gf::Matrix> adversarial(records.size());
  std::vector<std::string> errors(records.size());
  gf::parallel_for(records.size(), gf::default_thread_count(), [&](std::size_t i) {
    try {
      adversarial[i] = gf::replay_flips(g, records[i].flips);
      if (gf::checksum_adjacency(adversarial[i]) != records[i].adjacency_checksum) {
        throw std::runtime_error("integrity error: replayed flips disagree with "
                                 "stored adjacency checksum");
      }
    } catch (const std::exception& e) {
      errors[i] = e.what();
    }
  });
  for (std::size_t i = 0; i < records.size(); ++i) {
    if (!errors[i].empty()) {
      throw std::runtime_error("record " + std::to_string(i) + " (vertex " +
                               std::to_string(records[i].target) +
                               "): " + errors[i]);
    }
  }

  gf::MetricsReport report;
  report.spec.dataset_id = dataset.edges;
  report.spec.victims = victims;
  report.spec.per_class = 0;
  report.spec.seeds = {0};
  report.spec.ame_successes_only = args.ame_successes_only;
  report.spec.output_path = args.out;
  report.spec.methods.clear();
  report.spec.scopes.clear();

  struct Key {
    std::string method;
    gf::AttackMode mode;
    gf::ScopeKind kind;
    int order;
    std::string victim;
    auto operator<=>(const Key&) const = default;
  };
  std::map<Key, std::vector<gf::VertexOutcome>> cells;

  for (const auto& victim : victims) {
    const auto& pre = victim_clean.at(victim);
    std::vector<int> posts(records.size(), -1);
    gf::parallel_for(records.size(), gf::default_thread_count(), [&](std::size_t i) {
      const gf::AdjacencyMatrix adv{adversarial[i]};
      if (victim == "gcn") {
        posts[i] = gf::predict(model, g, adv)[records[i].target];
      } else if (victim == "retrained-gcn") {
        posts[i] = gf::retrained_gcn_victim(g, adv, victim_config)[records[i].target];
      } else {
        posts[i] = gf::propagation_linear_victim(g, adv)[records[i].target];
      }
    });

    for (std::size_t i = 0; i < records.size(); ++i) {
      const auto& r = records[i];
      gf::VertexOutcome o;
      o.vertex = r.target;
      o.n_modified = r.n_modified();
      if (r.mode == gf::AttackMode::untargeted) {
        const int truth = g.labels()[r.target];
        o.excluded = truth == gf::kUnknownLabel || pre[r.target] != truth;
        o.success = !o.excluded && posts[i] != truth;
      } else {
        o.excluded = pre[r.target] == *r.target_label;
        o.success = !o.excluded && posts[i] == *r.target_label;
      }
      const Key key{r.method, r.mode, r.scope.kind, r.scope.order, victim};
      cells[key].push_back(o);

      gf::PerVertexRecord rec;
      rec.seed = 0;
      rec.method = r.method;
      rec.scope = r.scope;
      rec.victim = victim;
      rec.vertex = r.target;
      rec.target_label = r.target_label;
      rec.excluded = o.excluded;
      rec.success = o.success;
      rec.n_modified = o.n_modified;
      rec.victim_pre = pre[r.target];
      rec.victim_post = posts[i];
      report.per_vertex.push_back(std::move(rec));
    }
  }

  for (const auto& [key, outcomes] : cells) {
    gf::ReportCell cell;
    cell.method = key.method;
    cell.mode = key.mode;
    cell.scope = gf::ScopeSpec{key.kind, key.order};
    cell.victim = key.victim;
    gf::SeedStats stats;
    stats.seed = 0;
    stats.n_excluded = 0;
    for (const auto& o : outcomes) stats.n_excluded += o.excluded ? 1 : 0;
    stats.n_scored = outcomes.size() - stats.n_excluded;
    if (stats.n_scored == 0) {
      cell.errors.push_back("every vertex excluded");
    } else {
      stats.asr = gf::asr(outcomes);
      stats.ame = gf::ame(outcomes, args.ame_successes_only);
      cell.asr_mean = stats.asr;
      cell.ame_mean = stats.ame;
      cell.per_seed.push_back(stats);
    }
    report.cells.push_back(std::move(cell));
  }

  gf::write_metrics_report(args.out, report);
  for (const auto& cell : report.cells) {
    std::cout << cell.method << " / " << gf::scope_to_string(cell.scope.kind)
              << " / " << cell.victim << ": ASR " << cell.asr_mean << "% AME "
              << cell.ame_mean << "\n";
  }
  std::cout << "report: " << args.out << std::endl;
  return 0;
}

struct SweepArgs {
  std::string methods = "graphfool";
  std::string scopes = "unlimited";
  std::string mode = "untargeted";
  int label = -1;
  int budget = 0;
  std::string victims = "gcn";
  std::size_t per_class = 20;
  std::string seeds = "1";
  double dice_b_fraction = 0.5;
  bool ame_successes_only = false;
  gf::TrainConfig train;
  std::string out;
};

int run_sweep(const DatasetArgs& dataset, const SweepArgs& args) {
  const gf::Graph g = load_dataset(dataset);
  gf::ExperimentSpec spec;
  spec.dataset_id = dataset.edges;
  spec.methods = parse_name_list(args.methods);
  spec.scopes = parse_scope_list(args.scopes);
  spec.plan.mode = gf::mode_from_string(args.mode);
  if (args.label >= 0) spec.plan.target_label = args.label;
  spec.plan.budget = args.budget;
  spec.victims = parse_name_list(args.victims);
  spec.per_class = args.per_class;
  spec.seeds = parse_seed_list(args.seeds);
  spec.train = args.train;
  spec.dice_b_fraction = args.dice_b_fraction;
  spec.ame_successes_only = args.ame_successes_only;
  spec.output_path = args.out;

  const gf::MetricsReport report = gf::run_experiment(g, spec);
  gf::write_metrics_report(args.out, report);
  for (const auto& cell : report.cells) {
    std::cout << cell.method << " / " << gf::scope_to_string(cell.scope.kind);
    if (cell.scope.kind == gf::ScopeKind::limited) std::cout << ":" << cell.scope.order;
    std::cout << " / " << cell.victim << ": ASR " << cell.asr_mean << " +/- "
              << cell.asr_stddev << ", AME " << cell.ame_mean << " +/- "
              << cell.ame_stddev << "\n";
  }
  std::cout << "report: " << args.out << std::endl;
  return 0;
}

struct GenSbmArgs {
  std::size_t blocks = 2;
  std::size_t per_block = 20;
  double p_in = 0.5;
  double p_out = 0.05;
  std::uint64_t seed = 1;
  std::string out_dir;
};

int run_gen_sbm(const GenSbmArgs& args) {
  const gf::Graph g =
      gf::generate_sbm(args.per_block, args.blocks, args.p_in, args.p_out, args.seed);
  std::filesystem::create_directories(args.out_dir);
  const auto edges_path = args.out_dir + "/edges.txt";
  const auto labels_path = args.out_dir + "/labels.csv";
  {
    std::ofstream out(edges_path + ".tmp");
    out << "# sbm blocks=" << args.blocks << " per_block=" << args.per_block
        << " p_in=" << args.p_in << " p_out=" << args.p_out << " seed=" << args.seed
        << "\n";
    for (const auto& [u, v] : g.edges()) out << u << " " << v << "\n";
    if (!out) throw std::runtime_error("cannot write " + edges_path);
  }
  std::filesystem::rename(edges_path + ".tmp", edges_path);
  {
    std::ofstream out(labels_path + ".tmp");
    for (gf::VertexId v = 0; v < g.n_vertices(); ++v) {
      out << v << "," << g.labels()[v] << "\n";
    }
    if (!out) throw std::runtime_error("cannot write " + labels_path);
  }
  std::filesystem::rename(labels_path + ".tmp", labels_path);
  std::cout << "wrote " << edges_path << " (" << g.edges().size() << " edges), "
            << labels_path << " (" << g.n_vertices() << " vertices)" << std::endl;
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"graphfool: GCN training, boundary-linearization edge attacks "
               "and robustness evaluation"};
  app.require_subcommand(1);
  app.set_config("--config", "", "Key-value config file; command line overrides it");

  // train
  DatasetArgs train_dataset;
  gf::TrainConfig train_config;
  std::string train_out, loss_log;
  auto* train_cmd = app.add_subcommand("train", "Train the GCN and write a checkpoint");
  add_dataset_options(train_cmd, train_dataset);
  train_cmd->add_option("--hidden", train_config.hidden_dim, "Hidden width");
  train_cmd->add_option("--lr", train_config.learning_rate, "Learning rate");
  train_cmd->add_option("--epochs", train_config.epochs, "Full-batch steps");
  train_cmd->add_option("--weight-decay", train_config.weight_decay, "L2 coefficient");
  train_cmd->add_option("--seed", train_config.seed, "Init seed");
  train_cmd->add_option("--out", train_out, "Checkpoint path")->required();
  train_cmd->add_option("--loss-log", loss_log,
                        "CSV epoch,loss output (default: <out>.losses.csv)");

  // attack
  DatasetArgs attack_dataset;
  AttackArgs attack_args;
  auto* attack_cmd =
      app.add_subcommand("attack", "Generate adversarial edge flips for a victim set");
  add_dataset_options(attack_cmd, attack_dataset);
  attack_cmd->add_option("--checkpoint", attack_args.checkpoint, "Trained model")
      ->required();
  attack_cmd->add_option("--method", attack_args.method,
                         "graphfool | fga | dice | random");
  attack_cmd->add_option("--mode", attack_args.mode, "untargeted | targeted");
  attack_cmd->add_option("--label", attack_args.label, "Target label (targeted mode)");
  attack_cmd->add_option("--scope", attack_args.scope,
                         "unlimited | direct | indirect | limited");
  attack_cmd->add_option("--order", attack_args.order, "Neighborhood order for limited");
  attack_cmd->add_option("--budget", attack_args.budget,
                         "Max edge flips (0 = min(20, ceil(2*avg degree)))");
  attack_cmd->add_option("--targets", attack_args.targets_csv,
                         "Comma-separated vertex ids (default: stratified sample)");
  attack_cmd->add_option("--per-class", attack_args.per_class,
                         "Sampled victims per class");
  attack_cmd->add_option("--sample-seed", attack_args.sample_seed, "Victim sampling seed");
  attack_cmd->add_option("--seed", attack_args.seed, "Randomized-attacker seed");
  attack_cmd->add_option("--dice-b", attack_args.dice_b_fraction,
                         "DICE deletion fraction of the budget");
  attack_cmd->add_option("--out", attack_args.out, "Results file (JSON lines)")
      ->required();

  // evaluate
  DatasetArgs eval_dataset;
  EvaluateArgs eval_args;
  auto* eval_cmd =
      app.add_subcommand("evaluate", "Score stored attack results against victims");
  add_dataset_options(eval_cmd, eval_dataset);
  eval_cmd->add_option("--checkpoint", eval_args.checkpoint, "Attacked model")
      ->required();
  eval_cmd->add_option("--results", eval_args.results, "Attack results file")
      ->required();
  eval_cmd->add_option("--victims", eval_args.victims,
                       "Comma list of gcn | retrained-gcn | prop-linear");
  eval_cmd->add_option("--victim-seed", eval_args.victim_seed, "Retrained victim seed");
  eval_cmd->add_option("--victim-epochs", eval_args.victim_epochs, "Retrained victim epochs");
  eval_cmd->add_option("--victim-lr", eval_args.victim_lr, "Retrained victim learning rate");
  eval_cmd->add_option("--victim-hidden", eval_args.victim_hidden, "Retrained victim width");
  eval_cmd->add_flag("--ame-successes-only", eval_args.ame_successes_only,
                     "Average modified edges over successful attacks only");
  eval_cmd->add_option("--dump-predictions", eval_args.dump_predictions_dir,
                       "Directory for per-victim clean-graph predictions as "
                       "'vertex_id,predicted_label' CSV");
  eval_cmd->add_option("--out", eval_args.out, "Report path (JSON)")->required();

  // sweep
  DatasetArgs sweep_dataset;
  SweepArgs sweep_args;
  auto* sweep_cmd = app.add_subcommand(
      "sweep", "Train, attack and evaluate a full (method x scope x victim) grid");
  add_dataset_options(sweep_cmd, sweep_dataset);
  sweep_cmd->add_option("--methods", sweep_args.methods, "Comma list of methods");
  sweep_cmd->add_option("--scopes", sweep_args.scopes,
                        "Comma list, e.g. direct,unlimited,limited:2");
  sweep_cmd->add_option("--mode", sweep_args.mode, "untargeted | targeted");
  sweep_cmd->add_option("--label", sweep_args.label,
                        "Fixed target label (targeted; default sweeps all wrong labels)");
  sweep_cmd->add_option("--budget", sweep_args.budget, "Max flips (0 = default rule)");
  sweep_cmd->add_option("--victims", sweep_args.victims, "Comma list of victims");
  sweep_cmd->add_option("--per-class", sweep_args.per_class, "Victims per class");
  sweep_cmd->add_option("--seeds", sweep_args.seeds, "Comma list of seeds");
  sweep_cmd->add_option("--dice-b", sweep_args.dice_b_fraction, "DICE deletion fraction");
  sweep_cmd->add_flag("--ame-successes-only", sweep_args.ame_successes_only,
                      "Average modified edges over successes only");
  sweep_cmd->add_option("--hidden", sweep_args.train.hidden_dim, "Attacker GCN width");
  sweep_cmd->add_option("--lr", sweep_args.train.learning_rate, "Attacker learning rate");
  sweep_cmd->add_option("--epochs", sweep_args.train.epochs, "Attacker epochs");
  sweep_cmd->add_option("--weight-decay", sweep_args.train.weight_decay, "L2 coefficient");
  sweep_cmd->add_option("--out", sweep_args.out, "Report path (JSON)")->required();

  // gen-sbm
  GenSbmArgs sbm_args;
  auto* sbm_cmd = app.add_subcommand("gen-sbm", "Write a stochastic block model dataset");
  sbm_cmd->add_option("--blocks", sbm_args.blocks, "Number of blocks");
  sbm_cmd->add_option("--per-block", sbm_args.per_block, "Vertices per block");
  sbm_cmd->add_option("--p-in", sbm_args.p_in, "Within-block edge probability");
  sbm_cmd->add_option("--p-out", sbm_args.p_out, "Cross-block edge probability");
  sbm_cmd->add_option("--seed", sbm_args.seed, "Generator seed");
  sbm_cmd->add_option("--out-dir", sbm_args.out_dir, "Output directory")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (train_cmd->parsed()) return run_train(train_dataset, train_config, train_out, loss_log);
    if (attack_cmd->parsed()) return run_attack_cmd(attack_dataset, attack_args);
    if (eval_cmd->parsed()) return run_evaluate(eval_dataset, eval_args);
    if (sweep_cmd->parsed()) return run_sweep(sweep_dataset, sweep_args);
    if (sbm_cmd->parsed()) return run_gen_sbm(sbm_args);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << std::endl;
    return 1;
  }
  return 1;
}
