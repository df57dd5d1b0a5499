#include "graphfool/results_io.hpp"

#include <filesystem>
#include <fstream>
#include <stdexcept>

#include "json.hpp"

namespace graphfool {

using nlohmann::json;

std::string scope_to_string(ScopeKind kind) {
  switch (kind) {
    case ScopeKind::unlimited: return "unlimited";
    case ScopeKind::direct: return "direct";
    case ScopeKind::indirect: return "indirect";
    case ScopeKind::limited: return "limited";
  }
  throw std::logic_error("scope_to_string: bad enum");
}

ScopeKind scope_from_string(const std::string& s) {
  if (s == "unlimited") return ScopeKind::unlimited;
  if (s == "direct") return ScopeKind::direct;
  if (s == "indirect") return ScopeKind::indirect;
  if (s == "limited") return ScopeKind::limited;
  throw std::invalid_argument("unknown scope: " + s);
}

std::string mode_to_string(AttackMode mode) {
  return mode == AttackMode::untargeted ? "untargeted" : "targeted";
}

AttackMode mode_from_string(const std::string& s) {
  if (s == "untargeted") return AttackMode::untargeted;
  if (s == "targeted") return AttackMode::targeted;
  throw std::invalid_argument("unknown mode: " + s);
}

namespace {

json flips_to_json(const std::vector<EdgeFlip>& flips) {
  json out = json::array();
  for (const auto& f : flips) out.push_back({f.u, f.v, f.delta});
  return out;
}

std::vector<EdgeFlip> flips_from_json(const json& arr) {
  std::vector<EdgeFlip> out;
  for (const auto& item : arr) {
    if (!item.is_array() || item.size() != 3) {
      throw std::runtime_error("attack record: malformed flip triple");
    }
    out.push_back(EdgeFlip{item[0].get<VertexId>(), item[1].get<VertexId>(),
                           item[2].get<int>()});
  }
  return out;
}

void atomic_write(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write: " + path);
    out << content;
    if (!out) throw std::runtime_error("write failed: " + path);
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace

std::string attack_result_to_json_line(const AttackResult& r) {
  json j;
  j["schema"] = kAttackResultSchema;
  j["method"] = r.method;
  j["target"] = r.target;
  j["mode"] = mode_to_string(r.mode);
  if (r.target_label) {
    j["target_label"] = *r.target_label;
  } else {
    j["target_label"] = nullptr;
  }
  j["scope"] = scope_to_string(r.scope.kind);
  j["order"] = r.scope.order;
  j["budget"] = r.budget;
  j["flips"] = flips_to_json(r.flips);
  j["success"] = r.success;
  j["n_modified"] = r.n_modified();
  j["pre_label"] = r.pre_label;
  j["post_label"] = r.post_label;
  j["iteration_labels"] = r.iteration_labels;
  j["boundary_classes"] = r.boundary_classes;
  j["failure_reason"] = r.failure_reason;
  j["adjacency_checksum"] = r.adjacency_checksum;
  return j.dump();
}

AttackResult attack_result_from_json_line(const std::string& line) {
  const json j = json::parse(line);
  if (!j.contains("schema") || j["schema"].get<std::string>() != kAttackResultSchema) {
    throw std::runtime_error("attack record: schema mismatch (expected " +
                             std::string(kAttackResultSchema) + ")");
  }
  AttackResult r;
  r.method = j.at("method").get<std::string>();
  r.target = j.at("target").get<VertexId>();
  r.mode = mode_from_string(j.at("mode").get<std::string>());
  if (!j.at("target_label").is_null()) r.target_label = j["target_label"].get<int>();
  r.scope.kind = scope_from_string(j.at("scope").get<std::string>());
  r.scope.order = j.at("order").get<int>();
  r.budget = j.at("budget").get<int>();
  r.flips = flips_from_json(j.at("flips"));
  r.success = j.at("success").get<bool>();
  r.pre_label = j.at("pre_label").get<int>();
  r.post_label = j.at("post_label").get<int>();
  r.iteration_labels = j.at("iteration_labels").get<std::vector<int>>();
  r.boundary_classes = j.at("boundary_classes").get<std::vector<int>>();
  r.failure_reason = j.at("failure_reason").get<std::string>();
  r.adjacency_checksum = j.at("adjacency_checksum").get<std::uint64_t>();
  if (static_cast<int>(r.flips.size()) != j.at("n_modified").get<int>()) {
    throw std::runtime_error("attack record: n_modified disagrees with flips");
  }
  return r;
}

void write_attack_results(const std::string& path,
                          const std::vector<AttackResult>& results) {
  std::string content;
  for (const auto& r : results) {
    content += attack_result_to_json_line(r);
    content += '\n';
  }
  atomic_write(path, content);
}

std::vector<AttackResult> read_attack_results(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open results file: " + path);
  std::vector<AttackResult> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    try {
      out.push_back(attack_result_from_json_line(line));
    } catch (const std::exception& e) {
      throw std::runtime_error(path + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
  return out;
}

namespace {

json spec_to_json(const ExperimentSpec& spec) {
  json scopes = json::array();
  for (const auto& s : spec.scopes) {
    scopes.push_back({{"kind", scope_to_string(s.kind)}, {"order", s.order}});
  }
  json plan;
  plan["mode"] = mode_to_string(spec.plan.mode);
  plan["target_label"] =
      spec.plan.target_label ? json(*spec.plan.target_label) : json(nullptr);
  plan["budget"] = spec.plan.budget;
  return json{{"dataset_id", spec.dataset_id},
              {"methods", spec.methods},
              {"scopes", scopes},
              {"plan", plan},
              {"victims", spec.victims},
              {"per_class", spec.per_class},
              {"seeds", spec.seeds},
              {"train",
               {{"learning_rate", spec.train.learning_rate},
                {"epochs", spec.train.epochs},
                {"weight_decay", spec.train.weight_decay},
                {"hidden_dim", spec.train.hidden_dim}}},
              {"dice_b_fraction", spec.dice_b_fraction},
              {"ame_successes_only", spec.ame_successes_only},
              {"output_path", spec.output_path}};
}

}  // namespace

std::string metrics_report_to_json(const MetricsReport& report) {
  json j;
  j["schema"] = kMetricsReportSchema;
  j["spec_echo"] = spec_to_json(report.spec);

  json cells = json::array();
  for (const auto& c : report.cells) {
    json per_seed = json::array();
    for (const auto& s : c.per_seed) {
      per_seed.push_back({{"seed", s.seed},
                          {"asr", s.asr},
                          {"ame", s.ame},
                          {"n_scored", s.n_scored},
                          {"n_excluded", s.n_excluded}});
    }
    cells.push_back({{"method", c.method},
                     {"mode", mode_to_string(c.mode)},
                     {"scope", scope_to_string(c.scope.kind)},
                     {"order", c.scope.order},
                     {"victim", c.victim},
                     {"asr_mean", c.asr_mean},
                     {"asr_stddev", c.asr_stddev},
                     {"ame_mean", c.ame_mean},
                     {"ame_stddev", c.ame_stddev},
                     {"per_seed", per_seed},
                     {"errors", c.errors}});
  }
  j["cells"] = cells;

  json per_vertex = json::array();
  for (const auto& r : report.per_vertex) {
    per_vertex.push_back(
        {{"seed", r.seed},
         {"method", r.method},
         {"scope", scope_to_string(r.scope.kind)},
         {"order", r.scope.order},
         {"victim", r.victim},
         {"vertex", r.vertex},
         {"target_label", r.target_label ? json(*r.target_label) : json(nullptr)},
         {"excluded", r.excluded},
         {"success", r.success},
         {"n_modified", r.n_modified},
         {"victim_pre", r.victim_pre},
         {"victim_post", r.victim_post}});
  }
  j["per_vertex"] = per_vertex;

  json ratios = json::array();
  for (const auto& r : report.neighbor_ratios) {
    ratios.push_back({{"order", r.order}, {"ratio_percent", r.ratio_percent}});
  }
  j["neighbor_ratios"] = ratios;
  return j.dump(2);
}

void write_metrics_report(const std::string& path, const MetricsReport& report) {
  atomic_write(path, metrics_report_to_json(report) + "\n");
}

}  // namespace graphfool
