#include <filesystem>
#include <fstream>
#include <stdexcept>

#include "doctest.h"
#include "fixtures.hpp"
#include "graphfool/results_io.hpp"

#include "json.hpp"

using namespace graphfool;
namespace gt = graphfool::testing;

namespace {

AttackResult sample_result() {
  AttackResult r;
  r.method = "graphfool";
  r.target = 7;
  r.mode = AttackMode::targeted;
  r.target_label = 2;
  r.scope = ScopeSpec{ScopeKind::limited, 3};
  r.budget = 9;
  r.flips = {{1, 7, +1}, {2, 7, -1}};
  r.iteration_labels = {0, 2};
  r.boundary_classes = {2, 2};
  r.success = true;
  r.pre_label = 0;
  r.post_label = 2;
  r.adjacency_checksum = 0xdeadbeefULL;
  return r;
}

}  // namespace

TEST_CASE("attack result round-trips through json") {
  const AttackResult r = sample_result();
  const AttackResult back = attack_result_from_json_line(attack_result_to_json_line(r));
  CHECK(back.method == r.method);
  CHECK(back.target == r.target);
  CHECK(back.mode == r.mode);
  CHECK(back.target_label == r.target_label);
  CHECK(back.scope.kind == r.scope.kind);
  CHECK(back.scope.order == r.scope.order);
  CHECK(back.budget == r.budget);
  CHECK(back.flips == r.flips);
  CHECK(back.iteration_labels == r.iteration_labels);
  CHECK(back.boundary_classes == r.boundary_classes);
  CHECK(back.success == r.success);
  CHECK(back.pre_label == r.pre_label);
  CHECK(back.post_label == r.post_label);
  CHECK(back.adjacency_checksum == r.adjacency_checksum);
}

TEST_CASE("attack result file writer is atomic and readable") {
  const auto path =
      (std::filesystem::temp_directory_path() / "gf_results_test.jsonl").string();
  write_attack_results(path, {sample_result(), sample_result()});
  CHECK_FALSE(std::filesystem::exists(path + ".tmp"));
  const auto loaded = read_attack_results(path);
  CHECK(loaded.size() == 2);
  std::filesystem::remove(path);
}

TEST_CASE("schema mismatch is rejected with the line number") {
  const auto path =
      (std::filesystem::temp_directory_path() / "gf_results_bad.jsonl").string();
  {
    std::ofstream out(path);
    out << R"({"schema":"something_else/9"})" << "\n";
  }
  try {
    read_attack_results(path);
    FAIL("expected schema error");
  } catch (const std::runtime_error& e) {
    CHECK(std::string(e.what()).find(":1:") != std::string::npos);
    CHECK(std::string(e.what()).find("schema") != std::string::npos);
  }
  std::filesystem::remove(path);
}

TEST_CASE("n_modified inconsistency is rejected") {
  auto line = attack_result_to_json_line(sample_result());
  auto j = nlohmann::json::parse(line);
  j["n_modified"] = 5;
  CHECK_THROWS_AS(attack_result_from_json_line(j.dump()), std::runtime_error);
}

TEST_CASE("mode and scope string round trips") {
  for (auto kind : {ScopeKind::unlimited, ScopeKind::direct, ScopeKind::indirect,
                    ScopeKind::limited}) {
    CHECK(scope_from_string(scope_to_string(kind)) == kind);
  }
  for (auto mode : {AttackMode::untargeted, AttackMode::targeted}) {
    CHECK(mode_from_string(mode_to_string(mode)) == mode);
  }
  CHECK_THROWS_AS(scope_from_string("sideways"), std::invalid_argument);
  CHECK_THROWS_AS(mode_from_string("both"), std::invalid_argument);
}

TEST_CASE("metrics report serializes schema, cells and per-vertex records") {
  const auto g = generate_sbm(6, 2, 0.7, 0.05, 2);
  ExperimentSpec spec;
  spec.methods = {"random"};
  spec.scopes = {ScopeSpec{ScopeKind::direct, 1}};
  spec.victims = {"gcn"};
  spec.per_class = 2;
  spec.seeds = {1};
  spec.plan.budget = 2;
  spec.train.epochs = 50;
  const auto report = run_experiment(g, spec);

  const auto parsed = nlohmann::json::parse(metrics_report_to_json(report));
  CHECK(parsed.at("schema").get<std::string>() == kMetricsReportSchema);
  CHECK(parsed.at("cells").size() == 1);
  CHECK(parsed.at("cells")[0].at("method") == "random");
  CHECK(parsed.at("per_vertex").size() == report.per_vertex.size());
  CHECK(parsed.at("spec_echo").at("per_class").get<std::size_t>() == 2);

  const auto path =
      (std::filesystem::temp_directory_path() / "gf_report_test.json").string();
  write_metrics_report(path, report);
  CHECK(std::filesystem::exists(path));
  CHECK_FALSE(std::filesystem::exists(path + ".tmp"));
  std::filesystem::remove(path);
}
