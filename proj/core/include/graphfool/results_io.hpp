#pragma once

#include <string>
#include <vector>

#include "graphfool/attack.hpp"
#include "graphfool/eval.hpp"

namespace graphfool {

inline constexpr const char* kAttackResultSchema = "graphfool.attack_result/1";
inline constexpr const char* kMetricsReportSchema = "graphfool.metrics_report/1";

std::string scope_to_string(ScopeKind kind);
ScopeKind scope_from_string(const std::string& s);
std::string mode_to_string(AttackMode mode);
AttackMode mode_from_string(const std::string& s);

/// Attack records as JSON Lines, one record per attacked vertex. Written
/// atomically (temp file + rename). Readers reject records whose schema tag
/// does not match.
void write_attack_results(const std::string& path,
                          const std::vector<AttackResult>& results);
std::vector<AttackResult> read_attack_results(const std::string& path);

std::string attack_result_to_json_line(const AttackResult& result);
AttackResult attack_result_from_json_line(const std::string& line);

/// Metrics report as a single JSON document with spec echo, cells and
/// per-vertex records. Atomic write.
void write_metrics_report(const std::string& path, const MetricsReport& report);
std::string metrics_report_to_json(const MetricsReport& report);

}  // namespace graphfool
