#pragma once

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace cubeinf {

enum class Relation { LessEqual, GreaterEqual };

/// Outcome of checking one inequality instance: lhs (relation) rhs.
struct AuditReport {
  std::string name;
  Relation relation = Relation::LessEqual;
  double lhs = 0.0;
  double rhs = 0.0;
  /// Non-negative when the inequality holds: rhs - lhs for <=, lhs - rhs for >=.
  double slack = 0.0;
  /// Allowed negative slack (numerical tolerance or 3 pooled sigma).
  double tolerance = 0.0;
  bool passed = false;
  /// "exact" or a description of the Monte Carlo inputs.
  std::string provenance = "exact";
  std::string notes;
};

AuditReport make_report(std::string name, Relation rel, double lhs, double rhs, double tolerance,
                        std::string provenance = "exact", std::string notes = {});

nlohmann::json to_json(const AuditReport& r);
nlohmann::json to_json(const std::vector<AuditReport>& reports);

bool all_passed(const std::vector<AuditReport>& reports);

}  // namespace cubeinf
