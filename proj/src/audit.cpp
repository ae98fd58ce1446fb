#include "cubeinf/audit.hpp"

#include <algorithm>

namespace cubeinf {

AuditReport make_report(std::string name, Relation rel, double lhs, double rhs, double tolerance,
                        std::string provenance, std::string notes) {
  AuditReport r;
  r.name = std::move(name);
  r.relation = rel;
  r.lhs = lhs;
  r.rhs = rhs;
  r.slack = rel == Relation::LessEqual ? rhs - lhs : lhs - rhs;
  r.tolerance = tolerance;
  r.passed = r.slack >= -tolerance;
  r.provenance = std::move(provenance);
  r.notes = std::move(notes);
  return r;
}

nlohmann::json to_json(const AuditReport& r) {
  nlohmann::json j = {{"name", r.name},
                      {"relation", r.relation == Relation::LessEqual ? "<=" : ">="},
                      {"lhs", r.lhs},
                      {"rhs", r.rhs},
                      {"slack", r.slack},
                      {"tolerance", r.tolerance},
                      {"passed", r.passed},
                      {"inputs", r.provenance}};
  if (!r.notes.empty()) j["notes"] = r.notes;
  return j;
}

nlohmann::json to_json(const std::vector<AuditReport>& reports) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& r : reports) arr.push_back(to_json(r));
  return arr;
}

bool all_passed(const std::vector<AuditReport>& reports) {
  return std::all_of(reports.begin(), reports.end(), [](const auto& r) { return r.passed; });
}

}  // namespace cubeinf
