#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "selfsim/group.hpp"
#include "selfsim/subgroup.hpp"

namespace selfsim {

/// Subgroups W_1, ..., W_m to be avoided, each with a membership level.
using AvoidList = std::vector<SubgroupHandle>;

struct CertificateStage {
  std::size_t k = 0;
  Vertex v;
  GroupWord w;
  Vertex u;
};

struct BuildBudgets {
  std::size_t rist = 200000;          // nodes for the rigid-stabilizer engine
  std::size_t candidates_per_vertex = 64;  // conjugates f s f^-1 tried at one vertex
  std::size_t max_level = 10;         // deepest level considered for k_i
};

struct WMCertificate {
  std::string preset_name;
  std::string fingerprint;
  nlohmann::json preset;  // canonical preset document
  std::vector<GroupWord> q;
  AvoidList avoid;
  std::vector<CertificateStage> stages;
  std::size_t verification_level = 0;
  BuildBudgets budgets;
  std::uint64_t seed = 0;
};

/// Canonical document: sorted keys, words in word syntax, vertices as digit strings.
nlohmann::json certificate_to_json(const Group& group, const WMCertificate& c);
std::string certificate_to_text(const Group& group, const WMCertificate& c);
/// Parses a certificate document against `group`; avoid-list images are rebuilt.
WMCertificate certificate_from_json(const Group& group, const nlohmann::json& doc);

/// Runs the staged construction for a finite Q. Stage i uses level k_i, the
/// lexicographically least vertex v_i of level k_i admitting an element of
/// Rist(v_i) whose image escapes W_i, and the least u_i below Q(u_{i-1}) outside
/// Q(v_i). Throws Error(precondition) for unusable Q and Error(stage_failure) when
/// a stage cannot be completed within the budgets.
WMCertificate build_certificate(const Group& group, std::span<const GroupWord> q,
                                const AvoidList& avoid, std::size_t verification_level,
                                const BuildBudgets& budgets = {}, std::uint64_t seed = 0);

struct ClauseResult {
  std::string clause;
  bool pass = false;
  std::string detail;
};

struct ValidationResult {
  std::vector<ClauseResult> clauses;
  std::size_t verification_level = 0;

  bool ok() const;
  nlohmann::json to_json() const;
};

/// Independent re-check of a certificate from scratch.
ValidationResult validate_certificate(const Group& group, const WMCertificate& c);

}  // namespace selfsim
