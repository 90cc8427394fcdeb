#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace selfsim {

/// Wreath recursion of one generator: x(i w) = root_perm[i] x_i(w), where the
/// section x_i is given in word syntax.
struct GeneratorRecursion {
  std::string name;
  std::vector<unsigned> root_perm;
  std::vector<std::string> sections;

  friend bool operator==(const GeneratorRecursion&, const GeneratorRecursion&) = default;
};

struct RewriteRule {
  std::string lhs;
  std::string rhs;

  friend bool operator==(const RewriteRule&, const RewriteRule&) = default;
};

/// Definition of a self-similar group as written in a group-definition file.
/// Words are kept in text form so that an invalid preset can still be loaded
/// and reported on; Group compiles a validated preset.
struct GroupPreset {
  std::string name;
  unsigned degree = 2;
  std::vector<GeneratorRecursion> generators;
  std::vector<RewriteRule> rules;
  /// Seeds for the branching subgroup K (K is their normal closure).
  std::vector<std::string> branching;
  bool contracting_certified = false;

  std::vector<std::string> generator_names() const;

  friend bool operator==(const GroupPreset&, const GroupPreset&) = default;
};

/// The first Grigorchuk group on the binary tree.
GroupPreset grigorchuk_preset();

/// The GGS group with defining vector E on the d-regular tree. Entries are
/// reduced mod d; |E| must equal d - 1.
GroupPreset ggs_preset(unsigned degree, std::span<const int> defining_vector);

/// Gupta-Sidki group: GGS with d = 3, E = (1, -1).
GroupPreset gupta_sidki_preset();

/// Syntactic regular-branch criterion for GGS vectors: d prime and the entries
/// neither all zero nor all non-zero, or E = (1, -1).
bool regular_branch_vector_check(unsigned degree, std::span<const int> defining_vector);

struct PresetIssue {
  std::string kind;      // e.g. "unknown-symbol", "not-a-permutation"
  std::string location;  // e.g. "generators[1].sections[0]"
  std::string message;
};

struct ValidationReport {
  std::vector<PresetIssue> issues;
  bool ok() const noexcept { return issues.empty(); }
  bool has(std::string_view kind) const;
};

ValidationReport validate_preset(const GroupPreset& preset);

nlohmann::json preset_to_json(const GroupPreset& preset);
GroupPreset preset_from_json(const nlohmann::json& doc);

/// Canonical text form (sorted keys, two-space indent). Byte-stable.
std::string canonical_text(const GroupPreset& preset);

/// 16 hex digits of FNV-1a over the canonical text.
std::string preset_fingerprint(const GroupPreset& preset);

GroupPreset load_preset_file(const std::filesystem::path& path);

/// Resolves "grigorchuk", "gupta-sidki", "ggs:<d>:<e1>,<e2>,..." or a file path.
GroupPreset resolve_preset(const std::string& source);

}  // namespace selfsim
