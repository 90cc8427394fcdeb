#pragma once

#include <cstddef>
#include <initializer_list>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "selfsim/perm.hpp"
#include "selfsim/preset.hpp"
#include "selfsim/tree.hpp"
#include "selfsim/types.hpp"
#include "selfsim/word.hpp"

namespace selfsim {

/// Level-one wreath recursion of an element: g = sections . root_perm.
struct Wreath {
  std::vector<unsigned> root_perm;
  std::vector<GroupWord> sections;
};

/// Depth-n truncation of an automorphism: the root permutation of the section
/// at every vertex of level < depth.
struct Portrait {
  std::size_t depth = 0;
  std::map<Vertex, std::vector<unsigned>> decorations;

  friend bool operator==(const Portrait&, const Portrait&) = default;

  bool is_trivial() const;
  /// Image of v (level <= depth) obtained by walking the decorations.
  Vertex act(const Vertex& v) const;
};

nlohmann::json portrait_to_json(const Portrait& p);

struct OrderResult {
  enum class Status { finite, infinite, undecided };
  Status status = Status::undecided;
  BigInt order = 0;        // meaningful when finite
  std::size_t nodes = 0;   // recursion nodes visited

  bool finite() const noexcept { return status == Status::finite; }
};

/// A compiled, validated preset. All element operations go through a Group,
/// which owns the rewriting system and caches level permutations.
///
/// Products act right to left, (gh)(w) = g(h(w)), and sections compose as
/// (gh)_v = g_{h(v)} h_v.
class Group {
 public:
  /// Throws Error(invalid_preset) listing every validation issue.
  explicit Group(GroupPreset preset);

  Group(const Group&) = delete;
  Group& operator=(const Group&) = delete;

  const GroupPreset& preset() const noexcept { return preset_; }
  unsigned degree() const noexcept { return preset_.degree; }
  std::size_t generator_count() const noexcept { return names_.size(); }
  const std::vector<std::string>& names() const noexcept { return names_; }
  bool contracting() const noexcept { return preset_.contracting_certified; }
  const std::string& fingerprint() const noexcept { return fingerprint_; }
  const RewritingSystem& rewriting() const noexcept { return rewriting_; }

  // -- words ---------------------------------------------------------------
  GroupWord parse(std::string_view text) const;
  std::string format(const GroupWord& w) const;
  GroupWord reduce(std::span<const Letter> letters) const { return rewriting_.reduce(letters); }
  GroupWord generator(std::size_t index) const;
  std::vector<GroupWord> generators() const;
  /// Branching seeds from the preset, reduced.
  std::vector<GroupWord> branching() const;

  GroupWord multiply(const GroupWord& a, const GroupWord& b) const;
  GroupWord multiply(std::initializer_list<GroupWord> factors) const;
  GroupWord inverse(const GroupWord& a) const;
  GroupWord power(const GroupWord& a, long k) const;
  /// f g f^-1
  GroupWord conjugate(const GroupWord& f, const GroupWord& g) const;
  /// a b a^-1 b^-1
  GroupWord commutator(const GroupWord& a, const GroupWord& b) const;

  // -- action ----------------------------------------------------------------
  Wreath decompose(const GroupWord& g) const;
  std::vector<unsigned> root_permutation(const GroupWord& g) const;
  Vertex apply(const GroupWord& g, const Vertex& v) const;
  GroupWord section(const GroupWord& g, const Vertex& v) const;
  std::pair<Vertex, GroupWord> apply_with_section(const GroupWord& g, const Vertex& v) const;

  /// Word problem. Certified-contracting presets recurse without a budget;
  /// others stop after `budget` nodes and answer undecided.
  Verdict is_identity(const GroupWord& g, std::size_t budget = kDefaultRecursionBudget) const;
  Verdict equal(const GroupWord& a, const GroupWord& b,
                std::size_t budget = kDefaultRecursionBudget) const;

  Portrait portrait(const GroupWord& g, std::size_t depth) const;

  OrderResult element_order(const GroupWord& g,
                            std::size_t budget = kDefaultRecursionBudget) const;

  // -- finite levels -------------------------------------------------------
  /// Largest number of level vertices the permutation engine accepts (default 1024).
  std::size_t max_level_points() const noexcept { return max_level_points_; }
  void set_max_level_points(std::size_t points) noexcept { max_level_points_ = points; }
  /// Throws Error(level_too_large) when d^n exceeds max_level_points().
  std::size_t check_level(std::size_t level) const;

  /// Action of g on the lexicographically indexed vertices of `level`.
  Permutation level_permutation(const GroupWord& g, std::size_t level) const;

 private:
  struct LetterData {
    std::vector<unsigned> perm;
    std::vector<GroupWord> sections;
  };

  const LetterData& letter(const Letter& l) const { return letters_[l.code()]; }
  const Permutation& letter_permutation(const Letter& l, std::size_t level) const;

  GroupPreset preset_;
  std::vector<std::string> names_;
  std::string fingerprint_;
  RewritingSystem rewriting_;
  std::vector<LetterData> letters_;  // indexed by Letter::code()
  std::size_t max_level_points_ = 1024;

  mutable std::mutex cache_mutex_;
  mutable std::map<std::pair<unsigned, std::size_t>, Permutation> level_cache_;
};

}  // namespace selfsim
