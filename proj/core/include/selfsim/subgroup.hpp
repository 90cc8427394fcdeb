#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "selfsim/group.hpp"
#include "selfsim/quotient.hpp"

namespace selfsim {

/// A finitely generated subgroup given by generator words. With a membership
/// level L the image at level L is built on construction and membership queries
/// are answered there: "not in the image" is exact, "in the image" is evidence.
class SubgroupHandle {
 public:
  SubgroupHandle() = default;
  SubgroupHandle(const Group& group, std::vector<GroupWord> generators,
                 std::optional<std::size_t> membership_level = std::nullopt);

  const std::vector<GroupWord>& generators() const noexcept { return generators_; }
  std::optional<std::size_t> membership_level() const noexcept { return membership_level_; }
  bool has_image() const noexcept { return image_ != nullptr; }
  /// Image at the membership level; throws Error(precondition) without one.
  const PermSubgroup& image() const;
  PermSubgroup image_at(const Group& group, std::size_t level) const;

  /// Level-image membership of w at the membership level.
  bool image_contains(const Group& group, const GroupWord& w) const;

  SubgroupHandle with_level(const Group& group, std::size_t level) const;
  /// f H f^-1, keeping the membership level.
  SubgroupHandle conjugated(const Group& group, const GroupWord& f) const;

  /// Set when the generators only approximate the intended subgroup from below.
  bool under_approximation() const noexcept { return under_approximation_; }
  void mark_under_approximation(bool flag = true) noexcept { under_approximation_ = flag; }

  nlohmann::json to_json(const Group& group) const;

 private:
  std::vector<GroupWord> generators_;
  std::optional<std::size_t> membership_level_;
  std::shared_ptr<const PermSubgroup> image_;
  bool under_approximation_ = false;
};

/// Vertices of level <= depth fixed by every generator; prefix-closed.
struct FixedTree {
  std::size_t depth = 0;
  std::set<Vertex> vertices;
  /// A lexicographically least fixed vertex of the greatest level reached.
  Vertex deepest;

  std::vector<Vertex> level(std::size_t n) const;
  nlohmann::json to_json() const;
};

FixedTree fixed_tree(const Group& group, std::span<const GroupWord> generators, std::size_t depth);
std::vector<Vertex> fixed_vertices(const Group& group, std::span<const GroupWord> generators,
                                   std::size_t level);

/// Least l in [1, max_level] with no fixed vertex at level l.
std::optional<std::size_t> minimal_non_fixing_level(const Group& group,
                                                    std::span<const GroupWord> generators,
                                                    std::size_t max_level);

/// Sections of g at the level-k vertices in lexicographic order.
/// Throws Error(not_in_level_stabilizer) when g moves a level-k vertex.
std::vector<GroupWord> psi_sections(const Group& group, const GroupWord& g, std::size_t k);

/// True iff g fixes level |v| and every section at a level-|v| vertex other than v is trivial.
Verdict in_rigid_stabilizer(const Group& group, const GroupWord& g, const Vertex& v,
                            std::size_t budget = kDefaultRecursionBudget);

struct IndexProfile {
  std::vector<BigInt> indices;  // index at levels 1..n_max
  /// "infinite-index-evidence" for a strictly growing tail, "finite-index-evidence"
  /// for a constant tail, otherwise "inconclusive".
  std::string trend;

  nlohmann::json to_json() const;
};

IndexProfile index_growth_profile(const Group& group, std::span<const GroupWord> generators,
                                  std::size_t n_max);

/// Letters used by word searches: x for every generator, plus x^-1 for generators
/// without a known finite order.
std::vector<Letter> search_alphabet(const Group& group);

/// Visits reduced words by increasing length and, within a length, in
/// lexicographic letter order. Stops when `visit` returns false or after
/// `budget` words; returns the number of words visited.
std::size_t for_each_word(const Group& group, std::size_t max_length, std::size_t budget,
                          const std::function<bool(const GroupWord&)>& visit);

/// A word f such that f gamma f^-1 has level-n image outside the level-n image of H.
/// Tries at most `budget` conjugators. Throws Error(precondition) for trivial gamma.
std::optional<GroupWord> conjugate_escaping(const Group& group, const SubgroupHandle& h,
                                            const GroupWord& gamma, std::size_t level,
                                            std::size_t budget);

/// Elements of <generators> when the subgroup is finite with at most `limit`
/// elements; the identity comes first. Element equality is decided by is_identity.
std::optional<std::vector<GroupWord>> enumerate_finite_subgroup(
    const Group& group, std::span<const GroupWord> generators, std::size_t limit);

}  // namespace selfsim
