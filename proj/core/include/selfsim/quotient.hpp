#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include <nlohmann/json.hpp>

#include "selfsim/group.hpp"
#include "selfsim/perm.hpp"
#include "selfsim/types.hpp"

namespace selfsim {

/// Action of the generators on the d^n lexicographically ordered vertices of level n.
struct LevelAction {
  std::size_t level = 0;
  std::vector<Permutation> generator_images;
};

LevelAction level_action(const Group& group, std::size_t level);

/// A subgroup of the level-n quotient G/Stab_G(n), given by generating permutations.
class PermSubgroup {
 public:
  PermSubgroup() = default;
  PermSubgroup(std::size_t level, PermGroup group) : level_(level), group_(std::move(group)) {}

  std::size_t level() const noexcept { return level_; }
  const PermGroup& group() const noexcept { return group_; }
  const BigInt& order() const noexcept { return group_.order(); }
  bool contains(const Permutation& p) const { return group_.contains(p); }
  bool contains(const Group& g, const GroupWord& w) const {
    return group_.contains(g.level_permutation(w, level_));
  }
  bool operator==(const PermSubgroup& other) const {
    return level_ == other.level_ && group_.same_group(other.group_);
  }

  /// {level, order (decimal string), orbit_sizes}
  nlohmann::json to_json() const;

 private:
  std::size_t level_ = 0;
  PermGroup group_;
};

/// The full image of G at level n.
PermSubgroup level_group(const Group& group, std::size_t level);

/// |G / Stab_G(n)|
BigInt quotient_order(const Group& group, std::size_t level);

bool is_level_transitive(const Group& group, std::size_t level);

PermSubgroup image_subgroup(const Group& group, std::span<const GroupWord> words,
                            std::size_t level);

/// quotient_order(n) / |image of <words> at level n|
BigInt subgroup_index_in_quotient(const Group& group, std::span<const GroupWord> words,
                                  std::size_t level);

/// Schreier generators of Stab_G(v), as words, built from breadth-first coset
/// representatives of the orbit of v. They generate exactly Stab_G(v), so in
/// particular their image at level |v| is the point stabilizer there.
/// Trivial and repeated words are dropped.
std::vector<GroupWord> point_stabilizer_words(const Group& group, const Vertex& v);

/// Coset representative words for the level-|v| action: reps[i] maps v to the
/// vertex of index i in the orbit, chosen breadth-first over the generators.
/// Entries for vertices outside the orbit of v are empty.
std::vector<std::optional<GroupWord>> orbit_representatives(const Group& group, const Vertex& v);

}  // namespace selfsim
