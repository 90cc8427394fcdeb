#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <vector>

#include "selfsim/group.hpp"

namespace selfsim {

/// One factor (conjugator · seed^sign · conjugator^-1) of an element of the
/// branching subgroup K, where seed indexes Group::branching().
struct KTerm {
  std::size_t seed = 0;
  GroupWord conjugator;
  int sign = 1;
};

/// An element of K together with an explicit expression as a product of
/// conjugates of branching seeds.
struct KElement {
  GroupWord word;
  std::vector<KTerm> terms;
};

/// Produces elements of rigid vertex stabilizers by lifting K-elements down the
/// tree. For every level-one vertex i and seed s it searches an element E(i,s)
/// of K that acts as s below i and trivially elsewhere; any K-element written in
/// seeds then lifts term by term. Searches are deterministic and share one budget.
class RistEngine {
 public:
  RistEngine(const Group& group, std::size_t budget);

  const Group& group() const noexcept { return group_; }
  std::size_t nodes_used() const noexcept { return nodes_; }
  std::size_t budget() const noexcept { return budget_; }

  /// conjugator · seed · conjugator^-1 as a K-element.
  KElement seed_conjugate(std::size_t seed, const GroupWord& conjugator) const;

  /// A K-element rigid at child i with section k at i.
  std::optional<KElement> lift(const KElement& k, unsigned child);

  /// A K-element rigid at v whose section at v is k (k itself for the root).
  std::optional<KElement> lift_to_vertex(const KElement& k, const Vertex& v);

  /// A word fixing child i whose section at i equals x, for x a generator word.
  std::optional<GroupWord> section_carrier(const GroupWord& x, unsigned child);

 private:
  std::optional<KElement> level_one_seed(std::size_t seed, unsigned child);
  std::optional<GroupWord> generator_carrier(const Letter& l, unsigned child);
  bool spend();

  const Group& group_;
  std::vector<GroupWord> seeds_;
  std::size_t budget_;
  std::size_t nodes_ = 0;
  std::map<std::pair<unsigned, unsigned>, std::optional<GroupWord>> carriers_;  // (letter code, child)
  std::map<std::pair<std::size_t, unsigned>, std::optional<KElement>> level_one_;  // (seed, child)
};

/// A nontrivial word in Rist_G(v), verified with in_rigid_stabilizer; the
/// lift of the first branching seed to v.
std::optional<GroupWord> rist_element_search(const Group& group, const Vertex& v,
                                             std::size_t budget);

}  // namespace selfsim
