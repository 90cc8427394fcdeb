#include "selfsim/quotient.hpp"

#include <deque>
#include <set>

#include "selfsim/error.hpp"

namespace selfsim {

LevelAction level_action(const Group& group, std::size_t level) {
  LevelAction out;
  out.level = level;
  for (const auto& g : group.generators()) {
    out.generator_images.push_back(group.level_permutation(g, level));
  }
  return out;
}

nlohmann::json PermSubgroup::to_json() const {
  std::vector<std::size_t> sizes;
  for (const auto& orbit : group_.orbits()) sizes.push_back(orbit.size());
  return {{"level", level_}, {"order", to_decimal(order())}, {"orbit_sizes", sizes}};
}

PermSubgroup level_group(const Group& group, std::size_t level) {
  const std::size_t points = group.check_level(level);
  return PermSubgroup(level, PermGroup(points, level_action(group, level).generator_images));
}

BigInt quotient_order(const Group& group, std::size_t level) {
  return level_group(group, level).order();
}

bool is_level_transitive(const Group& group, std::size_t level) {
  return level_group(group, level).group().is_transitive();
}

PermSubgroup image_subgroup(const Group& group, std::span<const GroupWord> words,
                            std::size_t level) {
  const std::size_t points = group.check_level(level);
  std::vector<Permutation> images;
  images.reserve(words.size());
  for (const auto& w : words) images.push_back(group.level_permutation(w, level));
  return PermSubgroup(level, PermGroup(points, std::move(images)));
}

BigInt subgroup_index_in_quotient(const Group& group, std::span<const GroupWord> words,
                                  std::size_t level) {
  return quotient_order(group, level) / image_subgroup(group, words, level).order();
}

std::vector<std::optional<GroupWord>> orbit_representatives(const Group& group, const Vertex& v) {
  const std::size_t level = v.level();
  const std::size_t points = group.check_level(level);
  const auto action = level_action(group, level);
  const auto gens = group.generators();

  std::vector<std::optional<GroupWord>> reps(points);
  const auto start = static_cast<std::uint32_t>(vertex_index(v, group.degree()));
  reps[start] = GroupWord();
  std::deque<std::uint32_t> queue{start};
  while (!queue.empty()) {
    const std::uint32_t p = queue.front();
    queue.pop_front();
    for (std::size_t s = 0; s < gens.size(); ++s) {
      const std::uint32_t q = action.generator_images[s](p);
      if (reps[q]) continue;
      reps[q] = group.multiply(gens[s], *reps[p]);
      queue.push_back(q);
    }
  }
  return reps;
}

std::vector<GroupWord> point_stabilizer_words(const Group& group, const Vertex& v) {
  const std::size_t level = v.level();
  const auto reps = orbit_representatives(group, v);
  const auto action = level_action(group, level);
  const auto gens = group.generators();

  std::vector<GroupWord> out;
  std::set<GroupWord> seen;
  for (std::uint32_t p = 0; p < reps.size(); ++p) {
    if (!reps[p]) continue;
    for (std::size_t s = 0; s < gens.size(); ++s) {
      const std::uint32_t q = action.generator_images[s](p);
      GroupWord w = group.multiply({group.inverse(*reps[q]), gens[s], *reps[p]});
      if (w.empty() || !seen.insert(w).second) continue;
      out.push_back(std::move(w));
    }
  }
  return out;
}

}  // namespace selfsim
