#include "selfsim/subgroup.hpp"

#include <algorithm>
#include <deque>
#include <map>

#include "selfsim/error.hpp"

namespace selfsim {

SubgroupHandle::SubgroupHandle(const Group& group, std::vector<GroupWord> generators,
                               std::optional<std::size_t> membership_level)
    : generators_(std::move(generators)), membership_level_(membership_level) {
  if (membership_level_) {
    image_ = std::make_shared<const PermSubgroup>(
        image_subgroup(group, generators_, *membership_level_));
  }
}

const PermSubgroup& SubgroupHandle::image() const {
  if (!image_) throw Error(Errc::precondition, "subgroup has no membership level");
  return *image_;
}

PermSubgroup SubgroupHandle::image_at(const Group& group, std::size_t level) const {
  if (image_ && image_->level() == level) return *image_;
  return image_subgroup(group, generators_, level);
}

bool SubgroupHandle::image_contains(const Group& group, const GroupWord& w) const {
  return image().contains(group, w);
}

SubgroupHandle SubgroupHandle::with_level(const Group& group, std::size_t level) const {
  SubgroupHandle out(group, generators_, level);
  out.under_approximation_ = under_approximation_;
  return out;
}

SubgroupHandle SubgroupHandle::conjugated(const Group& group, const GroupWord& f) const {
  std::vector<GroupWord> gens;
  gens.reserve(generators_.size());
  for (const auto& g : generators_) gens.push_back(group.conjugate(f, g));
  SubgroupHandle out(group, std::move(gens), membership_level_);
  out.under_approximation_ = under_approximation_;
  return out;
}

nlohmann::json SubgroupHandle::to_json(const Group& group) const {
  std::vector<std::string> words;
  for (const auto& g : generators_) words.push_back(group.format(g));
  nlohmann::json out = {{"generators", words},
                        {"under_approximation", under_approximation_}};
  if (membership_level_) {
    out["membership_level"] = *membership_level_;
    out["image"] = image_->to_json();
  } else {
    out["membership_level"] = nullptr;
  }
  return out;
}

std::vector<Vertex> FixedTree::level(std::size_t n) const {
  std::vector<Vertex> out;
  for (const auto& v : vertices) {
    if (v.level() == n) out.push_back(v);
  }
  return out;
}

nlohmann::json FixedTree::to_json() const {
  std::vector<std::string> listed;
  for (const auto& v : vertices) listed.push_back(v.str());
  return {{"depth", depth}, {"vertices", listed}, {"deepest", deepest.str()},
          {"deepest_level", deepest.level()}};
}

FixedTree fixed_tree(const Group& group, std::span<const GroupWord> generators,
                     std::size_t depth) {
  FixedTree out;
  out.depth = depth;
  // Frontier of fixed vertices together with each generator's section there.
  std::vector<std::pair<Vertex, std::vector<GroupWord>>> frontier{
      {Vertex(), std::vector<GroupWord>(generators.begin(), generators.end())}};
  out.vertices.insert(Vertex());
  for (std::size_t level = 0; level < depth && !frontier.empty(); ++level) {
    std::vector<std::pair<Vertex, std::vector<GroupWord>>> next;
    for (const auto& [v, sections] : frontier) {
      std::vector<Wreath> wreaths;
      wreaths.reserve(sections.size());
      for (const auto& s : sections) wreaths.push_back(group.decompose(s));
      for (unsigned i = 0; i < group.degree(); ++i) {
        const bool fixed = std::all_of(wreaths.begin(), wreaths.end(),
                                       [i](const Wreath& w) { return w.root_perm[i] == i; });
        if (!fixed) continue;
        std::vector<GroupWord> child_sections;
        child_sections.reserve(wreaths.size());
        for (const auto& w : wreaths) child_sections.push_back(w.sections[i]);
        next.emplace_back(v.child(i), std::move(child_sections));
      }
    }
    for (const auto& entry : next) out.vertices.insert(entry.first);
    frontier = std::move(next);
  }
  for (const auto& v : out.vertices) {
    if (v.level() > out.deepest.level()) out.deepest = v;
  }
  return out;
}

std::vector<Vertex> fixed_vertices(const Group& group, std::span<const GroupWord> generators,
                                   std::size_t level) {
  return fixed_tree(group, generators, level).level(level);
}

std::optional<std::size_t> minimal_non_fixing_level(const Group& group,
                                                    std::span<const GroupWord> generators,
                                                    std::size_t max_level) {
  if (max_level < 1) throw Error(Errc::precondition, "max_level must be at least 1");
  const FixedTree tree = fixed_tree(group, generators, max_level);
  for (std::size_t l = 1; l <= max_level; ++l) {
    if (tree.level(l).empty()) return l;
  }
  return std::nullopt;
}

std::vector<GroupWord> psi_sections(const Group& group, const GroupWord& g, std::size_t k) {
  std::vector<GroupWord> current{g};
  for (std::size_t level = 0; level < k; ++level) {
    std::vector<GroupWord> next;
    next.reserve(current.size() * group.degree());
    for (std::size_t idx = 0; idx < current.size(); ++idx) {
      auto wreath = group.decompose(current[idx]);
      for (unsigned i = 0; i < group.degree(); ++i) {
        if (wreath.root_perm[i] != i) {
          const Vertex where = vertex_at(idx, group.degree(), level).child(i);
          throw Error(Errc::not_in_level_stabilizer,
                      group.format(g) + " moves vertex \"" + where.str() + "\" of level " +
                          std::to_string(level + 1));
        }
        next.push_back(std::move(wreath.sections[i]));
      }
    }
    current = std::move(next);
  }
  return current;
}

Verdict in_rigid_stabilizer(const Group& group, const GroupWord& g, const Vertex& v,
                            std::size_t budget) {
  GroupWord current = g;
  bool undecided = false;
  for (std::size_t level = 0; level < v.level(); ++level) {
    auto wreath = group.decompose(current);
    for (unsigned i = 0; i < group.degree(); ++i) {
      if (wreath.root_perm[i] != i) return Verdict::no;
    }
    for (unsigned i = 0; i < group.degree(); ++i) {
      if (i == v[level]) continue;
      const Verdict trivial = group.is_identity(wreath.sections[i], budget);
      if (trivial == Verdict::no) return Verdict::no;
      if (trivial == Verdict::undecided) undecided = true;
    }
    current = std::move(wreath.sections[v[level]]);
  }
  return undecided ? Verdict::undecided : Verdict::yes;
}

nlohmann::json IndexProfile::to_json() const {
  std::vector<std::string> listed;
  for (const auto& i : indices) listed.push_back(to_decimal(i));
  return {{"indices", listed}, {"trend", trend}};
}

IndexProfile index_growth_profile(const Group& group, std::span<const GroupWord> generators,
                                  std::size_t n_max) {
  if (n_max < 1) throw Error(Errc::precondition, "n_max must be at least 1");
  IndexProfile out;
  for (std::size_t n = 1; n <= n_max; ++n) {
    out.indices.push_back(subgroup_index_in_quotient(group, generators, n));
  }
  out.trend = "inconclusive";
  if (out.indices.size() >= 2) {
    const auto& last = out.indices.back();
    const auto& before = out.indices[out.indices.size() - 2];
    if (last > before) out.trend = "infinite-index-evidence";
    if (last == before) out.trend = "finite-index-evidence";
  }
  return out;
}

std::vector<Letter> search_alphabet(const Group& group) {
  std::vector<Letter> out;
  for (std::size_t g = 0; g < group.generator_count(); ++g) {
    const auto gen = static_cast<std::uint16_t>(g);
    out.push_back(Letter{gen, 1});
    if (!group.rewriting().generator_order(g)) out.push_back(Letter{gen, -1});
  }
  std::sort(out.begin(), out.end());
  return out;
}

namespace {

class WordWalker {
 public:
  WordWalker(const Group& group, std::size_t budget,
             const std::function<bool(const GroupWord&)>& visit)
      : group_(group), alphabet_(search_alphabet(group)), budget_(budget), visit_(visit) {}

  /// Returns false once the walk must stop.
  bool walk(std::size_t length) {
    if (stack_.size() == length) {
      if (visited_ >= budget_) return false;
      ++visited_;
      return visit_(GroupWord(stack_));
    }
    for (const Letter x : alphabet_) {
      if (!group_.rewriting().extends_irreducibly(stack_, x)) continue;
      stack_.push_back(x);
      const bool go_on = walk(length);
      stack_.pop_back();
      if (!go_on) return false;
    }
    return true;
  }

  std::size_t visited() const noexcept { return visited_; }

 private:
  const Group& group_;
  std::vector<Letter> alphabet_;
  std::vector<Letter> stack_;
  std::size_t budget_;
  std::size_t visited_ = 0;
  const std::function<bool(const GroupWord&)>& visit_;
};

}  // namespace

std::size_t for_each_word(const Group& group, std::size_t max_length, std::size_t budget,
                          const std::function<bool(const GroupWord&)>& visit) {
  WordWalker walker(group, budget, visit);
  for (std::size_t length = 0; length <= max_length; ++length) {
    if (!walker.walk(length)) break;
  }
  return walker.visited();
}

std::optional<GroupWord> conjugate_escaping(const Group& group, const SubgroupHandle& h,
                                            const GroupWord& gamma, std::size_t level,
                                            std::size_t budget) {
  if (group.is_identity(gamma) == Verdict::yes) {
    throw Error(Errc::precondition, "conjugate_escaping needs a nontrivial element");
  }
  if (h.membership_level() && *h.membership_level() > level) {
    throw Error(Errc::precondition, "subgroup membership level exceeds the search level");
  }
  const PermSubgroup image = h.image_at(group, level);
  const Permutation g = group.level_permutation(gamma, level);
  std::optional<GroupWord> found;
  for_each_word(group, 64, budget, [&](const GroupWord& f) {
    const Permutation pf = group.level_permutation(f, level);
    if (!image.contains(pf * g * pf.inverse())) {
      found = f;
      return false;
    }
    return true;
  });
  return found;
}

std::optional<std::vector<GroupWord>> enumerate_finite_subgroup(
    const Group& group, std::span<const GroupWord> generators, std::size_t limit) {
  // Level images give a fast inequality test; equal images fall back to is_identity.
  std::size_t level = 0;
  while (level < 8 && level_size(group.degree(), level + 1) <= group.max_level_points()) ++level;

  std::vector<GroupWord> elements{GroupWord()};
  std::multimap<Permutation, std::size_t> by_image;
  by_image.emplace(group.level_permutation(GroupWord(), level), 0);
  std::deque<std::size_t> queue{0};
  while (!queue.empty()) {
    const GroupWord current = elements[queue.front()];
    queue.pop_front();
    for (const auto& s : generators) {
      GroupWord candidate = group.multiply(s, current);
      Permutation image = group.level_permutation(candidate, level);
      bool known = false;
      auto [lo, hi] = by_image.equal_range(image);
      for (auto it = lo; it != hi && !known; ++it) {
        const Verdict same = group.equal(candidate, elements[it->second]);
        if (same == Verdict::undecided) return std::nullopt;
        known = same == Verdict::yes;
      }
      if (known) continue;
      if (elements.size() >= limit) return std::nullopt;
      by_image.emplace(std::move(image), elements.size());
      queue.push_back(elements.size());
      elements.push_back(std::move(candidate));
    }
  }
  return elements;
}

}  // namespace selfsim
