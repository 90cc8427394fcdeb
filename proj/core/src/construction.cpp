#include "selfsim/construction.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "selfsim/error.hpp"
#include "selfsim/quotient.hpp"

namespace selfsim {

namespace {

constexpr std::size_t kFiniteLimit = 4096;
constexpr std::size_t kLiftMaxLength = 24;

/// Level used for the fast inequality filter in finite-subgroup membership.
std::size_t filter_level(const Group& group) {
  std::size_t level = 0;
  while (level < 8 && level_size(group.degree(), level + 1) <= group.max_level_points()) ++level;
  return level;
}

/// Exact membership in a finite subgroup listed element by element.
class FiniteMembership {
 public:
  FiniteMembership(const Group& group, std::vector<GroupWord> elements)
      : group_(group), level_(filter_level(group)), elements_(std::move(elements)) {
    for (std::size_t i = 0; i < elements_.size(); ++i) {
      by_image_.emplace(group_.level_permutation(elements_[i], level_), i);
    }
  }

  bool contains(const GroupWord& w) const {
    auto [lo, hi] = by_image_.equal_range(group_.level_permutation(w, level_));
    for (auto it = lo; it != hi; ++it) {
      if (group_.equal(w, elements_[it->second]) == Verdict::yes) return true;
    }
    return false;
  }

 private:
  const Group& group_;
  std::size_t level_;
  std::vector<GroupWord> elements_;
  std::multimap<Permutation, std::size_t> by_image_;
};

std::vector<std::string> format_all(const Group& group, std::span<const GroupWord> words) {
  std::vector<std::string> out;
  for (const auto& w : words) out.push_back(group.format(w));
  return out;
}

}  // namespace

SubgroupHandle parabolic_approximation(const Group& group, const Vertex& v, std::size_t level) {
  if (v.level() > level) throw Error(Errc::precondition, "vertex deeper than the approximation level");
  const Vertex target = v.concat(zeros(level - v.level()));
  return SubgroupHandle(group, point_stabilizer_words(group, target), level);
}

nlohmann::json PullbackResult::to_json(const Group& group) const {
  return {{"subgroup", handle.to_json(group)},
          {"candidates", candidates},
          {"budget_exhausted", budget_exhausted},
          {"section_membership", membership}};
}

PullbackResult pullback_subgroup(const Group& group, const SubgroupHandle& delta, std::size_t k,
                                 std::size_t n, std::size_t budget) {
  if (k >= n) throw Error(Errc::precondition, "pullback needs k < n");
  if (!delta.membership_level()) {
    throw Error(Errc::precondition, "pullback needs a membership level on Delta");
  }
  group.check_level(n);

  std::optional<FiniteMembership> finite;
  if (auto elements = enumerate_finite_subgroup(group, delta.generators(), kFiniteLimit)) {
    finite.emplace(group, std::move(*elements));
  }
  auto in_delta = [&](const GroupWord& w) {
    return finite ? finite->contains(w) : delta.image_contains(group, w);
  };

  // Breadth-first coset representatives of G / Stab_G(k).
  const auto gens = group.generators();
  const auto action = level_action(group, k);
  std::vector<GroupWord> reps{GroupWord()};
  std::vector<Permutation> rep_images{Permutation(group.check_level(k))};
  std::map<Permutation, std::size_t> index{{rep_images[0], 0}};
  for (std::size_t i = 0; i < reps.size(); ++i) {
    for (std::size_t s = 0; s < gens.size(); ++s) {
      Permutation p = action.generator_images[s] * rep_images[i];
      if (index.count(p)) continue;
      index.emplace(p, reps.size());
      reps.push_back(group.multiply(gens[s], reps[i]));
      rep_images.push_back(std::move(p));
    }
  }

  PullbackResult out;
  out.membership = finite ? "exact" : "level-" + std::to_string(*delta.membership_level());
  const Vertex corner = zeros(k);
  std::vector<GroupWord> kept;
  std::set<GroupWord> seen;
  for (std::size_t i = 0; i < reps.size() && !out.budget_exhausted; ++i) {
    for (std::size_t s = 0; s < gens.size(); ++s) {
      const std::size_t j = index.at(action.generator_images[s] * rep_images[i]);
      GroupWord g = group.multiply({group.inverse(reps[j]), gens[s], reps[i]});
      if (g.empty() || !seen.insert(g).second) continue;
      if (out.candidates >= budget) {
        out.budget_exhausted = true;
        break;
      }
      ++out.candidates;
      if (in_delta(group.section(g, corner))) kept.push_back(std::move(g));
    }
  }
  out.handle = SubgroupHandle(group, std::move(kept), n);
  out.handle.mark_under_approximation();
  return out;
}

nlohmann::json TrapReport::to_json() const {
  nlohmann::json out = {{"k", k},
                        {"l", l},
                        {"fixes_level_k", fixes_level},
                        {"no_fixed_vertex_at_k_plus_l", no_fixed_vertex},
                        {"pass", pass()}};
  if (moving_generator) out["moving_generator"] = *moving_generator;
  if (moved_vertex) out["moved_vertex"] = moved_vertex->str();
  if (fixed_vertex) out["fixed_vertex"] = fixed_vertex->str();
  return out;
}

TrapReport level_trap_check(const Group& group, std::span<const GroupWord> generators,
                            std::size_t k, std::size_t l) {
  if (l < 1) throw Error(Errc::precondition, "trap depth l must be at least 1");
  TrapReport out;
  out.k = k;
  out.l = l;
  out.fixes_level = true;
  for (const auto& g : generators) {
    try {
      psi_sections(group, g, k);
    } catch (const Error& e) {
      if (e.code() != Errc::not_in_level_stabilizer) throw;
      out.fixes_level = false;
      out.moving_generator = group.format(g);
      for (const auto& v : level_vertices(group.degree(), k)) {
        if (group.apply(g, v) != v) {
          out.moved_vertex = v;
          break;
        }
      }
      break;
    }
  }
  const auto fixed = fixed_vertices(group, generators, k + l);
  out.no_fixed_vertex = fixed.empty();
  if (!fixed.empty()) out.fixed_vertex = fixed.front();
  return out;
}

nlohmann::json TrapConstruction::to_json(const Group& group) const {
  return {{"delta", delta.to_json(group)},
          {"subgroup", subgroup.to_json(group)},
          {"q_lifts", format_all(group, q_lifts)},
          {"pullback_candidates", pullback_candidates},
          {"trap", report.to_json()}};
}

std::optional<TrapConstruction> construct_trap_subgroup(const Group& group,
                                                        std::span<const GroupWord> q,
                                                        std::size_t k, std::size_t l,
                                                        std::size_t n, std::size_t budget) {
  const std::vector<GroupWord> q_words(q.begin(), q.end());
  if (!enumerate_finite_subgroup(group, q_words, kFiniteLimit)) {
    throw Error(Errc::precondition, "Q must be a finite subgroup");
  }

  // Words fixing level k with section q at 0^k; they lie in every pullback of a Delta containing Q.
  const Vertex corner = zeros(k);
  std::vector<GroupWord> lifts;
  for (const auto& x : q_words) {
    if (group.is_identity(x) == Verdict::yes) continue;
    std::optional<GroupWord> found;
    for_each_word(group, kLiftMaxLength, budget, [&](const GroupWord& w) {
      if (!group.level_permutation(w, k).is_identity()) return true;
      if (group.equal(group.section(w, corner), x) != Verdict::yes) return true;
      found = w;
      return false;
    });
    if (found) lifts.push_back(std::move(*found));
  }

  std::vector<std::vector<GroupWord>> deltas{q_words};
  for (const auto& x : group.generators()) {
    if (std::find(q_words.begin(), q_words.end(), x) != q_words.end()) continue;
    auto extended = q_words;
    extended.push_back(x);
    if (enumerate_finite_subgroup(group, extended, kFiniteLimit)) deltas.push_back(std::move(extended));
  }

  std::optional<TrapConstruction> last;
  for (auto& delta_words : deltas) {
    SubgroupHandle delta(group, delta_words, n);
    auto pulled = pullback_subgroup(group, delta, k, n, budget);
    auto gens = pulled.handle.generators();
    for (const auto& x : lifts) {
      if (std::find(gens.begin(), gens.end(), x) == gens.end()) gens.push_back(x);
    }
    TrapConstruction c;
    c.delta = std::move(delta);
    c.report = level_trap_check(group, gens, k, l);
    c.subgroup = SubgroupHandle(group, std::move(gens), n);
    c.subgroup.mark_under_approximation();
    c.q_lifts = lifts;
    c.pullback_candidates = pulled.candidates;
    const bool pass = c.report.pass();
    last = std::move(c);
    if (pass) return last;
  }
  return last;
}

nlohmann::json SeparationWitness::to_json() const {
  return {{"level", level}, {"fixing_side", first_fixes ? "first" : "second"},
          {"fixed_vertex", fixed.str()}};
}

std::optional<SeparationWitness> fix_separation_witness(const Group& group,
                                                        std::span<const GroupWord> first,
                                                        std::span<const GroupWord> second,
                                                        std::size_t depth) {
  if (depth < 1) throw Error(Errc::precondition, "depth must be at least 1");
  const FixedTree a = fixed_tree(group, first, depth);
  const FixedTree b = fixed_tree(group, second, depth);
  for (std::size_t t = 1; t <= depth; ++t) {
    const auto fa = a.level(t);
    const auto fb = b.level(t);
    if (fa.empty() == fb.empty()) continue;
    SeparationWitness w;
    w.level = t;
    w.first_fixes = !fa.empty();
    w.fixed = w.first_fixes ? fa.front() : fb.front();
    return w;
  }
  return std::nullopt;
}

nlohmann::json ConjugateBound::to_json(const Group& group) const {
  nlohmann::json out = {{"bound", bound}, {"candidates", candidates}};
  out["gamma"] = gamma ? nlohmann::json(group.format(*gamma)) : nlohmann::json(nullptr);
  out["gamma_order"] = to_decimal(gamma_order);
  out["escaping_conjugator"] = escaping ? nlohmann::json(group.format(*escaping)) : nlohmann::json(nullptr);
  out["conjugators"] = format_all(group, conjugators);
  std::vector<std::string> orders;
  for (const auto& o : image_orders) orders.push_back(to_decimal(o));
  out["image_orders"] = orders;
  return out;
}

namespace {

/// (p, e) when m = p^e with p prime and e >= 1.
std::optional<std::pair<BigInt, unsigned>> prime_power(BigInt m) {
  if (m < 2) return std::nullopt;
  BigInt p = 2;
  while (p * p <= m && m % p != 0) ++p;
  if (m % p != 0) p = m;
  unsigned e = 0;
  while (m % p == 0) {
    m /= p;
    ++e;
  }
  if (m != 1) return std::nullopt;
  return std::make_pair(p, e);
}

}  // namespace

ConjugateBound conjugate_count_lower_bound(const Group& group, const SubgroupHandle& h,
                                           std::size_t n, std::size_t budget,
                                           std::size_t gamma_max_length) {
  if (h.membership_level() && *h.membership_level() > n) {
    throw Error(Errc::precondition, "subgroup membership level exceeds n");
  }
  const PermSubgroup h_image = h.image_at(group, n);
  ConjugateBound best;
  for_each_word(group, gamma_max_length, budget, [&](const GroupWord& gamma) {
    if (gamma.empty()) return true;
    ++best.candidates;
    const auto order = group.element_order(gamma);
    if (!order.finite()) return true;
    const auto pe = prime_power(order.order);
    if (!pe) return true;
    const GroupWord core = group.power(gamma, static_cast<long>(order.order / pe->first));
    auto f = conjugate_escaping(group, h, core, n, budget);
    if (!f) return true;

    std::vector<GroupWord> conjugators;
    std::vector<PermSubgroup> images;
    const long count = static_cast<long>(order.order);
    for (long i = 0; i < count; ++i) {
      GroupWord c = group.multiply(*f, group.power(gamma, i));
      PermSubgroup image = h.conjugated(group, c).image_at(group, n);
      const bool fresh = std::none_of(images.begin(), images.end(),
                                      [&](const PermSubgroup& seen) { return seen == image; });
      if (!fresh) continue;
      conjugators.push_back(std::move(c));
      images.push_back(std::move(image));
    }
    if (conjugators.size() > best.bound) {
      best.bound = conjugators.size();
      best.gamma = gamma;
      best.gamma_order = order.order;
      best.escaping = f;
      best.conjugators = std::move(conjugators);
      best.image_orders.clear();
      for (const auto& im : images) best.image_orders.push_back(im.order());
    }
    return true;
  });
  return best;
}

}  // namespace selfsim
