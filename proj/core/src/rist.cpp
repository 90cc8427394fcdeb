#include "selfsim/rist.hpp"

#include <algorithm>

#include "selfsim/error.hpp"
#include "selfsim/subgroup.hpp"

namespace selfsim {

namespace {

constexpr std::size_t kCarrierMaxLength = 8;
constexpr std::size_t kSeedConjugatorLength = 2;
constexpr std::size_t kCommutatorMaxLength = 8;
constexpr std::size_t kTwistLength = 2;

std::vector<GroupWord> words_up_to(const Group& group, std::size_t length) {
  std::vector<GroupWord> out;
  for_each_word(group, length, static_cast<std::size_t>(-1), [&](const GroupWord& w) {
    out.push_back(w);
    return true;
  });
  return out;
}

std::vector<KTerm> inverted(std::vector<KTerm> terms) {
  std::reverse(terms.begin(), terms.end());
  for (auto& t : terms) t.sign = -t.sign;
  return terms;
}

}  // namespace

RistEngine::RistEngine(const Group& group, std::size_t budget)
    : group_(group), seeds_(group.branching()), budget_(budget) {}

bool RistEngine::spend() {
  if (nodes_ >= budget_) return false;
  ++nodes_;
  return true;
}

KElement RistEngine::seed_conjugate(std::size_t seed, const GroupWord& conjugator) const {
  if (seed >= seeds_.size()) throw Error(Errc::precondition, "no such branching seed");
  return {group_.conjugate(conjugator, seeds_[seed]), {KTerm{seed, conjugator, 1}}};
}

std::optional<GroupWord> RistEngine::generator_carrier(const Letter& l, unsigned child) {
  const auto key = std::make_pair(l.code(), child);
  if (auto it = carriers_.find(key); it != carriers_.end()) return it->second;
  std::optional<GroupWord> found;
  if (l.exp < 0) {
    if (auto positive = generator_carrier(l.inverse(), child)) found = group_.inverse(*positive);
  } else {
    const GroupWord target = group_.reduce(std::vector<Letter>{l});
    const Vertex i(std::vector<std::uint8_t>{static_cast<std::uint8_t>(child)});
    for_each_word(group_, kCarrierMaxLength, static_cast<std::size_t>(-1), [&](const GroupWord& w) {
      if (!spend()) return false;
      auto [image, section] = group_.apply_with_section(w, i);
      if (image != i) return true;
      if (group_.equal(section, target) != Verdict::yes) return true;
      found = w;
      return false;
    });
  }
  if (found || nodes_ < budget_) carriers_.emplace(key, found);
  return found;
}

std::optional<GroupWord> RistEngine::section_carrier(const GroupWord& x, unsigned child) {
  std::vector<GroupWord> factors;
  for (const Letter l : x) {
    auto c = generator_carrier(l, child);
    if (!c) return std::nullopt;
    factors.push_back(std::move(*c));
  }
  GroupWord out;
  for (const auto& f : factors) out = group_.multiply(out, f);
  return out;
}

std::optional<KElement> RistEngine::level_one_seed(std::size_t seed, unsigned child) {
  const auto key = std::make_pair(seed, child);
  if (auto it = level_one_.find(key); it != level_one_.end()) return it->second;

  const Vertex i(std::vector<std::uint8_t>{static_cast<std::uint8_t>(child)});
  const GroupWord& s = seeds_.at(seed);
  const auto conjugators = words_up_to(group_, kSeedConjugatorLength);
  const auto twists = words_up_to(group_, kTwistLength);
  std::optional<KElement> found;
  bool exhausted = false;

  // Candidates [f s f^-1, w] = (f s f^-1)(w f s^-1 f^-1 w^-1) lie in K; accept one that
  // is rigid at i with section h s^(+-1) h^-1 there, and untwist it by the carrier of h.
  for (std::size_t length = 1; length <= kCommutatorMaxLength && !found && !exhausted; ++length) {
    for (const auto& f : conjugators) {
      if (found || exhausted) break;
      const GroupWord fsf = group_.conjugate(f, s);
      for_each_word(group_, length, static_cast<std::size_t>(-1), [&](const GroupWord& w) {
        if (w.size() != length) return true;
        if (!spend()) {
          exhausted = true;
          return false;
        }
        const GroupWord c = group_.commutator(fsf, w);
        if (c.empty()) return true;
        if (in_rigid_stabilizer(group_, c, i) != Verdict::yes) return true;
        const GroupWord t = group_.section(c, i);
        for (const auto& h : twists) {
          int sign = 0;
          if (group_.equal(t, group_.conjugate(h, s)) == Verdict::yes) {
            sign = 1;
          } else if (group_.equal(t, group_.conjugate(h, group_.inverse(s))) == Verdict::yes) {
            sign = -1;
          } else {
            continue;
          }
          auto carrier = section_carrier(h, child);
          if (!carrier) continue;
          const GroupWord untwist = group_.inverse(*carrier);
          KElement e;
          e.word = group_.conjugate(untwist, c);
          e.terms = {KTerm{seed, group_.multiply(untwist, f), 1},
                     KTerm{seed, group_.multiply({untwist, w, f}), -1}};
          if (sign < 0) {
            e.word = group_.inverse(e.word);
            e.terms = inverted(std::move(e.terms));
          }
          found = std::move(e);
          return false;
        }
        return true;
      });
    }
  }
  if (found || !exhausted) level_one_.emplace(key, found);
  return found;
}

std::optional<KElement> RistEngine::lift(const KElement& k, unsigned child) {
  if (child >= group_.degree()) throw Error(Errc::invalid_vertex, "child index exceeds degree");
  KElement out;
  std::vector<Letter> word;
  for (const KTerm& term : k.terms) {
    auto e = level_one_seed(term.seed, child);
    if (!e) return std::nullopt;
    auto carrier = section_carrier(term.conjugator, child);
    if (!carrier) return std::nullopt;
    const GroupWord carrier_inv = group_.inverse(*carrier);
    const GroupWord body = term.sign > 0 ? e->word : group_.inverse(e->word);
    const GroupWord piece = group_.multiply({*carrier, body, carrier_inv});
    word.insert(word.end(), piece.begin(), piece.end());
    for (KTerm t : term.sign > 0 ? e->terms : inverted(e->terms)) {
      t.conjugator = group_.multiply(*carrier, t.conjugator);
      out.terms.push_back(std::move(t));
    }
  }
  out.word = group_.reduce(word);
  return out;
}

std::optional<KElement> RistEngine::lift_to_vertex(const KElement& k, const Vertex& v) {
  std::optional<KElement> current = k;
  for (std::size_t j = v.level(); j-- > 0 && current;) current = lift(*current, v[j]);
  return current;
}

std::optional<GroupWord> rist_element_search(const Group& group, const Vertex& v,
                                             std::size_t budget) {
  if (v.is_root()) throw Error(Errc::precondition, "rist_element_search needs a non-root vertex");
  if (group.branching().empty()) throw Error(Errc::precondition, "preset has no branching seeds");
  if (budget == 0) return std::nullopt;
  RistEngine engine(group, budget);
  auto k = engine.lift_to_vertex(engine.seed_conjugate(0, GroupWord()), v);
  if (!k) return std::nullopt;
  if (in_rigid_stabilizer(group, k->word, v) != Verdict::yes) return std::nullopt;
  if (group.is_identity(k->word) != Verdict::no) return std::nullopt;
  return k->word;
}

}  // namespace selfsim
