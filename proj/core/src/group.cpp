#include "selfsim/group.hpp"

#include <algorithm>
#include <numeric>
#include <unordered_map>
#include <unordered_set>

#include <boost/integer/common_factor.hpp>

#include "selfsim/error.hpp"

namespace selfsim {

namespace {

/// Hard ceiling for recursions on certified presets. Reaching it means the
/// preset is not contracting after all.
constexpr std::size_t kCertifiedSafetyCap = 50'000'000;

}  // namespace

bool Portrait::is_trivial() const {
  return std::all_of(decorations.begin(), decorations.end(), [](const auto& kv) {
    for (unsigned i = 0; i < kv.second.size(); ++i) {
      if (kv.second[i] != i) return false;
    }
    return true;
  });
}

Vertex Portrait::act(const Vertex& v) const {
  if (v.level() > depth) throw Error(Errc::precondition, "vertex deeper than portrait");
  std::vector<std::uint8_t> out;
  for (std::size_t i = 0; i < v.level(); ++i) {
    const auto& perm = decorations.at(v.prefix(i));
    out.push_back(static_cast<std::uint8_t>(perm[v[i]]));
  }
  return Vertex(std::move(out));
}

nlohmann::json portrait_to_json(const Portrait& p) {
  nlohmann::json decorations = nlohmann::json::object();
  for (const auto& [v, perm] : p.decorations) decorations[v.str()] = perm;
  return {{"depth", p.depth}, {"decorations", decorations}};
}

Group::Group(GroupPreset preset) : preset_(std::move(preset)) {
  const auto report = validate_preset(preset_);
  if (!report.ok()) {
    std::string msg = "invalid preset:";
    for (const auto& issue : report.issues) {
      msg += "\n  " + issue.kind + " at " + issue.location + ": " + issue.message;
    }
    throw Error(Errc::invalid_preset, msg);
  }
  names_ = preset_.generator_names();
  fingerprint_ = preset_fingerprint(preset_);

  std::vector<RewritingSystem::Rule> rules;
  for (const auto& r : preset_.rules) {
    rules.push_back({parse_letters(r.lhs, names_), parse_letters(r.rhs, names_)});
  }
  rewriting_ = RewritingSystem(names_.size(), std::move(rules));

  const unsigned d = preset_.degree;
  letters_.resize(2 * names_.size());
  for (std::size_t g = 0; g < names_.size(); ++g) {
    const auto& rec = preset_.generators[g];
    LetterData fwd;
    fwd.perm = rec.root_perm;
    for (const auto& s : rec.sections) fwd.sections.push_back(parse(s));

    LetterData inv;
    inv.perm.assign(d, 0);
    for (unsigned i = 0; i < d; ++i) inv.perm[fwd.perm[i]] = i;
    // (x^-1)_i = (x_{x^-1(i)})^-1
    inv.sections.resize(d);
    for (unsigned i = 0; i < d; ++i) inv.sections[i] = inverse(fwd.sections[inv.perm[i]]);

    const auto gen = static_cast<std::uint16_t>(g);
    letters_[Letter{gen, 1}.code()] = std::move(fwd);
    letters_[Letter{gen, -1}.code()] = std::move(inv);
  }
}

GroupWord Group::parse(std::string_view text) const {
  return rewriting_.reduce(parse_letters(text, names_));
}

std::string Group::format(const GroupWord& w) const { return format_letters(w.letters(), names_); }

GroupWord Group::generator(std::size_t index) const {
  return reduce(std::vector<Letter>{Letter{static_cast<std::uint16_t>(index), 1}});
}

std::vector<GroupWord> Group::generators() const {
  std::vector<GroupWord> out;
  for (std::size_t i = 0; i < names_.size(); ++i) out.push_back(generator(i));
  return out;
}

std::vector<GroupWord> Group::branching() const {
  std::vector<GroupWord> out;
  for (const auto& s : preset_.branching) out.push_back(parse(s));
  return out;
}

GroupWord Group::multiply(const GroupWord& a, const GroupWord& b) const {
  std::vector<Letter> stack(a.begin(), a.end());
  for (auto l : b) rewriting_.push(stack, l);
  return GroupWord(std::move(stack));
}

GroupWord Group::multiply(std::initializer_list<GroupWord> factors) const {
  std::vector<Letter> stack;
  for (const auto& f : factors) {
    for (auto l : f) rewriting_.push(stack, l);
  }
  return GroupWord(std::move(stack));
}

GroupWord Group::inverse(const GroupWord& a) const {
  std::vector<Letter> stack;
  for (auto it = a.letters().rbegin(); it != a.letters().rend(); ++it) {
    rewriting_.push(stack, it->inverse());
  }
  return GroupWord(std::move(stack));
}

GroupWord Group::power(const GroupWord& a, long k) const {
  const GroupWord base = k < 0 ? inverse(a) : a;
  const long n = k < 0 ? -k : k;
  std::vector<Letter> stack;
  for (long i = 0; i < n; ++i) {
    for (auto l : base) rewriting_.push(stack, l);
  }
  return GroupWord(std::move(stack));
}

GroupWord Group::conjugate(const GroupWord& f, const GroupWord& g) const {
  return multiply({f, g, inverse(f)});
}

GroupWord Group::commutator(const GroupWord& a, const GroupWord& b) const {
  return multiply({a, b, inverse(a), inverse(b)});
}

Wreath Group::decompose(const GroupWord& g) const {
  const unsigned d = degree();
  Wreath out;
  out.root_perm.resize(d);
  out.sections.resize(d);
  std::vector<const GroupWord*> pieces(g.size());
  for (unsigned i = 0; i < d; ++i) {
    unsigned p = i;
    for (std::size_t j = g.size(); j-- > 0;) {
      const auto& data = letter(g[j]);
      pieces[j] = &data.sections[p];
      p = data.perm[p];
    }
    out.root_perm[i] = p;
    std::vector<Letter> stack;
    for (const GroupWord* piece : pieces) {
      for (auto l : *piece) rewriting_.push(stack, l);
    }
    out.sections[i] = GroupWord(std::move(stack));
  }
  return out;
}

std::vector<unsigned> Group::root_permutation(const GroupWord& g) const {
  std::vector<unsigned> perm(degree());
  for (unsigned i = 0; i < degree(); ++i) {
    unsigned p = i;
    for (std::size_t j = g.size(); j-- > 0;) p = letter(g[j]).perm[p];
    perm[i] = p;
  }
  return perm;
}

std::pair<Vertex, GroupWord> Group::apply_with_section(const GroupWord& g, const Vertex& v) const {
  for (auto x : v.letters()) {
    if (x >= degree()) throw Error(Errc::invalid_vertex, "vertex letter exceeds degree");
  }
  GroupWord current = g;
  std::vector<std::uint8_t> image;
  image.reserve(v.level());
  std::vector<const GroupWord*> pieces;
  for (auto x : v.letters()) {
    unsigned p = x;
    pieces.resize(current.size());
    for (std::size_t j = current.size(); j-- > 0;) {
      const auto& data = letter(current[j]);
      pieces[j] = &data.sections[p];
      p = data.perm[p];
    }
    image.push_back(static_cast<std::uint8_t>(p));
    std::vector<Letter> stack;
    for (const GroupWord* piece : pieces) {
      for (auto l : *piece) rewriting_.push(stack, l);
    }
    current = GroupWord(std::move(stack));
  }
  return {Vertex(std::move(image)), std::move(current)};
}

Vertex Group::apply(const GroupWord& g, const Vertex& v) const {
  return apply_with_section(g, v).first;
}

GroupWord Group::section(const GroupWord& g, const Vertex& v) const {
  return apply_with_section(g, v).second;
}

Verdict Group::is_identity(const GroupWord& g, std::size_t budget) const {
  const std::size_t cap = contracting() ? kCertifiedSafetyCap : budget;
  // The element is trivial iff every word reachable through sections has a
  // trivial root permutation; cycles among visited words are consistent with that.
  std::unordered_set<GroupWord> seen;
  std::vector<GroupWord> todo{g};
  seen.insert(g);
  std::size_t nodes = 0;
  while (!todo.empty()) {
    GroupWord w = std::move(todo.back());
    todo.pop_back();
    if (w.empty()) continue;
    if (++nodes > cap) {
      if (contracting()) {
        throw Error(Errc::internal,
                    "identity recursion exceeded the safety cap on a preset certified contracting");
      }
      return Verdict::undecided;
    }
    const auto perm = root_permutation(w);
    for (unsigned i = 0; i < perm.size(); ++i) {
      if (perm[i] != i) return Verdict::no;
    }
    auto wreath = decompose(w);
    for (auto& s : wreath.sections) {
      if (!s.empty() && seen.insert(s).second) todo.push_back(std::move(s));
    }
  }
  return Verdict::yes;
}

Verdict Group::equal(const GroupWord& a, const GroupWord& b, std::size_t budget) const {
  if (a == b) return Verdict::yes;
  return is_identity(multiply(a, inverse(b)), budget);
}

Portrait Group::portrait(const GroupWord& g, std::size_t depth) const {
  Portrait out;
  out.depth = depth;
  std::vector<std::pair<Vertex, GroupWord>> frontier{{Vertex(), g}};
  for (std::size_t level = 0; level < depth; ++level) {
    std::vector<std::pair<Vertex, GroupWord>> next;
    for (auto& [v, w] : frontier) {
      auto wreath = decompose(w);
      out.decorations.emplace(v, wreath.root_perm);
      if (level + 1 < depth) {
        for (unsigned i = 0; i < degree(); ++i) next.emplace_back(v.child(i), std::move(wreath.sections[i]));
      }
    }
    frontier = std::move(next);
  }
  return out;
}

namespace {

class OrderSolver {
 public:
  OrderSolver(const Group& group, std::size_t budget) : group_(group), budget_(budget) {}

  OrderResult run(const GroupWord& g) {
    OrderResult result;
    const Outcome o = solve(g, BigInt(1));
    result.nodes = nodes_;
    result.status = o.status;
    if (o.status == OrderResult::Status::finite) result.order = o.order;
    return result;
  }

 private:
  static constexpr std::size_t kMaxDepth = 20000;
  static constexpr std::size_t kNoBackEdge = static_cast<std::size_t>(-1);

  struct Outcome {
    OrderResult::Status status = OrderResult::Status::finite;
    BigInt order = 1;
    std::size_t lowest_back_edge = kNoBackEdge;  // shallowest stack depth referenced
  };

  // order(g) = lcm over cycles c of the root permutation of |c| * order((g^|c|)_i), i in c.
  // A section chain that returns to a word already on the stack with a larger
  // cumulative multiplier forces infinite order; with an equal one it adds nothing.
  Outcome solve(const GroupWord& g, const BigInt& cumulative) {
    Outcome out;
    if (g.empty()) return out;
    if (auto it = memo_.find(g); it != memo_.end()) {
      out.order = it->second;
      return out;
    }
    if (auto it = on_stack_.find(g); it != on_stack_.end()) {
      const auto& [depth, multiplier] = it->second;
      if (cumulative != multiplier) {
        out.status = OrderResult::Status::infinite;
        return out;
      }
      out.lowest_back_edge = depth;
      return out;
    }
    const std::size_t depth = on_stack_.size();
    if (++nodes_ > budget_ || depth > kMaxDepth) {
      out.status = OrderResult::Status::undecided;
      return out;
    }
    on_stack_.emplace(g, std::make_pair(depth, cumulative));

    const auto perm = group_.root_permutation(g);
    std::vector<bool> seen(perm.size(), false);
    for (unsigned i = 0; i < perm.size() && out.status == OrderResult::Status::finite; ++i) {
      if (seen[i]) continue;
      unsigned length = 0;
      for (unsigned j = i; !seen[j]; j = perm[j]) {
        seen[j] = true;
        ++length;
      }
      const GroupWord cycle_power = group_.power(g, length);
      const GroupWord s = group_.section(cycle_power, Vertex(std::vector<std::uint8_t>{static_cast<std::uint8_t>(i)}));
      Outcome sub = solve(s, cumulative * length);
      if (sub.status != OrderResult::Status::finite) {
        out.status = sub.status;
        break;
      }
      out.order = boost::integer::lcm(out.order, sub.order * length);
      out.lowest_back_edge = std::min(out.lowest_back_edge, sub.lowest_back_edge);
    }
    on_stack_.erase(g);
    if (out.status == OrderResult::Status::finite) {
      if (out.lowest_back_edge >= depth) {
        out.lowest_back_edge = kNoBackEdge;
        memo_.emplace(g, out.order);
      }
    }
    return out;
  }

  const Group& group_;
  std::size_t budget_;
  std::size_t nodes_ = 0;
  std::unordered_map<GroupWord, BigInt> memo_;
  std::unordered_map<GroupWord, std::pair<std::size_t, BigInt>> on_stack_;
};

}  // namespace

OrderResult Group::element_order(const GroupWord& g, std::size_t budget) const {
  return OrderSolver(*this, budget).run(g);
}

std::size_t Group::check_level(std::size_t level) const {
  const std::size_t points = level_size(degree(), level);
  if (points > max_level_points_) {
    throw Error(Errc::level_too_large,
                "level " + std::to_string(level) + " has " + std::to_string(points) +
                    " vertices, above the cap of " + std::to_string(max_level_points_));
  }
  return points;
}

const Permutation& Group::letter_permutation(const Letter& l, std::size_t level) const {
  const auto key = std::make_pair(l.code(), level);
  {
    std::lock_guard lock(cache_mutex_);
    if (auto it = level_cache_.find(key); it != level_cache_.end()) return it->second;
  }
  const std::size_t points = check_level(level);
  std::vector<std::uint32_t> images(points, 0);
  if (level > 0) {
    const std::size_t block = points / degree();
    const auto& data = letter(l);
    for (unsigned i = 0; i < degree(); ++i) {
      const Permutation child = level_permutation(data.sections[i], level - 1);
      for (std::size_t r = 0; r < block; ++r) {
        images[i * block + r] = static_cast<std::uint32_t>(data.perm[i] * block + child(static_cast<std::uint32_t>(r)));
      }
    }
  }
  Permutation perm(std::move(images));
  std::lock_guard lock(cache_mutex_);
  return level_cache_.emplace(key, std::move(perm)).first->second;
}

Permutation Group::level_permutation(const GroupWord& g, std::size_t level) const {
  const std::size_t points = check_level(level);
  std::vector<std::uint32_t> images(points);
  std::iota(images.begin(), images.end(), 0u);
  for (std::size_t j = g.size(); j-- > 0;) {
    const Permutation& p = letter_permutation(g[j], level);
    for (auto& x : images) x = p(x);
  }
  return Permutation(std::move(images));
}

}  // namespace selfsim
