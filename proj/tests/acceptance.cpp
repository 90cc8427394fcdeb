// Acceptance runner: one line per criterion, nonzero exit if any criterion fails.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "selfsim/certificate.hpp"
#include "selfsim/construction.hpp"
#include "selfsim/error.hpp"
#include "selfsim/quotient.hpp"
#include "selfsim/rist.hpp"
#include "selfsim/subgroup.hpp"
#include "support.hpp"

using namespace selfsim;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

constexpr std::uint64_t kSeed = 20240601;

Vertex v2(const char* s) { return Vertex::parse(s, 2); }

const Group& grigorchuk() {
  static const Group g(grigorchuk_preset());
  return g;
}

Outcome word_problem() {
  const Group& g = grigorchuk();
  std::mt19937_64 rng(kSeed);
  std::uniform_int_distribution<std::size_t> len(0, 20), short_len(0, 6);
  const GroupWord relator = g.parse("(a d)^4");
  std::size_t disagreements = 0, trivial = 0;
  for (int i = 0; i < 1000; ++i) {
    GroupWord w;
    if (i % 4 == 3) {
      const auto x = testing_support::random_word(g, short_len(rng), rng);
      w = g.multiply({x, relator, g.inverse(x)});
    } else {
      w = testing_support::random_word(g, len(rng), rng);
    }
    const Verdict v = g.is_identity(w);
    const bool portrait_trivial = g.portrait(w, 12).is_trivial();
    if ((v == Verdict::yes) != portrait_trivial || v == Verdict::undecided) ++disagreements;
    trivial += portrait_trivial ? 1 : 0;
  }
  return {disagreements == 0, std::to_string(disagreements) + " disagreements, " +
                                  std::to_string(trivial) + " trivial words"};
}

Outcome known_orders() {
  const Group& g = grigorchuk();
  const std::pair<const char*, int> expected[] = {{"a", 2}, {"b", 2}, {"c", 2}, {"d", 2},
                                                  {"a b", 16}, {"a c", 8}, {"a d", 4}};
  std::ostringstream detail;
  bool ok = true;
  for (const auto& [word, order] : expected) {
    const auto r = g.element_order(g.parse(word));
    const bool match = r.finite() && r.order == order;
    ok = ok && match;
    detail << word << "=" << (r.finite() ? to_decimal(r.order) : std::string("?")) << " ";
  }
  return {ok, detail.str()};
}

Outcome quotient_ladder() {
  const Group& g = grigorchuk();
  std::ostringstream detail;
  bool ok = true;
  BigInt previous = 1;
  for (std::size_t n = 1; n <= 6; ++n) {
    const BigInt q = quotient_order(g, n);
    ok = ok && q % previous == 0 && is_level_transitive(g, n);
    previous = q;
    detail << q << (n < 6 ? " | " : "");
  }
  return {ok, detail.str()};
}

Outcome regular_branch() {
  const Group& g = grigorchuk();
  const auto seeds = g.branching();
  std::vector<GroupWord> rist;
  for (const char* s : {"0", "1"}) {
    auto w = rist_element_search(g, v2(s), 200000);
    if (!w) return {false, std::string("no rigid element at ") + s};
    rist.push_back(std::move(*w));
  }
  std::ostringstream detail;
  bool ok = true;
  for (std::size_t n = 3; n <= 5; ++n) {
    const auto action = level_action(g, n);
    std::vector<Permutation> seed_images;
    for (const auto& s : seeds) seed_images.push_back(g.level_permutation(s, n));
    const auto k_image = PermGroup::normal_closure(action.generator_images.front().degree(),
                                                   seed_images, action.generator_images);
    for (const auto& w : rist) ok = ok && k_image.contains(g.level_permutation(w, n));
    detail << "n=" << n << " |K image|=" << k_image.order() << " ";
  }
  return {ok, detail.str() + "(rigid elements at 0 and 1 lie in K)"};
}

Outcome trap(std::size_t k, std::string* fingerprint = nullptr) {
  const Group& g = grigorchuk();
  const std::vector<GroupWord> q{g.parse("a")};
  const auto t = construct_trap_subgroup(g, q, k, 1, k + 3, 200000);
  if (!t) return {false, "construction failed"};
  if (fingerprint) *fingerprint = t->to_json(g).dump();
  const auto report = level_trap_check(g, t->subgroup.generators(), k, 1);
  return {report.pass(), std::to_string(t->subgroup.generators().size()) + " generators, delta <" +
                             [&] {
                               std::string s;
                               for (const auto& w : t->delta.generators()) s += (s.empty() ? "" : ", ") + g.format(w);
                               return s;
                             }() + ">"};
}

AvoidList level_two_parabolics(const Group& g) {
  AvoidList w;
  for (const char* s : {"00", "01", "10"}) w.push_back(parabolic_approximation(g, v2(s), 6));
  return w;
}

Outcome certificate_round_trip(std::string* text = nullptr) {
  const Group& g = grigorchuk();
  const std::vector<GroupWord> q{g.parse("a")};
  try {
    const auto c = build_certificate(g, q, level_two_parabolics(g), 6, {}, kSeed);
    const auto serialized = certificate_to_text(g, c);
    if (text) *text = serialized;
    Group fresh(grigorchuk_preset());
    const auto parsed = certificate_from_json(fresh, nlohmann::json::parse(serialized));
    const auto r = validate_certificate(fresh, parsed);
    std::ostringstream detail;
    detail << c.stages.size() << " stages, " << (r.ok() ? "all clauses pass" : "clause failure")
           << " at level " << r.verification_level;
    return {c.stages.size() >= 3 && r.ok() && r.verification_level >= 4, detail.str()};
  } catch (const Error& e) {
    return {false, e.what()};
  }
}

Outcome fix_equivariance() {
  const Group& g = grigorchuk();
  std::mt19937_64 rng(kSeed + 7);
  std::uniform_int_distribution<std::size_t> count(1, 3);
  std::size_t failures = 0;
  for (int i = 0; i < 200; ++i) {
    const auto x = testing_support::random_word(g, 12, rng);
    std::vector<GroupWord> h;
    for (std::size_t j = count(rng); j > 0; --j) h.push_back(testing_support::random_word(g, 8, rng));
    std::vector<GroupWord> conj;
    for (const auto& w : h) conj.push_back(g.conjugate(x, w));
    for (std::size_t n = 1; n <= 4; ++n) {
      std::vector<Vertex> moved;
      for (const auto& v : fixed_vertices(g, h, n)) moved.push_back(g.apply(x, v));
      std::sort(moved.begin(), moved.end());
      if (fixed_vertices(g, conj, n) != moved) ++failures;
    }
  }
  return {failures == 0, std::to_string(failures) + " failures over 200 pairs"};
}

Outcome non_conjugacy() {
  const Group& g = grigorchuk();
  const std::vector<GroupWord> q{g.parse("a")};
  const auto h1 = construct_trap_subgroup(g, q, 1, 1, 4, 200000);
  const auto h2 = construct_trap_subgroup(g, q, 2, 1, 5, 200000);
  if (!h1 || !h2 || !h1->report.pass() || !h2->report.pass()) return {false, "trap construction failed"};
  const auto w = fix_separation_witness(g, h1->subgroup.generators(), h2->subgroup.generators(), 4);
  if (!w) return {false, "inconclusive"};
  return {true, "level " + std::to_string(w->level) + ", " + (w->first_fixes ? "first" : "second") +
                    " fixes " + w->fixed.str()};
}

Outcome conjugate_bound() {
  const Group& g = grigorchuk();
  const auto h = parabolic_approximation(g, v2("0"), 3);
  const auto b = conjugate_count_lower_bound(g, h, 3, 1000);
  bool distinct = b.conjugators.size() == b.bound;
  for (std::size_t i = 0; i < b.conjugators.size(); ++i) {
    for (std::size_t j = i + 1; j < b.conjugators.size(); ++j) {
      if (h.conjugated(g, b.conjugators[i]).image() == h.conjugated(g, b.conjugators[j]).image()) {
        distinct = false;
      }
    }
  }
  return {b.bound >= 2 && distinct,
          "bound " + std::to_string(b.bound) + (b.gamma ? ", gamma " + g.format(*b.gamma) : "")};
}

Outcome ggs_suite() {
  Group g(gupta_sidki_preset());
  bool ok = true;
  for (std::size_t n = 1; n <= 4; ++n) ok = ok && is_level_transitive(g, n);
  const auto order = g.element_order(g.parse("b"));
  ok = ok && order.finite() && order.order == 3;
  const int e[] = {1, -1};
  ok = ok && regular_branch_vector_check(3, e);
  const std::vector<GroupWord> a{g.parse("a")};
  const auto l = minimal_non_fixing_level(g, a, 4);
  ok = ok && l == std::optional<std::size_t>(1);
  return {ok, "transitive n=1..4, order(b)=" + (order.finite() ? to_decimal(order.order) : "?") +
                  ", fixlevel(<a>)=" + (l ? std::to_string(*l) : "none")};
}

Outcome determinism() {
  std::vector<std::string> first(3), second(3);
  std::string cert1, cert2;
  for (std::size_t k = 1; k <= 3; ++k) trap(k, &first[k - 1]);
  certificate_round_trip(&cert1);
  for (std::size_t k = 1; k <= 3; ++k) trap(k, &second[k - 1]);
  certificate_round_trip(&cert2);
  const bool ok = first == second && cert1 == cert2 && !cert1.empty();
  return {ok, ok ? "trap reports and certificate byte-identical" : "outputs differ"};
}

}  // namespace

int main() {
  struct Criterion {
    std::string name;
    double limit_seconds;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria{
      {"1 word problem vs depth-12 portraits", 30, word_problem},
      {"2 known element orders", 5, known_orders},
      {"3 quotient ladder n=1..6", 60, quotient_ladder},
      {"4 regular-branch containment n=3..5", 60, regular_branch},
      {"5 level trap k=1", 60, [] { return trap(1); }},
      {"5 level trap k=2", 60, [] { return trap(2); }},
      {"5 level trap k=3", 60, [] { return trap(3); }},
      {"6 certificate build and validate", 120, [] { return certificate_round_trip(); }},
      {"7 fix equivariance", 30, fix_equivariance},
      {"8 non-conjugacy witness", 30, non_conjugacy},
      {"9 conjugate count bound", 30, conjugate_bound},
      {"10 Gupta-Sidki suite", 60, ggs_suite},
      {"11 determinism of 5 and 6", 600, determinism},
  };

  int failed = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_time = seconds < c.limit_seconds;
    const bool pass = o.pass && in_time;
    failed += pass ? 0 : 1;
    std::printf("[%s] %s (%.2f s, limit %.0f s): %s%s\n", pass ? "PASS" : "FAIL", c.name.c_str(),
                seconds, c.limit_seconds, o.detail.c_str(), in_time ? "" : " [time limit exceeded]");
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria failed\n", failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
