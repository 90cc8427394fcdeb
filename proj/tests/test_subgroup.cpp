#include <doctest.h>

#include <algorithm>
#include <random>

#include "selfsim/construction.hpp"
#include "selfsim/error.hpp"
#include "selfsim/subgroup.hpp"
#include "support.hpp"

using namespace selfsim;
using testing_support::random_vertex;
using testing_support::random_word;

namespace {

Vertex v2(const char* s) { return Vertex::parse(s, 2); }

std::vector<GroupWord> words(const Group& g, std::initializer_list<const char*> texts) {
  std::vector<GroupWord> out;
  for (const char* t : texts) out.push_back(g.parse(t));
  return out;
}

}  // namespace

TEST_CASE("fixed vertices") {
  Group g(grigorchuk_preset());
  CHECK(fixed_vertices(g, words(g, {"a"}), 1).empty());
  CHECK(fixed_vertices(g, words(g, {"b"}), 1) == std::vector<Vertex>{v2("0"), v2("1")});
  CHECK(fixed_vertices(g, words(g, {"d"}), 2) == level_vertices(2, 2));
  CHECK(fixed_vertices(g, {}, 3).size() == 8);
}

TEST_CASE("fixed trees") {
  Group g(grigorchuk_preset());
  const auto full = fixed_tree(g, words(g, {"1"}), 3);
  CHECK(full.vertices.size() == 15);
  const auto a = fixed_tree(g, words(g, {"a"}), 3);
  CHECK(a.vertices == std::set<Vertex>{Vertex()});
  CHECK(a.deepest.is_root());
  const auto d = fixed_tree(g, words(g, {"d"}), 3);
  for (const char* s : {"0", "00", "000"}) CHECK(d.vertices.count(v2(s)) == 1);
  CHECK(d.deepest.level() == 3);
  for (const auto& v : d.vertices) {
    for (std::size_t k = 0; k < v.level(); ++k) CHECK(d.vertices.count(v.prefix(k)) == 1);
  }
  CHECK(d.to_json()["deepest"] == d.deepest.str());
}

TEST_CASE("minimal non-fixing level") {
  Group g(grigorchuk_preset());
  CHECK(minimal_non_fixing_level(g, words(g, {"a"}), 5) == std::optional<std::size_t>(1));
  CHECK_FALSE(minimal_non_fixing_level(g, words(g, {"d"}), 6).has_value());
  CHECK_FALSE(minimal_non_fixing_level(g, words(g, {"b"}), 6).has_value());
  CHECK(minimal_non_fixing_level(g, words(g, {"a", "b"}), 6) == std::optional<std::size_t>(1));
  Group gs(gupta_sidki_preset());
  CHECK(minimal_non_fixing_level(gs, words(gs, {"a"}), 4) == std::optional<std::size_t>(1));
  const int e[] = {1, 0, 0, 0};
  Group g5(ggs_preset(5, e));
  CHECK(minimal_non_fixing_level(g5, words(g5, {"a"}), 4) == std::optional<std::size_t>(1));
}

TEST_CASE("minimal non-fixing level consistency on random subgroups") {
  Group g(grigorchuk_preset());
  std::mt19937_64 rng(31);
  for (int i = 0; i < 60; ++i) {
    const std::vector<GroupWord> h{random_word(g, 8, rng), random_word(g, 8, rng)};
    const auto l = minimal_non_fixing_level(g, h, 6);
    if (l) {
      CHECK(fixed_vertices(g, h, *l).empty());
      CHECK_FALSE(fixed_vertices(g, h, *l - 1).empty());
    } else {
      CHECK_FALSE(fixed_vertices(g, h, 6).empty());
    }
  }
}

TEST_CASE("psi sections") {
  Group g(grigorchuk_preset());
  CHECK(psi_sections(g, g.parse("b"), 1) == words(g, {"a", "c"}));
  CHECK(psi_sections(g, g.parse("(a b)^2"), 1) == words(g, {"c a", "a c"}));
  CHECK(psi_sections(g, g.parse("a"), 0) == words(g, {"a"}));
  try {
    psi_sections(g, g.parse("a"), 1);
    FAIL("expected not_in_level_stabilizer");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::not_in_level_stabilizer);
  }
}

TEST_CASE("psi sections reassemble the action") {
  Group g(grigorchuk_preset());
  std::mt19937_64 rng(5);
  int tested = 0;
  for (int i = 0; i < 400 && tested < 60; ++i) {
    const auto x = random_word(g, 16, rng);
    const std::size_t k = 1 + static_cast<std::size_t>(i % 3);
    if (!g.level_permutation(x, k).is_identity()) continue;
    ++tested;
    const auto s = psi_sections(g, x, k);
    const auto level = level_vertices(2, k);
    for (std::size_t j = 0; j < level.size(); ++j) {
      for (std::size_t depth = 0; depth <= 4; ++depth) {
        const auto w = random_vertex(2, depth, rng);
        CHECK(g.apply(x, level[j].concat(w)) == level[j].concat(g.apply(s[j], w)));
      }
    }
  }
  CHECK(tested >= 20);
}

TEST_CASE("rigid stabilizer membership") {
  Group g(grigorchuk_preset());
  CHECK(in_rigid_stabilizer(g, GroupWord(), v2("01")) == Verdict::yes);
  CHECK(in_rigid_stabilizer(g, g.parse("b"), v2("0")) == Verdict::no);
  CHECK(in_rigid_stabilizer(g, g.parse("a"), v2("0")) == Verdict::no);
  CHECK(in_rigid_stabilizer(g, g.parse("d"), Vertex()) == Verdict::yes);
  // d = (1, b): rigid at 1
  CHECK(in_rigid_stabilizer(g, g.parse("d"), v2("1")) == Verdict::yes);
}

TEST_CASE("index growth profile") {
  Group g(grigorchuk_preset());
  const auto full = index_growth_profile(g, g.generators(), 4);
  CHECK(full.indices == std::vector<BigInt>{1, 1, 1, 1});
  CHECK(full.trend == "finite-index-evidence");
  const auto a = index_growth_profile(g, words(g, {"a"}), 3);
  CHECK(a.indices == std::vector<BigInt>{1, 4, 64});
  CHECK(a.trend == "infinite-index-evidence");
  const auto stab = point_stabilizer_words(g, v2("0"));
  CHECK(index_growth_profile(g, stab, 1).indices.front() == 2);
}

TEST_CASE("index profile entries divide quotient orders") {
  Group g(grigorchuk_preset());
  std::mt19937_64 rng(13);
  for (int i = 0; i < 20; ++i) {
    const std::vector<GroupWord> h{random_word(g, 6, rng)};
    const auto p = index_growth_profile(g, h, 4);
    for (std::size_t n = 1; n <= 4; ++n) CHECK(quotient_order(g, n) % p.indices[n - 1] == 0);
  }
}

TEST_CASE("fix equivariance") {
  Group g(grigorchuk_preset());
  std::mt19937_64 rng(1);
  for (int i = 0; i < 100; ++i) {
    const auto x = random_word(g, 10, rng);
    std::vector<GroupWord> h{random_word(g, 6, rng)};
    if (i % 2) h.push_back(random_word(g, 6, rng));
    SubgroupHandle handle(g, h);
    const auto conj = handle.conjugated(g, x);
    for (std::size_t n = 1; n <= 4; ++n) {
      std::vector<Vertex> moved;
      for (const auto& v : fixed_vertices(g, h, n)) moved.push_back(g.apply(x, v));
      std::sort(moved.begin(), moved.end());
      CHECK(fixed_vertices(g, conj.generators(), n) == moved);
    }
  }
}

TEST_CASE("subgroup handles") {
  Group g(grigorchuk_preset());
  SubgroupHandle none(g, words(g, {"a"}));
  CHECK_FALSE(none.has_image());
  CHECK_THROWS_AS(none.image(), Error);
  auto h = none.with_level(g, 2);
  CHECK(h.image().order() == 2);
  CHECK(h.image_contains(g, g.parse("a")));
  CHECK_FALSE(h.image_contains(g, g.parse("b")));
  CHECK(h.image_at(g, 1).order() == 2);
  const auto j = h.to_json(g);
  CHECK(j["generators"] == nlohmann::json::array({"a"}));
  CHECK(j["membership_level"] == 2);
}

TEST_CASE("conjugate escaping") {
  Group g(grigorchuk_preset());
  SubgroupHandle bcd(g, words(g, {"b", "c", "d"}), 1);
  const auto f = conjugate_escaping(g, bcd, g.parse("a"), 1, 100);
  REQUIRE(f.has_value());
  CHECK(f->empty());

  const auto par = parabolic_approximation(g, v2("0"), 3);
  const auto f2 = conjugate_escaping(g, par, g.parse("a"), 3, 1000);
  REQUIRE(f2.has_value());
  CHECK_FALSE(par.image_contains(g, g.conjugate(*f2, g.parse("a"))));
  CHECK(g.apply(g.conjugate(*f2, g.parse("a")), v2("000")) != v2("000"));

  try {
    conjugate_escaping(g, bcd, GroupWord(), 1, 10);
    FAIL("expected precondition");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::precondition);
  }

  SubgroupHandle all(g, g.generators(), 3);
  CHECK_FALSE(conjugate_escaping(g, all, g.parse("a"), 3, 200).has_value());
}

TEST_CASE("word enumeration order") {
  Group g(grigorchuk_preset());
  std::vector<GroupWord> seen;
  for_each_word(g, 2, 100, [&](const GroupWord& w) {
    seen.push_back(w);
    return true;
  });
  CHECK(std::is_sorted(seen.begin(), seen.end()));
  CHECK(seen.front().empty());
  CHECK(seen.size() == 1 + 4 + 6);
  CHECK(for_each_word(g, 5, 7, [](const GroupWord&) { return true; }) == 7);
}

TEST_CASE("finite subgroup enumeration") {
  Group g(grigorchuk_preset());
  const auto klein = enumerate_finite_subgroup(g, words(g, {"b", "c"}), 16);
  REQUIRE(klein.has_value());
  CHECK(klein->size() == 4);
  CHECK(klein->front().empty());
  const auto dihedral = enumerate_finite_subgroup(g, words(g, {"a", "d"}), 16);
  REQUIRE(dihedral.has_value());
  CHECK(dihedral->size() == 8);
  CHECK_FALSE(enumerate_finite_subgroup(g, words(g, {"a", "b"}), 16).has_value());
}
