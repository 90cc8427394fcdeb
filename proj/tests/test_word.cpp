#include <doctest.h>

#include <random>

#include "selfsim/error.hpp"
#include "selfsim/group.hpp"
#include "support.hpp"

using namespace selfsim;

TEST_CASE("parse_letters syntax") {
  const std::vector<std::string> names{"a", "b", "c", "d"};
  auto letters = parse_letters("a b a^-1", names);
  REQUIRE(letters.size() == 3);
  CHECK(letters[0] == Letter{0, 1});
  CHECK(letters[2] == Letter{0, -1});

  CHECK(parse_letters("(a b)^2", names).size() == 4);
  CHECK(parse_letters("abab", names) == parse_letters("a b a b", names));
  CHECK(parse_letters("a*b", names) == parse_letters("a b", names));
  CHECK(parse_letters("1", names).empty());
  CHECK(parse_letters("ab^-1", names) == parse_letters("a b^-1", names));
  CHECK(parse_letters("(a b)^-1", names) == parse_letters("b^-1 a^-1", names));
}

TEST_CASE("parse_letters errors") {
  const std::vector<std::string> names{"a", "b"};
  try {
    parse_letters("a z", names);
    FAIL("expected unknown symbol");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::unknown_symbol);
  }
  try {
    parse_letters("(a b", names);
    FAIL("expected parse error");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::parse_error);
  }
}

TEST_CASE("format_letters collects runs") {
  const std::vector<std::string> names{"a", "b"};
  CHECK(format_letters(parse_letters("a a b", names), names) == "a^2 b");
  CHECK(format_letters(parse_letters("b^-1 b^-1", names), names) == "b^-2");
  CHECK(format_letters({}, names) == "1");
}

TEST_CASE("Grigorchuk rewriting normal forms") {
  Group g(grigorchuk_preset());
  CHECK(g.parse("a a").empty());
  CHECK(g.parse("b c") == g.parse("d"));
  CHECK(g.parse("c b") == g.parse("d"));
  CHECK(g.parse("b d") == g.parse("c"));
  CHECK(g.parse("d c") == g.parse("b"));
  CHECK(g.parse("b c d^-1").empty());
  CHECK(g.parse("a^-1") == g.parse("a"));
  CHECK(g.format(g.parse("a b a b")) == "a b a b");
}

TEST_CASE("GGS rewriting collects exponents") {
  Group g(gupta_sidki_preset());
  CHECK(g.parse("a a a").empty());
  CHECK(g.parse("a^-1") == g.parse("a a"));
  CHECK(g.parse("b^4") == g.parse("b"));
}

TEST_CASE("reduction is idempotent on random words") {
  Group g(grigorchuk_preset());
  std::mt19937_64 rng(11);
  for (int i = 0; i < 500; ++i) {
    const auto w = testing_support::random_word(g, 30, rng);
    CHECK(g.reduce(w.letters()) == w);
    CHECK(g.parse(g.format(w)) == w);
    for (std::size_t j = 1; j < w.size(); ++j) CHECK(w[j - 1].gen != w[j].gen);
  }
}

TEST_CASE("shortlex order on words") {
  Group g(grigorchuk_preset());
  CHECK(g.parse("d") < g.parse("a b"));
  CHECK(g.parse("a b") < g.parse("a c"));
  CHECK(g.parse("1") < g.parse("a"));
}
