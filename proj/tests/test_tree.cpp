#include <doctest.h>

#include <random>

#include "selfsim/error.hpp"
#include "selfsim/tree.hpp"

using namespace selfsim;

namespace {

Vertex v2(const char* s) { return Vertex::parse(s, 2); }

}  // namespace

TEST_CASE("level_vertices enumerates lexicographically") {
  CHECK(level_vertices(2, 0) == std::vector<Vertex>{Vertex()});
  CHECK(level_vertices(2, 2) == std::vector<Vertex>{v2("00"), v2("01"), v2("10"), v2("11")});
  CHECK(level_vertices(3, 1) ==
        std::vector<Vertex>{Vertex::parse("0", 3), Vertex::parse("1", 3), Vertex::parse("2", 3)});
}

TEST_CASE("level_vertices rejects degree below two") {
  try {
    level_vertices(1, 2);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::invalid_degree);
  }
}

TEST_CASE("vertex parsing and printing") {
  CHECK(v2("").is_root());
  CHECK(v2("010").str() == "010");
  CHECK(Vertex::parse("a9", 36).str() == "a9");
  CHECK_THROWS_AS(Vertex::parse("012", 2), Error);
  CHECK_THROWS_AS(Vertex::parse("0x", 2), Error);
}

TEST_CASE("vertex_leq examples") {
  CHECK(vertex_leq(v2("010"), v2("01")));
  CHECK_FALSE(vertex_leq(v2("01"), v2("010")));
  CHECK_FALSE(vertex_leq(v2("10"), v2("0")));
  CHECK(vertex_leq(v2("10"), Vertex()));
}

TEST_CASE("level sizes match d^n") {
  for (unsigned d = 2; d <= 4; ++d) {
    std::size_t expected = 1;
    for (std::size_t n = 0; n <= 10; ++n) {
      CHECK(level_size(d, n) == expected);
      if (n <= 8 || d == 2) CHECK(level_vertices(d, n).size() == expected);
      expected *= d;
    }
  }
}

TEST_CASE("vertex index round trip") {
  for (unsigned d = 2; d <= 4; ++d) {
    const auto all = level_vertices(d, 4);
    for (std::size_t i = 0; i < all.size(); ++i) {
      CHECK(vertex_index(all[i], d) == i);
      CHECK(vertex_at(i, d, 4) == all[i]);
    }
  }
}

TEST_CASE("vertex_leq is a partial order on random triples") {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> len(0, 4), bit(0, 1);
  auto draw = [&] {
    std::vector<std::uint8_t> letters(static_cast<std::size_t>(len(rng)));
    for (auto& x : letters) x = static_cast<std::uint8_t>(bit(rng));
    return Vertex(letters);
  };
  for (int i = 0; i < 2000; ++i) {
    const Vertex x = draw(), y = draw(), z = draw();
    CHECK(vertex_leq(x, x));
    if (vertex_leq(x, y) && vertex_leq(y, x)) CHECK(x == y);
    if (vertex_leq(x, y) && vertex_leq(y, z)) CHECK(vertex_leq(x, z));
  }
}

TEST_CASE("subtree slices have d^(n-k) vertices") {
  for (unsigned d = 2; d <= 3; ++d) {
    for (std::size_t k = 0; k <= 3; ++k) {
      for (const auto& v : level_vertices(d, k)) {
        for (std::size_t n = k; n <= 5; ++n) {
          std::size_t count = 0;
          for (const auto& w : level_vertices(d, n)) count += vertex_leq(w, v) ? 1 : 0;
          CHECK(count == level_size(d, n - k));
        }
      }
    }
  }
}

TEST_CASE("vertex helpers") {
  CHECK(zeros(3) == v2("000"));
  CHECK(v2("01").child(1) == v2("011"));
  CHECK(v2("0110").prefix(2) == v2("01"));
  CHECK(v2("0110").suffix(2) == v2("10"));
  CHECK(v2("01").concat(v2("10")) == v2("0110"));
  CHECK(v2("01") < v2("1"));
}
