#pragma once

#include <random>
#include <vector>

#include "oracle/oracle.hpp"
#include "selfsim/group.hpp"

namespace testing_support {

/// Reduced random word built from `length` uniformly drawn generator letters.
inline selfsim::GroupWord random_word(const selfsim::Group& g, std::size_t length,
                                      std::mt19937_64& rng) {
  std::uniform_int_distribution<std::size_t> pick(0, 2 * g.generator_count() - 1);
  std::vector<selfsim::Letter> letters;
  for (std::size_t i = 0; i < length; ++i) {
    const std::size_t x = pick(rng);
    letters.push_back({static_cast<std::uint16_t>(x / 2), static_cast<std::int8_t>(x % 2 ? -1 : 1)});
  }
  return g.reduce(letters);
}

inline selfsim::Vertex random_vertex(unsigned degree, std::size_t level, std::mt19937_64& rng) {
  std::uniform_int_distribution<unsigned> pick(0, degree - 1);
  std::vector<std::uint8_t> letters(level);
  for (auto& x : letters) x = static_cast<std::uint8_t>(pick(rng));
  return selfsim::Vertex(std::move(letters));
}

inline oracle::Word to_oracle(const selfsim::GroupWord& w) {
  oracle::Word out;
  for (const auto& l : w) out.emplace_back(l.gen, l.exp);
  return out;
}

inline oracle::Letters to_oracle(const selfsim::Vertex& v) {
  return oracle::Letters(v.letters().begin(), v.letters().end());
}

inline std::vector<std::uint32_t> images(const selfsim::Permutation& p) {
  return {p.images().begin(), p.images().end()};
}

}  // namespace testing_support
