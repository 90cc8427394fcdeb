#include "selfsim/tree.hpp"

#include <limits>

#include "selfsim/error.hpp"

namespace selfsim {

const char* errc_name(Errc code) noexcept {
  switch (code) {
    case Errc::invalid_degree: return "invalid-degree";
    case Errc::invalid_vertex: return "invalid-vertex";
    case Errc::parse_error: return "parse-error";
    case Errc::unknown_symbol: return "unknown-symbol";
    case Errc::invalid_preset: return "invalid-preset";
    case Errc::precondition: return "precondition-violation";
    case Errc::not_in_level_stabilizer: return "not-in-level-stabilizer";
    case Errc::level_too_large: return "level-too-large";
    case Errc::budget_exhausted: return "budget-exhausted";
    case Errc::stage_failure: return "stage-failure";
    case Errc::internal: return "internal-error";
  }
  return "unknown";
}

namespace {

char letter_char(std::uint8_t x) {
  return x < 10 ? static_cast<char>('0' + x) : static_cast<char>('a' + (x - 10));
}

int char_letter(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'z') return c - 'a' + 10;
  return -1;
}

}  // namespace

void check_degree(unsigned degree) {
  if (degree < 2 || degree > kMaxDegree) {
    throw Error(Errc::invalid_degree,
                "degree must lie in [2, " + std::to_string(kMaxDegree) + "], got " +
                    std::to_string(degree));
  }
}

Vertex Vertex::parse(std::string_view text, unsigned degree) {
  check_degree(degree);
  std::vector<std::uint8_t> letters;
  letters.reserve(text.size());
  for (char c : text) {
    const int x = char_letter(c);
    if (x < 0 || static_cast<unsigned>(x) >= degree) {
      throw Error(Errc::invalid_vertex, "bad vertex letter '" + std::string(1, c) + "' in \"" +
                                            std::string(text) + "\" for degree " +
                                            std::to_string(degree));
    }
    letters.push_back(static_cast<std::uint8_t>(x));
  }
  return Vertex(std::move(letters));
}

Vertex Vertex::child(unsigned letter) const {
  auto letters = letters_;
  letters.push_back(static_cast<std::uint8_t>(letter));
  return Vertex(std::move(letters));
}

Vertex Vertex::prefix(std::size_t length) const {
  return Vertex({letters_.begin(), letters_.begin() + static_cast<std::ptrdiff_t>(length)});
}

Vertex Vertex::suffix(std::size_t from) const {
  return Vertex({letters_.begin() + static_cast<std::ptrdiff_t>(from), letters_.end()});
}

Vertex Vertex::concat(const Vertex& tail) const {
  auto letters = letters_;
  letters.insert(letters.end(), tail.letters_.begin(), tail.letters_.end());
  return Vertex(std::move(letters));
}

std::string Vertex::str() const {
  std::string out;
  out.reserve(letters_.size());
  for (auto x : letters_) out.push_back(letter_char(x));
  return out;
}

std::size_t level_size(unsigned degree, std::size_t level) {
  check_degree(degree);
  std::size_t n = 1;
  for (std::size_t i = 0; i < level; ++i) {
    if (n > std::numeric_limits<std::size_t>::max() / degree) {
      throw Error(Errc::level_too_large, "level " + std::to_string(level) + " is too large");
    }
    n *= degree;
  }
  return n;
}

std::vector<Vertex> level_vertices(unsigned degree, std::size_t level) {
  const std::size_t count = level_size(degree, level);
  std::vector<Vertex> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) out.push_back(vertex_at(i, degree, level));
  return out;
}

bool vertex_leq(const Vertex& w, const Vertex& v) {
  if (v.level() > w.level()) return false;
  for (std::size_t i = 0; i < v.level(); ++i) {
    if (w[i] != v[i]) return false;
  }
  return true;
}

std::size_t vertex_index(const Vertex& v, unsigned degree) {
  std::size_t index = 0;
  for (auto x : v.letters()) index = index * degree + x;
  return index;
}

Vertex vertex_at(std::size_t index, unsigned degree, std::size_t level) {
  std::vector<std::uint8_t> letters(level);
  for (std::size_t i = level; i-- > 0;) {
    letters[i] = static_cast<std::uint8_t>(index % degree);
    index /= degree;
  }
  return Vertex(std::move(letters));
}

Vertex zeros(std::size_t k) { return Vertex(std::vector<std::uint8_t>(k, 0)); }

}  // namespace selfsim
