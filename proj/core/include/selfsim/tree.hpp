#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace selfsim {

/// Highest supported tree degree; vertex letters print as 0-9 then a-z.
inline constexpr unsigned kMaxDegree = 36;

/// A vertex of the d-regular rooted tree, i.e. a finite word over {0,...,d-1}.
/// The empty word is the root. Ordering is lexicographic on the letters.
class Vertex {
 public:
  Vertex() = default;
  explicit Vertex(std::vector<std::uint8_t> letters) : letters_(std::move(letters)) {}

  /// Parses the digit-string form ("" is the root). Every letter must be < degree.
  static Vertex parse(std::string_view text, unsigned degree);

  std::size_t level() const noexcept { return letters_.size(); }
  bool is_root() const noexcept { return letters_.empty(); }
  std::span<const std::uint8_t> letters() const noexcept { return letters_; }
  std::uint8_t operator[](std::size_t i) const { return letters_[i]; }

  Vertex child(unsigned letter) const;
  Vertex prefix(std::size_t length) const;
  Vertex suffix(std::size_t from) const;
  Vertex concat(const Vertex& tail) const;

  std::string str() const;

  friend bool operator==(const Vertex&, const Vertex&) = default;
  friend std::strong_ordering operator<=>(const Vertex& a, const Vertex& b) {
    return a.letters_ <=> b.letters_;
  }

 private:
  std::vector<std::uint8_t> letters_;
};

/// d^n, throwing if it does not fit in size_t.
std::size_t level_size(unsigned degree, std::size_t level);

/// All d^n vertices of level n in lexicographic order.
std::vector<Vertex> level_vertices(unsigned degree, std::size_t level);

/// True iff v is a prefix of w, i.e. w lies in the subtree T_v.
bool vertex_leq(const Vertex& w, const Vertex& v);

/// Position of v among the vertices of its level in lexicographic order.
std::size_t vertex_index(const Vertex& v, unsigned degree);
Vertex vertex_at(std::size_t index, unsigned degree, std::size_t level);

/// The all-zeros vertex 0^k.
Vertex zeros(std::size_t k);

void check_degree(unsigned degree);

}  // namespace selfsim
