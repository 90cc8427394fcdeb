#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace selfsim {

/// One factor of a group word: a generator index with exponent +1 or -1.
struct Letter {
  std::uint16_t gen = 0;
  std::int8_t exp = 1;

  /// Position in the letter alphabet: generators in declaration order, x before x^-1.
  unsigned code() const noexcept { return 2u * gen + (exp < 0 ? 1u : 0u); }
  Letter inverse() const noexcept { return {gen, static_cast<std::int8_t>(-exp)}; }

  friend bool operator==(const Letter&, const Letter&) = default;
  friend std::strong_ordering operator<=>(const Letter& a, const Letter& b) {
    return a.code() <=> b.code();
  }
};

/// A word in the generators. Words produced by a Group are always reduced
/// under its rewriting system; the empty word is the identity.
class GroupWord {
 public:
  GroupWord() = default;
  explicit GroupWord(std::vector<Letter> letters) : letters_(std::move(letters)) {}

  std::size_t size() const noexcept { return letters_.size(); }
  bool empty() const noexcept { return letters_.empty(); }
  std::span<const Letter> letters() const noexcept { return letters_; }
  const Letter& operator[](std::size_t i) const { return letters_[i]; }
  auto begin() const noexcept { return letters_.begin(); }
  auto end() const noexcept { return letters_.end(); }

  friend bool operator==(const GroupWord&, const GroupWord&) = default;

  /// Shortlex order: shorter words first, then lexicographic by letter code.
  friend std::strong_ordering operator<=>(const GroupWord& a, const GroupWord& b) {
    if (auto c = a.size() <=> b.size(); c != 0) return c;
    return a.letters_ <=> b.letters_;
  }

  std::size_t hash() const noexcept;

 private:
  std::vector<Letter> letters_;
};

struct GroupWordHash {
  std::size_t operator()(const GroupWord& w) const noexcept { return w.hash(); }
};

/// Parses the word syntax: generator names separated by blanks or '*', optional
/// integer exponents "x^-1", parenthesised sub-words "(a b)^2", and "1" for the
/// identity. Juxtaposed single-character names ("abab") are split when every
/// generator name is a single character. Exponents are expanded into +-1 letters.
/// Unknown names raise Error(unknown_symbol).
std::vector<Letter> parse_letters(std::string_view text, std::span<const std::string> names);

/// Prints runs of equal letters as x^k; the identity prints as "1".
std::string format_letters(std::span<const Letter> letters, std::span<const std::string> names);

/// A length-reducing rewriting system plus free cancellation. Generators with a
/// power rule x^m -> 1 are treated as having order m: their inverse letters are
/// normalised to x^(m-1) before rewriting.
class RewritingSystem {
 public:
  struct Rule {
    std::vector<Letter> lhs;
    std::vector<Letter> rhs;
  };

  RewritingSystem() = default;
  RewritingSystem(std::size_t generator_count, std::vector<Rule> rules);

  /// Order m of generator `gen` if a power rule x^m -> 1 is present.
  std::optional<unsigned> generator_order(std::size_t gen) const { return orders_.at(gen); }

  /// Rewrites an arbitrary letter sequence to its irreducible form.
  GroupWord reduce(std::span<const Letter> letters) const;

  /// Appends `x` to an already irreducible stack and restores irreducibility.
  void push(std::vector<Letter>& stack, Letter x) const;

  /// True when `w` is irreducible and `w x` is irreducible too.
  bool extends_irreducibly(std::span<const Letter> w, Letter x) const;

  /// Letters of x after inverse normalisation (x^-1 -> x^(m-1) for finite order).
  void normalize_into(Letter x, std::vector<Letter>& out) const;

  std::span<const Rule> rules() const noexcept { return rules_; }

 private:
  bool suffix_matches(std::span<const Letter> stack, const std::vector<Letter>& lhs) const;

  std::vector<std::optional<unsigned>> orders_;
  std::vector<Rule> rules_;
  std::vector<std::vector<std::size_t>> by_last_;  // indexed by Letter::code()
};

/// Detects power rules lhs = x^m, rhs = 1 among raw rules.
std::vector<std::optional<unsigned>> detect_generator_orders(
    std::size_t generator_count, std::span<const RewritingSystem::Rule> raw_rules);

}  // namespace selfsim

template <>
struct std::hash<selfsim::GroupWord> {
  std::size_t operator()(const selfsim::GroupWord& w) const noexcept { return w.hash(); }
};
