#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "selfsim/types.hpp"

namespace selfsim {

/// A permutation of {0, ..., n-1} in one-line image form.
/// Products act right to left: (p * q)(x) = p(q(x)).
class Permutation {
 public:
  Permutation() = default;
  explicit Permutation(std::size_t degree);
  explicit Permutation(std::vector<std::uint32_t> images);

  static Permutation identity(std::size_t degree) { return Permutation(degree); }

  std::size_t degree() const noexcept { return images_.size(); }
  std::uint32_t operator()(std::uint32_t x) const { return images_[x]; }
  std::span<const std::uint32_t> images() const noexcept { return images_; }

  bool is_identity() const noexcept;
  /// First point moved, if any.
  std::optional<std::uint32_t> first_moved() const noexcept;
  Permutation inverse() const;
  /// Order of the permutation (lcm of its cycle lengths).
  BigInt order() const;

  friend Permutation operator*(const Permutation& p, const Permutation& q);
  friend bool operator==(const Permutation&, const Permutation&) = default;
  friend auto operator<=>(const Permutation& a, const Permutation& b) {
    return a.images_ <=> b.images_;
  }

  /// Validates that `images` is a bijection.
  static bool is_bijection(std::span<const std::uint32_t> images);

 private:
  std::vector<std::uint32_t> images_;
};

/// A permutation group with a stabilizer chain built by the deterministic
/// Schreier-Sims algorithm. Base points are chosen as the least point moved by
/// the generator that forces a new level, and Schreier generators are processed
/// in (orbit point, generator) order, so every derived quantity is reproducible.
class PermGroup {
 public:
  PermGroup() = default;
  PermGroup(std::size_t degree, std::vector<Permutation> generators);

  std::size_t degree() const noexcept { return degree_; }
  std::span<const Permutation> generators() const noexcept { return generators_; }

  const BigInt& order() const noexcept { return order_; }
  bool contains(const Permutation& p) const;
  bool is_trivial() const noexcept { return chain_.empty(); }

  /// Base points and fundamental orbit sizes, outermost first.
  std::vector<std::uint32_t> base() const;
  std::vector<std::size_t> fundamental_orbit_sizes() const;

  /// Orbit of `point` under the generators, in breadth-first discovery order.
  std::vector<std::uint32_t> orbit(std::uint32_t point) const;
  /// Orbits partitioning {0..n-1}, each sorted, listed by least element.
  std::vector<std::vector<std::uint32_t>> orbits() const;
  bool is_transitive() const;

  /// Subgroup test by generators; exact.
  bool contains_group(const PermGroup& other) const;
  bool same_group(const PermGroup& other) const;

  /// A new group generated by these generators plus `extra`.
  PermGroup with_generator(const Permutation& extra) const;

  /// Normal closure of `seeds` under conjugation by `ambient` generators.
  static PermGroup normal_closure(std::size_t degree, std::vector<Permutation> seeds,
                                  std::span<const Permutation> ambient);

 private:
  struct Level {
    std::uint32_t base = 0;
    std::vector<Permutation> strong;          // strong generators fixing earlier base points
    std::vector<std::uint32_t> orbit;         // discovery order
    std::vector<std::int32_t> orbit_slot;     // point -> index into transversal, or -1
    std::vector<Permutation> transversal;     // transversal[slot](base) == orbit[slot]
  };

  void build();
  void rebuild_orbit(Level& level) const;
  /// Sifts g through levels [from, end). Returns the residue and the level it stopped at.
  std::pair<Permutation, std::size_t> strip(Permutation g, std::size_t from) const;

  std::size_t degree_ = 0;
  std::vector<Permutation> generators_;
  std::vector<Level> chain_;
  BigInt order_ = 1;
};

}  // namespace selfsim
