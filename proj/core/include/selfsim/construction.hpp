#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "selfsim/group.hpp"
#include "selfsim/subgroup.hpp"

namespace selfsim {

/// Stab_G(v 0^(n-|v|)) as a handle with membership level n: the finite-level
/// stand-in for the parabolic subgroup of the ray through v 0 0 ...
SubgroupHandle parabolic_approximation(const Group& group, const Vertex& v, std::size_t level);

struct PullbackResult {
  SubgroupHandle handle;           // membership level n, flagged as an under-approximation
  std::size_t candidates = 0;      // Stab_G(k) generators examined
  bool budget_exhausted = false;
  /// "exact" when Delta is finite and section membership was decided element-wise,
  /// otherwise "level-L" for the image membership level used.
  std::string membership;

  nlohmann::json to_json(const Group& group) const;
};

/// Generators g of Stab_G(k) whose section at 0^k lies in Delta. Candidates are
/// the Schreier generators of Stab_G(k) for the breadth-first coset
/// representatives of G/Stab_G(k), examined in order, at most `budget` of them.
PullbackResult pullback_subgroup(const Group& group, const SubgroupHandle& delta, std::size_t k,
                                 std::size_t n, std::size_t budget);

struct TrapReport {
  std::size_t k = 0;
  std::size_t l = 0;
  bool fixes_level = false;          // clause (a)
  bool no_fixed_vertex = false;      // clause (b)
  std::optional<std::string> moving_generator;  // witness against (a)
  std::optional<Vertex> moved_vertex;
  std::optional<Vertex> fixed_vertex;           // witness against (b)

  bool pass() const noexcept { return fixes_level && no_fixed_vertex; }
  nlohmann::json to_json() const;
};

/// (a) every generator fixes level k, (b) no vertex of level k + l is fixed. Both exact.
TrapReport level_trap_check(const Group& group, std::span<const GroupWord> generators,
                            std::size_t k, std::size_t l);

struct TrapConstruction {
  SubgroupHandle delta;
  SubgroupHandle subgroup;   // generated by pullback generators and lifts of Q
  std::vector<GroupWord> q_lifts;
  TrapReport report;
  std::size_t pullback_candidates = 0;

  nlohmann::json to_json(const Group& group) const;
};

/// Builds a subgroup H of the pullback of Delta along 0^k for a finite Q:
/// Delta runs through <Q>, then <Q, x> for the generators x keeping it finite,
/// and the first choice whose H passes level_trap_check(H, k, l) is returned.
std::optional<TrapConstruction> construct_trap_subgroup(const Group& group,
                                                        std::span<const GroupWord> q,
                                                        std::size_t k, std::size_t l,
                                                        std::size_t n, std::size_t budget);

struct SeparationWitness {
  std::size_t level = 0;
  bool first_fixes = false;  // which subgroup has a fixed vertex there
  Vertex fixed;              // one such fixed vertex

  nlohmann::json to_json() const;
};

/// A level t <= depth at which exactly one of the two subgroups fixes a vertex.
std::optional<SeparationWitness> fix_separation_witness(const Group& group,
                                                        std::span<const GroupWord> first,
                                                        std::span<const GroupWord> second,
                                                        std::size_t depth);

struct ConjugateBound {
  std::size_t bound = 1;
  std::optional<GroupWord> gamma;
  BigInt gamma_order = 1;
  std::optional<GroupWord> escaping;                 // f
  std::vector<GroupWord> conjugators;                // f gamma^i with pairwise distinct images
  std::vector<BigInt> image_orders;
  std::size_t candidates = 0;

  nlohmann::json to_json(const Group& group) const;
};

/// Lower bound on the number of conjugates of H: for gamma of prime-power order
/// p^e whose power gamma^(p^(e-1)) has an escaping conjugator f, counts the
/// pairwise distinct level-n images of (f gamma^i) H (f gamma^i)^-1, 0 <= i < p^e.
ConjugateBound conjugate_count_lower_bound(const Group& group, const SubgroupHandle& h,
                                           std::size_t n, std::size_t budget,
                                           std::size_t gamma_max_length = 3);

}  // namespace selfsim
