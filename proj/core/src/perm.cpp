#include "selfsim/perm.hpp"

#include <algorithm>
#include <numeric>

#include <boost/integer/common_factor.hpp>

#include "selfsim/error.hpp"

namespace selfsim {

Permutation::Permutation(std::size_t degree) : images_(degree) {
  std::iota(images_.begin(), images_.end(), 0u);
}

Permutation::Permutation(std::vector<std::uint32_t> images) : images_(std::move(images)) {
  if (!is_bijection(images_)) throw Error(Errc::precondition, "image list is not a permutation");
}

bool Permutation::is_bijection(std::span<const std::uint32_t> images) {
  std::vector<bool> hit(images.size(), false);
  for (auto x : images) {
    if (x >= images.size() || hit[x]) return false;
    hit[x] = true;
  }
  return true;
}

bool Permutation::is_identity() const noexcept {
  for (std::uint32_t i = 0; i < images_.size(); ++i) {
    if (images_[i] != i) return false;
  }
  return true;
}

std::optional<std::uint32_t> Permutation::first_moved() const noexcept {
  for (std::uint32_t i = 0; i < images_.size(); ++i) {
    if (images_[i] != i) return i;
  }
  return std::nullopt;
}

Permutation Permutation::inverse() const {
  Permutation out(images_.size());
  for (std::uint32_t i = 0; i < images_.size(); ++i) out.images_[images_[i]] = i;
  return out;
}

BigInt Permutation::order() const {
  BigInt result = 1;
  std::vector<bool> seen(images_.size(), false);
  for (std::uint32_t i = 0; i < images_.size(); ++i) {
    if (seen[i]) continue;
    std::uint64_t len = 0;
    for (std::uint32_t j = i; !seen[j]; j = images_[j]) {
      seen[j] = true;
      ++len;
    }
    result = boost::integer::lcm(result, BigInt(len));
  }
  return result;
}

Permutation operator*(const Permutation& p, const Permutation& q) {
  if (p.degree() != q.degree()) throw Error(Errc::internal, "permutation degree mismatch");
  Permutation out;
  out.images_.resize(q.degree());
  for (std::size_t i = 0; i < q.degree(); ++i) out.images_[i] = p.images_[q.images_[i]];
  return out;
}

PermGroup::PermGroup(std::size_t degree, std::vector<Permutation> generators)
    : degree_(degree) {
  for (auto& g : generators) {
    if (g.degree() != degree) throw Error(Errc::internal, "generator degree mismatch");
    generators_.push_back(std::move(g));
  }
  build();
}

void PermGroup::rebuild_orbit(Level& level) const {
  level.orbit.clear();
  level.transversal.clear();
  level.orbit_slot.assign(degree_, -1);
  level.orbit.push_back(level.base);
  level.transversal.push_back(Permutation::identity(degree_));
  level.orbit_slot[level.base] = 0;
  for (std::size_t k = 0; k < level.orbit.size(); ++k) {
    const std::uint32_t p = level.orbit[k];
    for (const auto& s : level.strong) {
      const std::uint32_t q = s(p);
      if (level.orbit_slot[q] >= 0) continue;
      level.orbit_slot[q] = static_cast<std::int32_t>(level.orbit.size());
      level.orbit.push_back(q);
      level.transversal.push_back(s * level.transversal[k]);
    }
  }
}

std::pair<Permutation, std::size_t> PermGroup::strip(Permutation g, std::size_t from) const {
  for (std::size_t i = from; i < chain_.size(); ++i) {
    const Level& level = chain_[i];
    const std::uint32_t beta = g(level.base);
    const std::int32_t slot = level.orbit_slot[beta];
    if (slot < 0) return {std::move(g), i};
    g = level.transversal[static_cast<std::size_t>(slot)].inverse() * g;
  }
  return {std::move(g), chain_.size()};
}

void PermGroup::build() {
  chain_.clear();
  std::vector<Permutation> strong;
  for (const auto& g : generators_) {
    if (!g.is_identity()) strong.push_back(g);
  }
  if (strong.empty()) {
    order_ = 1;
    return;
  }

  auto fixes_base_prefix = [&](const Permutation& g, std::size_t count) {
    for (std::size_t j = 0; j < count; ++j) {
      if (g(chain_[j].base) != chain_[j].base) return false;
    }
    return true;
  };

  for (const auto& s : strong) {
    if (fixes_base_prefix(s, chain_.size())) {
      Level level;
      level.base = *s.first_moved();
      chain_.push_back(std::move(level));
    }
  }
  for (std::size_t i = 0; i < chain_.size(); ++i) {
    for (const auto& s : strong) {
      if (fixes_base_prefix(s, i)) chain_[i].strong.push_back(s);
    }
    rebuild_orbit(chain_[i]);
  }

  std::size_t i = chain_.size();
  while (i >= 1) {
    const std::size_t level_index = i - 1;
    bool restarted = false;
    for (std::size_t k = 0; k < chain_[level_index].orbit.size() && !restarted; ++k) {
      for (std::size_t si = 0; si < chain_[level_index].strong.size() && !restarted; ++si) {
        const Level& level = chain_[level_index];
        const std::uint32_t p = level.orbit[k];
        const Permutation& s = level.strong[si];
        const std::uint32_t sp = s(p);
        const auto& u_sp = level.transversal[static_cast<std::size_t>(level.orbit_slot[sp])];
        Permutation schreier = u_sp.inverse() * (s * level.transversal[k]);
        auto [residue, stop] = strip(std::move(schreier), level_index + 1);
        if (stop == chain_.size() && residue.is_identity()) continue;

        if (stop == chain_.size()) {
          Level fresh;
          fresh.base = *residue.first_moved();
          chain_.push_back(std::move(fresh));
        }
        for (std::size_t l = level_index + 1; l <= stop; ++l) {
          chain_[l].strong.push_back(residue);
          rebuild_orbit(chain_[l]);
        }
        i = stop + 1;
        restarted = true;
      }
    }
    if (!restarted) --i;
  }

  order_ = 1;
  for (const auto& level : chain_) order_ *= level.orbit.size();
}

bool PermGroup::contains(const Permutation& p) const {
  if (p.degree() != degree_) return false;
  auto [residue, stop] = strip(p, 0);
  return stop == chain_.size() && residue.is_identity();
}

std::vector<std::uint32_t> PermGroup::base() const {
  std::vector<std::uint32_t> out;
  for (const auto& level : chain_) out.push_back(level.base);
  return out;
}

std::vector<std::size_t> PermGroup::fundamental_orbit_sizes() const {
  std::vector<std::size_t> out;
  for (const auto& level : chain_) out.push_back(level.orbit.size());
  return out;
}

std::vector<std::uint32_t> PermGroup::orbit(std::uint32_t point) const {
  std::vector<std::uint32_t> out{point};
  std::vector<bool> seen(degree_, false);
  seen[point] = true;
  for (std::size_t k = 0; k < out.size(); ++k) {
    for (const auto& g : generators_) {
      const auto q = g(out[k]);
      if (!seen[q]) {
        seen[q] = true;
        out.push_back(q);
      }
    }
  }
  return out;
}

std::vector<std::vector<std::uint32_t>> PermGroup::orbits() const {
  std::vector<std::vector<std::uint32_t>> out;
  std::vector<bool> seen(degree_, false);
  for (std::uint32_t p = 0; p < degree_; ++p) {
    if (seen[p]) continue;
    auto o = orbit(p);
    for (auto q : o) seen[q] = true;
    std::sort(o.begin(), o.end());
    out.push_back(std::move(o));
  }
  return out;
}

bool PermGroup::is_transitive() const { return degree_ <= 1 || orbit(0).size() == degree_; }

bool PermGroup::contains_group(const PermGroup& other) const {
  return std::all_of(other.generators_.begin(), other.generators_.end(),
                     [&](const Permutation& g) { return contains(g); });
}

bool PermGroup::same_group(const PermGroup& other) const {
  return order_ == other.order_ && contains_group(other);
}

PermGroup PermGroup::with_generator(const Permutation& extra) const {
  auto gens = generators_;
  gens.push_back(extra);
  return PermGroup(degree_, std::move(gens));
}

PermGroup PermGroup::normal_closure(std::size_t degree, std::vector<Permutation> seeds,
                                    std::span<const Permutation> ambient) {
  PermGroup closure(degree, {});
  std::vector<Permutation> queue;
  for (auto& s : seeds) {
    if (!closure.contains(s)) {
      closure = closure.with_generator(s);
      queue.push_back(std::move(s));
    }
  }
  for (std::size_t k = 0; k < queue.size(); ++k) {
    for (const auto& x : ambient) {
      Permutation conj = x * queue[k] * x.inverse();
      if (!closure.contains(conj)) {
        closure = closure.with_generator(conj);
        queue.push_back(std::move(conj));
      }
    }
  }
  return closure;
}

}  // namespace selfsim
