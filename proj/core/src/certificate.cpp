#include "selfsim/certificate.hpp"

#include <algorithm>
#include <set>

#include "selfsim/error.hpp"
#include "selfsim/quotient.hpp"
#include "selfsim/rist.hpp"

namespace selfsim {

namespace {

constexpr std::size_t kFiniteLimit = 4096;
constexpr const char* kFormat = "selfsim-wm-certificate";

std::set<Vertex> q_orbit(const Group& group, std::span<const GroupWord> q_elements,
                         const Vertex& v) {
  std::set<Vertex> out;
  for (const auto& q : q_elements) out.insert(group.apply(q, v));
  return out;
}

bool below_any(const Vertex& w, const std::set<Vertex>& tops) {
  return std::any_of(tops.begin(), tops.end(), [&](const Vertex& t) { return vertex_leq(w, t); });
}

/// Vertices of level k below some vertex of `tops` (all of level k if tops is empty).
std::vector<Vertex> slice(const Group& group, std::size_t k, const std::set<Vertex>& tops) {
  std::vector<Vertex> out;
  for (auto& v : level_vertices(group.degree(), k)) {
    if (tops.empty() || below_any(v, tops)) out.push_back(std::move(v));
  }
  return out;
}

/// Q acts on the Q-invariant set `vertices`; true when it has a single orbit there.
bool transitive_on(const Group& group, std::span<const GroupWord> q_elements,
                   const std::vector<Vertex>& vertices) {
  if (vertices.empty()) return true;
  return q_orbit(group, q_elements, vertices.front()).size() == vertices.size();
}

std::vector<GroupWord> finite_elements(const Group& group, std::span<const GroupWord> q) {
  auto elements = enumerate_finite_subgroup(group, q, kFiniteLimit);
  if (!elements) {
    throw Error(Errc::precondition, "Q must be a finite subgroup (at most " +
                                        std::to_string(kFiniteLimit) + " elements)");
  }
  return *elements;
}

std::vector<std::string> format_all(const Group& group, std::span<const GroupWord> words) {
  std::vector<std::string> out;
  for (const auto& w : words) out.push_back(group.format(w));
  return out;
}

}  // namespace

nlohmann::json certificate_to_json(const Group& group, const WMCertificate& c) {
  nlohmann::json avoid = nlohmann::json::array();
  for (const auto& w : c.avoid) {
    avoid.push_back({{"generators", format_all(group, w.generators())},
                     {"membership_level", w.membership_level().value_or(0)}});
  }
  nlohmann::json stages = nlohmann::json::array();
  for (const auto& s : c.stages) {
    stages.push_back({{"k", s.k}, {"v", s.v.str()}, {"w", group.format(s.w)}, {"u", s.u.str()}});
  }
  return {{"format", kFormat},
          {"version", 1},
          {"preset", {{"name", c.preset_name}, {"fingerprint", c.fingerprint},
                      {"definition", c.preset}}},
          {"q", format_all(group, c.q)},
          {"avoid", avoid},
          {"stages", stages},
          {"verification_level", c.verification_level},
          {"budgets", {{"rist", c.budgets.rist},
                       {"candidates_per_vertex", c.budgets.candidates_per_vertex},
                       {"max_level", c.budgets.max_level}}},
          {"seed", c.seed}};
}

std::string certificate_to_text(const Group& group, const WMCertificate& c) {
  return certificate_to_json(group, c).dump(2) + "\n";
}

WMCertificate certificate_from_json(const Group& group, const nlohmann::json& doc) {
  try {
    if (doc.at("format").get<std::string>() != kFormat) {
      throw Error(Errc::parse_error, "not a certificate document");
    }
    WMCertificate c;
    const auto& preset = doc.at("preset");
    c.preset_name = preset.at("name").get<std::string>();
    c.fingerprint = preset.at("fingerprint").get<std::string>();
    c.preset = preset.value("definition", nlohmann::json::object());
    for (const auto& w : doc.at("q")) c.q.push_back(group.parse(w.get<std::string>()));
    for (const auto& a : doc.at("avoid")) {
      std::vector<GroupWord> gens;
      for (const auto& w : a.at("generators")) gens.push_back(group.parse(w.get<std::string>()));
      c.avoid.emplace_back(group, std::move(gens), a.at("membership_level").get<std::size_t>());
    }
    for (const auto& s : doc.at("stages")) {
      c.stages.push_back({s.at("k").get<std::size_t>(),
                          Vertex::parse(s.at("v").get<std::string>(), group.degree()),
                          group.parse(s.at("w").get<std::string>()),
                          Vertex::parse(s.at("u").get<std::string>(), group.degree())});
    }
    c.verification_level = doc.at("verification_level").get<std::size_t>();
    if (doc.contains("budgets")) {
      const auto& b = doc.at("budgets");
      c.budgets.rist = b.value("rist", c.budgets.rist);
      c.budgets.candidates_per_vertex = b.value("candidates_per_vertex", c.budgets.candidates_per_vertex);
      c.budgets.max_level = b.value("max_level", c.budgets.max_level);
    }
    c.seed = doc.value("seed", std::uint64_t{0});
    return c;
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::parse_error, std::string("malformed certificate: ") + e.what());
  }
}

WMCertificate build_certificate(const Group& group, std::span<const GroupWord> q,
                                const AvoidList& avoid, std::size_t verification_level,
                                const BuildBudgets& budgets, std::uint64_t seed) {
  WMCertificate c;
  c.preset_name = group.preset().name;
  c.fingerprint = group.fingerprint();
  c.preset = preset_to_json(group.preset());
  c.q.assign(q.begin(), q.end());
  c.avoid = avoid;
  c.verification_level = verification_level;
  c.budgets = budgets;
  c.seed = seed;

  for (const auto& w : avoid) {
    if (!w.has_image()) throw Error(Errc::precondition, "every avoided subgroup needs a membership level");
  }
  const auto q_elements = finite_elements(group, q);
  if (q_elements.size() < 2) {
    throw Error(Errc::precondition,
                "Q is trivial; choosing k_1 needs a nontrivial finite Q such as <a>");
  }
  if (avoid.empty()) return c;
  group.check_level(verification_level);

  std::optional<std::size_t> k1;
  for (std::size_t k = 1; k <= std::min(budgets.max_level, verification_level); ++k) {
    const auto image = image_subgroup(group, c.q, k);
    if (image.order() != BigInt(q_elements.size())) continue;
    if (image.group().is_transitive()) continue;
    k1 = k;
    break;
  }
  if (!k1) {
    throw Error(Errc::precondition,
                "no level k_1 <= " + std::to_string(std::min(budgets.max_level, verification_level)) +
                    " with Q acting faithfully and intransitively");
  }

  RistEngine engine(group, budgets.rist);
  const std::size_t seeds = group.branching().size();
  if (seeds == 0) throw Error(Errc::precondition, "preset has no branching seeds");
  std::vector<GroupWord> conjugators;
  for_each_word(group, 16, budgets.candidates_per_vertex, [&](const GroupWord& f) {
    conjugators.push_back(f);
    return true;
  });

  std::set<Vertex> previous_tops;  // Q(u_{i-1}); empty before the first stage
  std::size_t previous_k = 0;
  for (std::size_t i = 0; i < avoid.size(); ++i) {
    const auto fail = [&](const std::string& why) {
      throw Error(Errc::stage_failure, "stage " + std::to_string(i + 1) + ": " + why);
    };

    std::optional<std::size_t> level;
    if (i == 0) {
      level = k1;
    } else {
      for (std::size_t k = previous_k + 1; k <= std::min(budgets.max_level, verification_level); ++k) {
        if (!transitive_on(group, q_elements, slice(group, k, previous_tops))) {
          level = k;
          break;
        }
      }
    }
    if (!level) fail("no level up to the verification level where Q is intransitive on the slice");
    const std::size_t k = *level;
    const auto region = slice(group, k, previous_tops);

    std::optional<CertificateStage> stage;
    bool rist_found = false;
    for (const auto& v : level_vertices(group.degree(), k)) {
      std::optional<GroupWord> escaping;
      for (std::size_t n = 0; n < conjugators.size() && !escaping; ++n) {
        for (std::size_t s = 0; s < seeds && !escaping; ++s) {
          auto lifted = engine.lift_to_vertex(engine.seed_conjugate(s, conjugators[n]), v);
          if (!lifted) break;
          rist_found = true;
          if (!avoid[i].image_contains(group, lifted->word)) escaping = lifted->word;
        }
      }
      if (!escaping) continue;
      const auto orbit_v = q_orbit(group, q_elements, v);
      auto u = std::find_if(region.begin(), region.end(),
                            [&](const Vertex& x) { return !orbit_v.count(x); });
      if (u == region.end()) continue;
      stage = CertificateStage{k, v, std::move(*escaping), *u};
      break;
    }
    if (!stage) {
      fail(rist_found ? "no rigid-stabilizer element escaping W within the candidate budget"
                      : "no rigid-stabilizer element found within the search budget");
    }
    previous_tops = q_orbit(group, q_elements, stage->u);
    previous_k = k;
    c.stages.push_back(std::move(*stage));
  }
  return c;
}

bool ValidationResult::ok() const {
  return std::all_of(clauses.begin(), clauses.end(), [](const ClauseResult& r) { return r.pass; });
}

nlohmann::json ValidationResult::to_json() const {
  nlohmann::json list = nlohmann::json::array();
  for (const auto& r : clauses) {
    list.push_back({{"clause", r.clause}, {"pass", r.pass}, {"detail", r.detail}});
  }
  return {{"clauses", list}, {"verification_level", verification_level}, {"valid", ok()}};
}

ValidationResult validate_certificate(const Group& group, const WMCertificate& c) {
  ValidationResult out;
  const std::size_t n = c.verification_level;
  out.verification_level = n;
  auto add = [&](std::string clause, bool pass, std::string detail) {
    out.clauses.push_back({std::move(clause), pass, std::move(detail)});
  };

  add("preset", c.fingerprint == group.fingerprint(),
      c.fingerprint == group.fingerprint() ? "fingerprint " + c.fingerprint
                                           : "fingerprint " + c.fingerprint + " does not match " +
                                                 group.fingerprint());

  auto q_elements = enumerate_finite_subgroup(group, c.q, kFiniteLimit);
  if (!q_elements) {
    add("setup", false, "Q is not a finite subgroup within the enumeration limit");
    return out;
  }
  if (c.stages.empty()) {
    add("setup", true, "no stages");
    return out;
  }
  if (c.stages.size() > c.avoid.size()) {
    add("setup", false, "more stages than avoided subgroups");
    return out;
  }

  // Setup: Q meets Stab(k_1) trivially and is intransitive on level k_1.
  {
    const std::size_t k1 = c.stages.front().k;
    const auto image = image_subgroup(group, c.q, k1);
    const bool faithful = image.order() == BigInt(q_elements->size());
    const bool intransitive = !image.group().is_transitive();
    add("setup", faithful && intransitive,
        "|Q| = " + std::to_string(q_elements->size()) + ", image at level " + std::to_string(k1) +
            " has order " + to_decimal(image.order()) +
            (intransitive ? ", intransitive" : ", transitive"));
  }

  // Levels strictly increase, vertices sit on their level, and n covers every stage.
  {
    bool pass = true;
    std::string detail = "k =";
    for (std::size_t i = 0; i < c.stages.size(); ++i) {
      const auto& s = c.stages[i];
      detail += " " + std::to_string(s.k);
      if (i > 0 && s.k <= c.stages[i - 1].k) pass = false;
      if (s.v.level() != s.k || s.u.level() != s.k || s.k > n) pass = false;
    }
    add("levels", pass, detail + ", verification level " + std::to_string(n));
    if (!pass) return out;
  }
  group.check_level(n);

  {
    bool pass = true;
    std::string detail;
    for (std::size_t i = 0; i < c.stages.size(); ++i) {
      const Verdict r = in_rigid_stabilizer(group, c.stages[i].w, c.stages[i].v);
      if (r != Verdict::yes) {
        pass = false;
        detail += "w_" + std::to_string(i + 1) + " rigid at " + c.stages[i].v.str() + ": " +
                  verdict_name(r) + "; ";
      }
    }
    add("rigid", pass, pass ? "every w_i lies in Rist(v_i)" : detail);
  }

  // (1) level-image refutation of w_j in W_j.
  {
    bool pass = true;
    std::string detail;
    for (std::size_t i = 0; i < c.stages.size(); ++i) {
      const auto& w = c.avoid[i];
      const bool inside = w.image_contains(group, c.stages[i].w);
      if (inside) pass = false;
      detail += "w_" + std::to_string(i + 1) + (inside ? " inside" : " outside") + " W_" +
                std::to_string(i + 1) + " at level " +
                std::to_string(w.membership_level().value_or(0)) + "; ";
    }
    add("avoid", pass, detail);
  }

  // (2) normal closure of w_1..w_i in H_i equals H_i ∩ Stab(k_1), inside the level-n quotient.
  std::vector<PermGroup> closures;
  {
    bool pass = true;
    std::string detail;
    const std::size_t points = level_size(group.degree(), n);
    std::vector<Permutation> h_gens;
    for (const auto& x : c.q) h_gens.push_back(group.level_permutation(x, n));
    std::vector<Permutation> seeds;
    for (std::size_t i = 0; i < c.stages.size(); ++i) {
      const Permutation w = group.level_permutation(c.stages[i].w, n);
      h_gens.push_back(w);
      seeds.push_back(w);
      const PermGroup h(points, h_gens);
      PermGroup closure = PermGroup::normal_closure(points, seeds, h.generators());
      const bool equal = closure.order() * q_elements->size() == h.order();
      if (!equal) pass = false;
      detail += "i=" + std::to_string(i + 1) + ": |N| = " + to_decimal(closure.order()) +
                ", |H| = " + to_decimal(h.order()) + "; ";
      closures.push_back(std::move(closure));
    }
    add("normal-closure", pass, detail + "verified at level " + std::to_string(n));
  }

  // (3) nesting of the u_j, and the normal closure fixes the subtrees below Q(u_i) to depth n.
  {
    bool pass = true;
    std::string detail;
    const std::size_t points = level_size(group.degree(), n);
    std::vector<GroupWord> conjugates;
    std::vector<Permutation> conjugate_images;
    std::set<Vertex> previous;
    for (std::size_t i = 0; i < c.stages.size(); ++i) {
      const auto& s = c.stages[i];
      if (i > 0 && !below_any(s.u, previous)) {
        pass = false;
        detail += "u_" + std::to_string(i + 1) + " is not below Q(u_" + std::to_string(i) + "); ";
      }
      for (const auto& x : *q_elements) {
        conjugates.push_back(group.conjugate(x, s.w));
        conjugate_images.push_back(group.level_permutation(conjugates.back(), n));
      }
      if (!PermGroup(points, conjugate_images).same_group(closures[i])) {
        pass = false;
        detail += "conjugates q w_j q^-1 do not generate the normal closure at stage " +
                  std::to_string(i + 1) + "; ";
      }
      const auto tops = q_orbit(group, *q_elements, s.u);
      for (const auto& top : tops) {
        for (const auto& tail : level_vertices(group.degree(), n - s.k)) {
          const Vertex x = top.concat(tail);
          for (const auto& g : conjugates) {
            if (group.apply(g, x) != x) {
              pass = false;
              detail += "stage " + std::to_string(i + 1) + ": " + group.format(g) + " moves " +
                        x.str() + "; ";
              break;
            }
          }
        }
      }
      previous = tops;
    }
    add("nesting", pass, pass ? "subtrees below every Q(u_i) fixed to level " + std::to_string(n)
                              : detail);
  }
  return out;
}

}  // namespace selfsim
