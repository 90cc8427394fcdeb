#include "selfsim/preset.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>

#include "selfsim/error.hpp"
#include "selfsim/tree.hpp"
#include "selfsim/word.hpp"

namespace selfsim {

std::vector<std::string> GroupPreset::generator_names() const {
  std::vector<std::string> names;
  names.reserve(generators.size());
  for (const auto& g : generators) names.push_back(g.name);
  return names;
}

bool ValidationReport::has(std::string_view kind) const {
  return std::any_of(issues.begin(), issues.end(),
                     [&](const PresetIssue& i) { return i.kind == kind; });
}

GroupPreset grigorchuk_preset() {
  GroupPreset p;
  p.name = "grigorchuk";
  p.degree = 2;
  p.generators = {
      {"a", {1, 0}, {"1", "1"}},
      {"b", {0, 1}, {"a", "c"}},
      {"c", {0, 1}, {"a", "d"}},
      {"d", {0, 1}, {"1", "b"}},
  };
  for (const char* x : {"a", "b", "c", "d"}) {
    p.rules.push_back({std::string(x) + " " + x, "1"});
  }
  p.rules.push_back({"b c", "d"});
  p.rules.push_back({"c b", "d"});
  p.rules.push_back({"b d", "c"});
  p.rules.push_back({"d b", "c"});
  p.rules.push_back({"c d", "b"});
  p.rules.push_back({"d c", "b"});
  // (ab)^2 and its conjugates by a, b, c, d, all in reduced form.
  p.branching = {"a b a b", "b a b a", "c a b a d", "d a b a c"};
  p.contracting_certified = true;
  return p;
}

namespace {

int mod(int x, unsigned d) {
  const int m = static_cast<int>(d);
  return ((x % m) + m) % m;
}

std::string power_text(const std::string& name, int k) {
  if (k == 0) return "1";
  if (k == 1) return name;
  return name + "^" + std::to_string(k);
}

bool is_prime(unsigned n) {
  if (n < 2) return false;
  for (unsigned q = 2; q * q <= n; ++q) {
    if (n % q == 0) return false;
  }
  return true;
}

}  // namespace

GroupPreset ggs_preset(unsigned degree, std::span<const int> defining_vector) {
  check_degree(degree);
  if (defining_vector.empty() || defining_vector.size() != degree - 1) {
    throw Error(Errc::invalid_preset, "GGS defining vector must have exactly d - 1 = " +
                                          std::to_string(degree - 1) + " entries");
  }
  GroupPreset p;
  std::ostringstream name;
  name << "ggs:" << degree << ":";
  for (std::size_t i = 0; i < defining_vector.size(); ++i) {
    name << (i ? "," : "") << mod(defining_vector[i], degree);
  }
  p.name = name.str();
  p.degree = degree;

  GeneratorRecursion a{"a", {}, {}};
  GeneratorRecursion b{"b", {}, {}};
  for (unsigned i = 0; i < degree; ++i) {
    a.root_perm.push_back((i + 1) % degree);
    a.sections.push_back("1");
    b.root_perm.push_back(i);
  }
  for (int e : defining_vector) b.sections.push_back(power_text("a", mod(e, degree)));
  b.sections.push_back("b");
  p.generators = {a, b};

  p.rules = {{power_text("a", static_cast<int>(degree)), "1"},
             {power_text("b", static_cast<int>(degree)), "1"}};
  // The commutator [a, b] and its conjugates by a and b; K is their normal closure.
  p.branching = {"a b a^-1 b^-1", "a^2 b a^-1 b^-1 a^-1", "b a b a^-1 b^-2"};
  p.contracting_certified = true;
  return p;
}

GroupPreset gupta_sidki_preset() {
  const int e[] = {1, -1};
  auto p = ggs_preset(3, e);
  p.name = "gupta-sidki";
  return p;
}

bool regular_branch_vector_check(unsigned degree, std::span<const int> defining_vector) {
  if (degree < 2 || defining_vector.size() != degree - 1) return false;
  std::vector<int> e;
  for (int x : defining_vector) e.push_back(mod(x, degree));
  if (degree == 3 && e[0] == 1 && e[1] == 2) return true;
  if (!is_prime(degree)) return false;
  const bool all_zero = std::all_of(e.begin(), e.end(), [](int x) { return x == 0; });
  const bool all_nonzero = std::all_of(e.begin(), e.end(), [](int x) { return x != 0; });
  return !all_zero && !all_nonzero;
}

ValidationReport validate_preset(const GroupPreset& preset) {
  ValidationReport report;
  auto issue = [&](std::string kind, std::string location, std::string message) {
    report.issues.push_back({std::move(kind), std::move(location), std::move(message)});
  };

  if (preset.degree < 2 || preset.degree > kMaxDegree) {
    issue("invalid-degree", "degree", "degree " + std::to_string(preset.degree) +
                                          " outside [2, " + std::to_string(kMaxDegree) + "]");
    return report;
  }
  if (preset.generators.empty()) issue("no-generators", "generators", "preset has no generators");

  std::set<std::string> seen;
  for (std::size_t g = 0; g < preset.generators.size(); ++g) {
    const auto& gen = preset.generators[g];
    const std::string where = "generators[" + std::to_string(g) + "]";
    const bool name_ok = !gen.name.empty() && gen.name != "1" &&
                         (std::isalpha(static_cast<unsigned char>(gen.name[0])) ||
                          gen.name[0] == '_') &&
                         std::all_of(gen.name.begin(), gen.name.end(), [](char c) {
                           return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
                         });
    if (!name_ok) issue("bad-name", where + ".name", "invalid generator name \"" + gen.name + "\"");
    if (!seen.insert(gen.name).second) {
      issue("duplicate-name", where + ".name", "generator name \"" + gen.name + "\" repeated");
    }

    std::vector<unsigned> sorted = gen.root_perm;
    std::sort(sorted.begin(), sorted.end());
    std::vector<unsigned> expected(preset.degree);
    std::iota(expected.begin(), expected.end(), 0u);
    if (sorted != expected) {
      issue("not-a-permutation", where + ".root_perm",
            "root_perm is not a bijection of {0,...," + std::to_string(preset.degree - 1) + "}");
    }
    if (gen.sections.size() != preset.degree) {
      issue("section-count", where + ".sections",
            "expected " + std::to_string(preset.degree) + " sections, got " +
                std::to_string(gen.sections.size()));
    }
  }

  const auto names = preset.generator_names();
  auto check_word = [&](const std::string& text,
                        const std::string& where) -> std::optional<std::vector<Letter>> {
    try {
      return parse_letters(text, names);
    } catch (const Error& e) {
      issue(e.code() == Errc::unknown_symbol ? "unknown-symbol" : "parse-error", where, e.what());
      return std::nullopt;
    }
  };

  for (std::size_t g = 0; g < preset.generators.size(); ++g) {
    const auto& gen = preset.generators[g];
    for (std::size_t i = 0; i < gen.sections.size(); ++i) {
      check_word(gen.sections[i],
                 "generators[" + std::to_string(g) + "].sections[" + std::to_string(i) + "]");
    }
  }

  std::vector<RewritingSystem::Rule> raw;
  std::vector<std::size_t> raw_index;
  for (std::size_t r = 0; r < preset.rules.size(); ++r) {
    const std::string where = "rules[" + std::to_string(r) + "]";
    auto lhs = check_word(preset.rules[r].lhs, where + ".lhs");
    auto rhs = check_word(preset.rules[r].rhs, where + ".rhs");
    if (lhs && rhs) {
      raw.push_back({*lhs, *rhs});
      raw_index.push_back(r);
    }
  }
  // Length check on inverse-normalised letters, which is what the reducer rewrites.
  const auto orders = detect_generator_orders(names.size(), raw);
  auto normal_length = [&](const std::vector<Letter>& w) {
    std::size_t n = 0;
    for (const auto& l : w) n += (l.exp < 0 && orders[l.gen]) ? *orders[l.gen] - 1 : 1;
    return n;
  };
  for (std::size_t k = 0; k < raw.size(); ++k) {
    const std::string where = "rules[" + std::to_string(raw_index[k]) + "]";
    if (raw[k].lhs.empty()) {
      issue("empty-lhs", where, "rule left-hand side is the identity");
      continue;
    }
    const auto ll = normal_length(raw[k].lhs);
    const auto rl = normal_length(raw[k].rhs);
    if (rl > ll) {
      issue("length-increasing", where, "rule right-hand side is longer than its left-hand side");
    } else if (rl == ll && !(GroupWord(raw[k].rhs) < GroupWord(raw[k].lhs))) {
      issue("not-reducing", where,
            "equal-length rule must rewrite to a shortlex-smaller word to terminate");
    }
  }

  for (std::size_t k = 0; k < preset.branching.size(); ++k) {
    check_word(preset.branching[k], "branching[" + std::to_string(k) + "]");
  }
  return report;
}

nlohmann::json preset_to_json(const GroupPreset& preset) {
  nlohmann::json gens = nlohmann::json::array();
  for (const auto& g : preset.generators) {
    gens.push_back({{"name", g.name}, {"root_perm", g.root_perm}, {"sections", g.sections}});
  }
  nlohmann::json rules = nlohmann::json::array();
  for (const auto& r : preset.rules) rules.push_back({{"lhs", r.lhs}, {"rhs", r.rhs}});
  return {{"name", preset.name},
          {"degree", preset.degree},
          {"generators", gens},
          {"rules", rules},
          {"branching", preset.branching},
          {"contracting", preset.contracting_certified}};
}

GroupPreset preset_from_json(const nlohmann::json& doc) {
  try {
    GroupPreset p;
    p.name = doc.value("name", std::string("custom"));
    p.degree = doc.at("degree").get<unsigned>();
    for (const auto& g : doc.at("generators")) {
      GeneratorRecursion gen;
      gen.name = g.at("name").get<std::string>();
      gen.root_perm = g.at("root_perm").get<std::vector<unsigned>>();
      gen.sections = g.at("sections").get<std::vector<std::string>>();
      p.generators.push_back(std::move(gen));
    }
    if (doc.contains("rules")) {
      for (const auto& r : doc.at("rules")) {
        p.rules.push_back({r.at("lhs").get<std::string>(), r.at("rhs").get<std::string>()});
      }
    }
    if (doc.contains("branching")) p.branching = doc.at("branching").get<std::vector<std::string>>();
    p.contracting_certified = doc.value("contracting", false);
    return p;
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::parse_error, std::string("malformed group definition: ") + e.what());
  }
}

std::string canonical_text(const GroupPreset& preset) { return preset_to_json(preset).dump(2); }

std::string preset_fingerprint(const GroupPreset& preset) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : canonical_text(preset)) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

GroupPreset load_preset_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::parse_error, "cannot open group definition " + path.string());
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::parse_error, "group definition " + path.string() + ": " + e.what());
  }
  return preset_from_json(doc);
}

GroupPreset resolve_preset(const std::string& source) {
  if (source == "grigorchuk") return grigorchuk_preset();
  if (source == "gupta-sidki") return gupta_sidki_preset();
  if (source.rfind("ggs:", 0) == 0) {
    const auto colon = source.find(':', 4);
    if (colon == std::string::npos) {
      throw Error(Errc::parse_error, "expected ggs:<d>:<e1>,<e2>,... got " + source);
    }
    unsigned degree = 0;
    std::vector<int> e;
    try {
      degree = static_cast<unsigned>(std::stoul(source.substr(4, colon - 4)));
      std::stringstream ss(source.substr(colon + 1));
      std::string item;
      while (std::getline(ss, item, ',')) e.push_back(std::stoi(item));
    } catch (const std::exception&) {
      throw Error(Errc::parse_error, "expected ggs:<d>:<e1>,<e2>,... got " + source);
    }
    return ggs_preset(degree, e);
  }
  return load_preset_file(source);
}

}  // namespace selfsim
