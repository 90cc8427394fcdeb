#include "cli.hpp"

#include <cstdlib>
#include <fstream>
#include <functional>
#include <memory>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "selfsim/certificate.hpp"
#include "selfsim/construction.hpp"
#include "selfsim/error.hpp"
#include "selfsim/group.hpp"
#include "selfsim/quotient.hpp"
#include "selfsim/rist.hpp"
#include "selfsim/subgroup.hpp"

namespace selfsim::cli {

namespace {

using nlohmann::json;

struct Options {
  std::string preset = "grigorchuk";
  std::string format = "text";
  std::uint64_t seed = 0;
  std::size_t budget = kDefaultRecursionBudget;
  std::size_t level = 4;
};

void load_config(Options& opts) {
  const char* path = std::getenv(kConfigEnv);
  if (path == nullptr || *path == '\0') return;
  std::ifstream in(path);
  if (!in) throw Error(Errc::parse_error, std::string("cannot read config file ") + path);
  json doc;
  try {
    in >> doc;
    opts.preset = doc.value("preset", opts.preset);
    opts.format = doc.value("format", opts.format);
    opts.seed = doc.value("seed", opts.seed);
    opts.budget = doc.value("budget", opts.budget);
    opts.level = doc.value("level", opts.level);
  } catch (const json::exception& e) {
    throw Error(Errc::parse_error, std::string("malformed config file ") + path + ": " + e.what());
  }
}

std::string vertex_text(const Vertex& v) { return v.is_root() ? "(root)" : v.str(); }

std::vector<std::string> split_list(const std::vector<std::string>& items) {
  std::vector<std::string> out;
  for (const auto& item : items) {
    std::stringstream ss(item);
    std::string piece;
    while (std::getline(ss, piece, ',')) out.push_back(piece);
  }
  return out;
}

std::vector<std::string> format_all(const Group& g, std::span<const GroupWord> words) {
  std::vector<std::string> out;
  for (const auto& w : words) out.push_back(g.format(w));
  return out;
}

std::string join_lines(const std::vector<std::string>& lines) {
  std::string out;
  for (const auto& l : lines) out += l + "\n";
  return out;
}

class Session {
 public:
  Session(Options& opts, std::ostream& out) : opts_(opts), out_(out) {}

  Options& options() { return opts_; }

  const Group& group() {
    if (!group_) group_ = std::make_unique<Group>(resolve_preset(opts_.preset));
    return *group_;
  }
  void use_preset(GroupPreset preset) { group_ = std::make_unique<Group>(std::move(preset)); }

  GroupWord word(const std::string& text) { return group().parse(text); }
  std::vector<GroupWord> words(const std::vector<std::string>& texts) {
    std::vector<GroupWord> out;
    for (const auto& t : split_list(texts)) out.push_back(word(t));
    return out;
  }
  Vertex vertex(const std::string& text) { return Vertex::parse(text, group().degree()); }

  int emit(const std::string& command, json result, const std::string& text, int code) {
    if (opts_.format == "json") {
      json doc = {{"command", command},
                  {"seed", opts_.seed},
                  {"budget", opts_.budget},
                  {"level", opts_.level},
                  {"exit_code", code},
                  {"result", std::move(result)}};
      if (group_) {
        doc["preset"] = {{"name", group_->preset().name}, {"fingerprint", group_->fingerprint()}};
      }
      out_ << doc.dump(2) << "\n";
    } else {
      out_ << text;
      if (!text.empty() && text.back() != '\n') out_ << "\n";
    }
    return code;
  }

 private:
  Options& opts_;
  std::ostream& out_;
  std::unique_ptr<Group> group_;
};

int verdict_code(Verdict v) {
  switch (v) {
    case Verdict::yes: return kOk;
    case Verdict::no: return kCheckFailed;
    default: return kUndecided;
  }
}

int exit_code_for(Errc code) {
  switch (code) {
    case Errc::budget_exhausted:
    case Errc::stage_failure: return kUndecided;
    case Errc::not_in_level_stabilizer: return kCheckFailed;
    case Errc::internal: return kInternal;
    default: return kUsage;
  }
}

}  // namespace

int run_command(std::span<const std::string> args, std::ostream& out, std::ostream& err) {
  Options opts;
  try {
    load_config(opts);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  }
  Session session(opts, out);

  CLI::App app{"Exact computation in self-similar groups acting on regular rooted trees", "selfsim"};
  app.require_subcommand(1);
  auto* preset_opt = app.add_option("--preset", opts.preset,
                                    "grigorchuk | gupta-sidki | ggs:<d>:<e1>,... | definition file");
  app.add_option("--format", opts.format, "Output format")->check(CLI::IsMember({"text", "json"}));
  app.add_option("--seed", opts.seed, "Seed recorded in reports and certificates");
  app.add_option("--budget", opts.budget, "Search and recursion budget")->check(CLI::PositiveNumber);
  app.add_option("--level", opts.level, "Level (verification level where applicable)");

  std::function<int()> action;
  std::string command;
  auto leaf = [&](CLI::App* parent, const std::string& name, const std::string& help) {
    auto* sub = parent->add_subcommand(name, help);
    sub->fallthrough();
    sub->parse_complete_callback([&command, parent, name] { command = parent->get_name() + " " + name; });
    return sub;
  };
  auto family = [&](const std::string& name, const std::string& help) {
    auto* sub = app.add_subcommand(name, help);
    sub->require_subcommand(1);
    sub->fallthrough();
    return sub;
  };

  std::string word_arg, vertex_arg, gamma_arg, file_arg, output_arg;
  std::vector<std::string> gens_arg, q_arg{"a"}, avoid_arg, second_arg, delta_arg;
  std::size_t depth_arg = 3, k_arg = 1, l_arg = 1, k2_arg = 2;
  std::optional<std::size_t> max_level_arg, membership_arg, avoid_level_arg;

  // group
  auto* group_cmd = family("group", "Preset inspection");
  leaf(group_cmd, "show", "Print the preset definition")->callback([&] {
    action = [&] {
      const Group& g = session.group();
      json result = {{"definition", preset_to_json(g.preset())}, {"fingerprint", g.fingerprint()}};
      return session.emit(command, result,
                          canonical_text(g.preset()) + "\nfingerprint: " + g.fingerprint() + "\n", kOk);
    };
  });
  leaf(group_cmd, "validate", "Validate a preset without compiling it")->callback([&] {
    action = [&] {
      const GroupPreset p = resolve_preset(opts.preset);
      const auto report = validate_preset(p);
      json issues = json::array();
      std::string text = report.ok() ? "valid\n" : "invalid\n";
      for (const auto& i : report.issues) {
        issues.push_back({{"kind", i.kind}, {"location", i.location}, {"message", i.message}});
        text += "  " + i.kind + " at " + i.location + ": " + i.message + "\n";
      }
      json result = {{"valid", report.ok()}, {"issues", issues}, {"fingerprint", preset_fingerprint(p)}};
      return session.emit(command, result, text, report.ok() ? kOk : kCheckFailed);
    };
  });

  // elem
  auto* elem_cmd = family("elem", "Element operations");
  auto* apply_cmd = leaf(elem_cmd, "apply", "Image of a vertex");
  apply_cmd->add_option("word", word_arg)->required();
  apply_cmd->add_option("vertex", vertex_arg)->required();
  apply_cmd->callback([&] {
    action = [&] {
      const GroupWord g = session.word(word_arg);
      const Vertex v = session.vertex(vertex_arg);
      const Vertex image = session.group().apply(g, v);
      return session.emit(command, {{"word", session.group().format(g)}, {"vertex", v.str()},
                                    {"image", image.str()}},
                          vertex_text(image), kOk);
    };
  });
  auto* section_cmd = leaf(elem_cmd, "section", "Section at a vertex");
  section_cmd->add_option("word", word_arg)->required();
  section_cmd->add_option("vertex", vertex_arg)->required();
  section_cmd->callback([&] {
    action = [&] {
      const GroupWord g = session.word(word_arg);
      const Vertex v = session.vertex(vertex_arg);
      const std::string s = session.group().format(session.group().section(g, v));
      return session.emit(command, {{"word", session.group().format(g)}, {"vertex", v.str()},
                                    {"section", s}},
                          s, kOk);
    };
  });
  auto* order_cmd = leaf(elem_cmd, "order", "Element order");
  order_cmd->add_option("word", word_arg)->required();
  order_cmd->callback([&] {
    action = [&] {
      const GroupWord g = session.word(word_arg);
      const auto r = session.group().element_order(g, opts.budget);
      json result = {{"word", session.group().format(g)}, {"nodes", r.nodes}};
      switch (r.status) {
        case OrderResult::Status::finite:
          result["status"] = "finite";
          result["order"] = to_decimal(r.order);
          return session.emit(command, result, to_decimal(r.order), kOk);
        case OrderResult::Status::infinite:
          result["status"] = "infinite";
          return session.emit(command, result, "infinite", kOk);
        default:
          result["status"] = "undecided";
          return session.emit(command, result, "undecided", kUndecided);
      }
    };
  });
  auto* portrait_cmd = leaf(elem_cmd, "portrait", "Depth-n portrait");
  portrait_cmd->add_option("word", word_arg)->required();
  portrait_cmd->add_option("--depth", depth_arg, "Portrait depth");
  portrait_cmd->callback([&] {
    action = [&] {
      const Portrait p = session.group().portrait(session.word(word_arg), depth_arg);
      std::string text;
      for (const auto& [v, perm] : p.decorations) {
        text += vertex_text(v) + ":";
        for (auto x : perm) text += " " + std::to_string(x);
        text += "\n";
      }
      return session.emit(command, portrait_to_json(p), text, kOk);
    };
  });
  auto* identity_cmd = leaf(elem_cmd, "identity", "Word problem");
  identity_cmd->add_option("word", word_arg)->required();
  identity_cmd->callback([&] {
    action = [&] {
      const GroupWord g = session.word(word_arg);
      const Verdict v = session.group().is_identity(g, opts.budget);
      return session.emit(command, {{"word", session.group().format(g)}, {"identity", verdict_name(v)}},
                          verdict_name(v), verdict_code(v));
    };
  });

  // quotient
  auto* quotient_cmd = family("quotient", "Level quotients G/Stab(n)");
  leaf(quotient_cmd, "order", "Order of the level quotient")->callback([&] {
    action = [&] {
      const BigInt o = quotient_order(session.group(), opts.level);
      return session.emit(command, {{"order", to_decimal(o)}}, to_decimal(o), kOk);
    };
  });
  leaf(quotient_cmd, "transitive", "Level transitivity")->callback([&] {
    action = [&] {
      const bool t = is_level_transitive(session.group(), opts.level);
      return session.emit(command, {{"transitive", t}}, t ? "yes" : "no", t ? kOk : kCheckFailed);
    };
  });
  auto* index_cmd = leaf(quotient_cmd, "index", "Index of a subgroup image");
  index_cmd->add_option("--gens", gens_arg, "Generator words (comma separated or repeated)");
  index_cmd->callback([&] {
    action = [&] {
      const auto gens = session.words(gens_arg);
      const BigInt i = subgroup_index_in_quotient(session.group(), gens, opts.level);
      const auto image = image_subgroup(session.group(), gens, opts.level);
      return session.emit(command, {{"index", to_decimal(i)}, {"image", image.to_json()}},
                          to_decimal(i), kOk);
    };
  });
  auto* stab_cmd = leaf(quotient_cmd, "stab", "Schreier generators of a vertex stabilizer");
  stab_cmd->add_option("vertex", vertex_arg)->required();
  stab_cmd->callback([&] {
    action = [&] {
      const Vertex v = session.vertex(vertex_arg);
      const auto words = point_stabilizer_words(session.group(), v);
      const auto image = image_subgroup(session.group(), words, v.level());
      const auto listed = format_all(session.group(), words);
      return session.emit(command, {{"vertex", v.str()}, {"generators", listed},
                                    {"image", image.to_json()}},
                          join_lines(listed), kOk);
    };
  });

  // sub
  auto* sub_cmd = family("sub", "Subgroup diagnostics");
  auto* fix_cmd = leaf(sub_cmd, "fix", "Fixed vertices at a level");
  fix_cmd->add_option("--gens", gens_arg)->required();
  fix_cmd->callback([&] {
    action = [&] {
      const auto fixed = fixed_vertices(session.group(), session.words(gens_arg), opts.level);
      std::vector<std::string> listed;
      for (const auto& v : fixed) listed.push_back(vertex_text(v));
      return session.emit(command, {{"fixed", listed}}, fixed.empty() ? "none" : join_lines(listed), kOk);
    };
  });
  auto* fixlevel_cmd = leaf(sub_cmd, "fixlevel", "Least level without fixed vertices");
  fixlevel_cmd->add_option("--gens", gens_arg)->required();
  fixlevel_cmd->add_option("--max-level", max_level_arg, "Deepest level tested (default 8)");
  fixlevel_cmd->callback([&] {
    action = [&] {
      const std::size_t max_level = max_level_arg.value_or(8);
      const auto l = minimal_non_fixing_level(session.group(), session.words(gens_arg), max_level);
      json result = {{"max_level", max_level}};
      result["level"] = l ? json(*l) : json(nullptr);
      return session.emit(command, result, l ? std::to_string(*l) : "none", l ? kOk : kCheckFailed);
    };
  });
  auto* psi_cmd = leaf(sub_cmd, "psi", "Sections at the level-k vertices");
  psi_cmd->add_option("word", word_arg)->required();
  psi_cmd->callback([&] {
    action = [&] {
      const auto sections = psi_sections(session.group(), session.word(word_arg), opts.level);
      const auto listed = format_all(session.group(), sections);
      return session.emit(command, {{"sections", listed}}, join_lines(listed), kOk);
    };
  });
  auto* rist_cmd = leaf(sub_cmd, "rist", "Rigid stabilizer membership");
  rist_cmd->add_option("word", word_arg)->required();
  rist_cmd->add_option("vertex", vertex_arg)->required();
  rist_cmd->callback([&] {
    action = [&] {
      const Verdict v = in_rigid_stabilizer(session.group(), session.word(word_arg),
                                            session.vertex(vertex_arg), opts.budget);
      return session.emit(command, {{"in_rigid_stabilizer", verdict_name(v)}}, verdict_name(v),
                          verdict_code(v));
    };
  });
  auto* profile_cmd = leaf(sub_cmd, "profile", "Index growth profile up to --level");
  profile_cmd->add_option("--gens", gens_arg);
  profile_cmd->callback([&] {
    action = [&] {
      const auto p = index_growth_profile(session.group(), session.words(gens_arg), opts.level);
      std::string text;
      for (const auto& i : p.indices) text += to_decimal(i) + " ";
      text += "(" + p.trend + ")";
      return session.emit(command, p.to_json(), text, kOk);
    };
  });
  auto* escape_cmd = leaf(sub_cmd, "escape", "Conjugate of gamma escaping the subgroup image");
  escape_cmd->add_option("--gens", gens_arg);
  escape_cmd->add_option("--gamma", gamma_arg)->required();
  escape_cmd->add_option("--membership-level", membership_arg);
  escape_cmd->callback([&] {
    action = [&] {
      const SubgroupHandle h(session.group(), session.words(gens_arg),
                             membership_arg.value_or(opts.level));
      const auto f = conjugate_escaping(session.group(), h, session.word(gamma_arg), opts.level,
                                        opts.budget);
      json result;
      result["conjugator"] = f ? json(session.group().format(*f)) : json(nullptr);
      return session.emit(command, result, f ? session.group().format(*f) : "not-found",
                          f ? kOk : kUndecided);
    };
  });

  // wm
  auto* wm_cmd = family("wm", "Weakly maximal subgroup constructions");
  auto* search_cmd = leaf(wm_cmd, "rist-search", "Element of a rigid vertex stabilizer");
  search_cmd->add_option("vertex", vertex_arg)->required();
  search_cmd->callback([&] {
    action = [&] {
      const auto w = rist_element_search(session.group(), session.vertex(vertex_arg), opts.budget);
      json result;
      result["word"] = w ? json(session.group().format(*w)) : json(nullptr);
      return session.emit(command, result, w ? session.group().format(*w) : "not-found",
                          w ? kOk : kUndecided);
    };
  });
  auto* pullback_cmd = leaf(wm_cmd, "pullback", "Pullback of Delta along the leftmost level-k vertex");
  pullback_cmd->add_option("--delta", delta_arg, "Generators of Delta")->required();
  pullback_cmd->add_option("--membership-level", membership_arg, "Membership level of Delta");
  pullback_cmd->add_option("-k", k_arg, "Level k");
  pullback_cmd->callback([&] {
    action = [&] {
      const SubgroupHandle delta(session.group(), session.words(delta_arg),
                                 membership_arg.value_or(opts.level));
      const auto r = pullback_subgroup(session.group(), delta, k_arg, opts.level, opts.budget);
      return session.emit(command, r.to_json(session.group()),
                          join_lines(format_all(session.group(), r.handle.generators())),
                          r.budget_exhausted ? kUndecided : kOk);
    };
  });
  auto* trap_cmd = leaf(wm_cmd, "trap", "Level trap: fixes level k, no fixed vertex at level k+l");
  trap_cmd->add_option("--gens", gens_arg, "Check these generators instead of building H from Q");
  trap_cmd->add_option("--q", q_arg, "Generators of the finite subgroup Q");
  trap_cmd->add_option("-k", k_arg);
  trap_cmd->add_option("-l", l_arg);
  trap_cmd->callback([&] {
    action = [&] {
      const Group& g = session.group();
      if (!gens_arg.empty()) {
        const auto report = level_trap_check(g, session.words(gens_arg), k_arg, l_arg);
        return session.emit(command, report.to_json(), report.pass() ? "pass" : "fail",
                            report.pass() ? kOk : kCheckFailed);
      }
      const std::size_t n = std::max(opts.level, k_arg + l_arg);
      const auto c = construct_trap_subgroup(g, session.words(q_arg), k_arg, l_arg, n, opts.budget);
      if (!c) return session.emit(command, json(nullptr), "fail", kCheckFailed);
      std::string text = std::string(c->report.pass() ? "pass" : "fail") + "\n" +
                         join_lines(format_all(g, c->subgroup.generators()));
      return session.emit(command, c->to_json(g), text, c->report.pass() ? kOk : kCheckFailed);
    };
  });
  auto* build_cmd = leaf(wm_cmd, "build", "Staged construction with certificate");
  build_cmd->add_option("--q", q_arg, "Generators of the finite subgroup Q");
  build_cmd->add_option("--avoid", avoid_arg,
                        "Vertices whose parabolic approximations form the avoid list");
  build_cmd->add_option("--avoid-level", avoid_level_arg, "Membership level of the avoid list");
  build_cmd->add_option("-o,--output", output_arg, "Write the certificate to this file");
  build_cmd->callback([&] {
    action = [&] {
      const Group& g = session.group();
      AvoidList avoid;
      for (const auto& v : split_list(avoid_arg)) {
        avoid.push_back(parabolic_approximation(g, session.vertex(v), avoid_level_arg.value_or(opts.level)));
      }
      BuildBudgets budgets;
      budgets.rist = opts.budget;
      const auto cert = build_certificate(g, session.words(q_arg), avoid, opts.level, budgets, opts.seed);
      const std::string text = certificate_to_text(g, cert);
      if (!output_arg.empty()) {
        std::ofstream file(output_arg, std::ios::binary);
        if (!file) throw Error(Errc::precondition, "cannot write " + output_arg);
        file << text;
        return session.emit(command, {{"stages", cert.stages.size()}, {"output", output_arg}},
                            std::to_string(cert.stages.size()) + " stages written to " + output_arg, kOk);
      }
      return session.emit(command, certificate_to_json(g, cert), text, kOk);
    };
  });
  auto* validate_cmd = leaf(wm_cmd, "validate", "Re-check a certificate");
  validate_cmd->add_option("file", file_arg)->required();
  validate_cmd->callback([&] {
    action = [&] {
      auto fail = [&](const std::string& why) {
        return session.emit(command, {{"valid", false}, {"error", why}}, "invalid: " + why, kCheckFailed);
      };
      std::ifstream in(file_arg);
      if (!in) throw Error(Errc::precondition, "cannot read " + file_arg);
      json doc;
      try {
        in >> doc;
      } catch (const json::exception& e) {
        return fail(std::string("not a JSON document: ") + e.what());
      }
      try {
        if (preset_opt->count() == 0 && doc.contains("preset") && doc["preset"].contains("definition")) {
          session.use_preset(preset_from_json(doc["preset"]["definition"]));
        }
        const Group& g = session.group();
        const auto cert = certificate_from_json(g, doc);
        const auto report = validate_certificate(g, cert);
        std::string text = report.ok() ? "valid\n" : "invalid\n";
        for (const auto& c : report.clauses) {
          text += std::string(c.pass ? "  pass " : "  FAIL ") + c.clause + ": " + c.detail + "\n";
        }
        return session.emit(command, report.to_json(), text, report.ok() ? kOk : kCheckFailed);
      } catch (const Error& e) {
        if (e.code() == Errc::internal) throw;
        return fail(e.what());
      }
    };
  });
  auto* separate_cmd = leaf(wm_cmd, "separate", "Fix-based non-conjugacy witness");
  separate_cmd->add_option("--gens", gens_arg, "First subgroup");
  separate_cmd->add_option("--second", second_arg, "Second subgroup");
  separate_cmd->add_option("--q", q_arg, "Q for trap subgroups when --gens/--second are omitted");
  separate_cmd->add_option("-k", k_arg, "Trap level of the first subgroup");
  separate_cmd->add_option("--k2", k2_arg, "Trap level of the second subgroup");
  separate_cmd->add_option("--depth", depth_arg);
  separate_cmd->callback([&] {
    action = [&] {
      const Group& g = session.group();
      std::vector<GroupWord> first, second;
      if (!gens_arg.empty() || !second_arg.empty()) {
        first = session.words(gens_arg);
        second = session.words(second_arg);
      } else {
        const auto q = session.words(q_arg);
        for (auto [k, target] : {std::pair{k_arg, &first}, std::pair{k2_arg, &second}}) {
          const auto c = construct_trap_subgroup(g, q, k, 1, std::max(opts.level, k + 1), opts.budget);
          if (!c || !c->report.pass()) throw Error(Errc::stage_failure, "trap construction failed at k=" + std::to_string(k));
          *target = c->subgroup.generators();
        }
      }
      const auto w = fix_separation_witness(g, first, second, depth_arg);
      json result;
      result["witness"] = w ? w->to_json() : json(nullptr);
      const std::string text =
          w ? "level " + std::to_string(w->level) + ": " + (w->first_fixes ? "first" : "second") +
                  " subgroup fixes " + vertex_text(w->fixed) + ", the other fixes nothing"
            : "inconclusive";
      return session.emit(command, result, text, w ? kOk : kCheckFailed);
    };
  });
  auto* conj_cmd = leaf(wm_cmd, "conjbound", "Lower bound on the number of conjugates");
  conj_cmd->add_option("--gens", gens_arg, "Subgroup generators");
  conj_cmd->add_option("--vertex", vertex_arg, "Use the parabolic approximation at this vertex");
  conj_cmd->callback([&] {
    action = [&] {
      const Group& g = session.group();
      const SubgroupHandle h = vertex_arg.empty() && !gens_arg.empty()
                                   ? SubgroupHandle(g, session.words(gens_arg), opts.level)
                                   : parabolic_approximation(g, session.vertex(vertex_arg), opts.level);
      const auto bound = conjugate_count_lower_bound(g, h, opts.level, opts.budget);
      return session.emit(command, bound.to_json(g), std::to_string(bound.bound), kOk);
    };
  });

  std::vector<std::string> argv_storage{"selfsim"};
  argv_storage.insert(argv_storage.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& a : argv_storage) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kOk : kUsage;
  }
  if (!action) {
    err << app.help();
    return kUsage;
  }
  try {
    return action();
  } catch (const Error& e) {
    err << "error (" << errc_name(e.code()) << "): " << e.what() << "\n";
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kInternal;
  }
}

}  // namespace selfsim::cli
