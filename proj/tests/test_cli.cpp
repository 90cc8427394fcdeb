#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "cli.hpp"

using selfsim::cli::run_command;

namespace {

struct Run {
  int code = 0;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run_command(args, out, err);
  return {code, out.str(), err.str()};
}

std::filesystem::path scratch(const std::string& name) {
  const char* dir = std::getenv("SELFSIM_TEST_TMP");
  return std::filesystem::path(dir ? dir : std::filesystem::temp_directory_path().string()) / name;
}

}  // namespace

TEST_CASE("element commands") {
  auto r = run({"elem", "order", "--preset", "grigorchuk", "a b"});
  CHECK(r.code == 0);
  CHECK(r.out == "16\n");
  r = run({"elem", "apply", "a", "0"});
  CHECK(r.out == "1\n");
  r = run({"elem", "section", "(a b)^2", "0"});
  CHECK(r.out == "c a\n");
  r = run({"elem", "identity", "b c d"});
  CHECK(r.code == 0);
  CHECK(r.out == "yes\n");
  r = run({"elem", "identity", "(a b)^8"});
  CHECK(r.code == 1);
  CHECK(r.out == "no\n");
  r = run({"--preset", "gupta-sidki", "elem", "order", "b"});
  CHECK(r.out == "3\n");
  r = run({"elem", "portrait", "a", "--depth", "1"});
  CHECK(r.out == "(root): 1 0\n");
}

TEST_CASE("budget exhaustion is undecided") {
  auto r = run({"--budget", "1", "elem", "order", "a b"});
  CHECK(r.code == 3);
  CHECK(r.out == "undecided\n");
}

TEST_CASE("quotient commands") {
  CHECK(run({"--level", "3", "quotient", "order"}).out == "128\n");
  CHECK(run({"--level", "2", "quotient", "index", "--gens", "a"}).out == "4\n");
  auto r = run({"--level", "5", "quotient", "transitive"});
  CHECK(r.code == 0);
  CHECK(r.out == "yes\n");
  r = run({"quotient", "stab", "0"});
  CHECK(r.code == 0);
  CHECK(r.out.find("b\n") != std::string::npos);
}

TEST_CASE("subgroup commands") {
  auto r = run({"sub", "fixlevel", "--preset", "grigorchuk", "--gens", "a"});
  CHECK(r.code == 0);
  CHECK(r.out == "1\n");
  r = run({"sub", "fixlevel", "--gens", "d", "--max-level", "5"});
  CHECK(r.code == 1);
  CHECK(r.out == "none\n");
  CHECK(run({"--level", "1", "sub", "fix", "--gens", "b"}).out == "0\n1\n");
  CHECK(run({"--level", "1", "sub", "psi", "b"}).out == "a\nc\n");
  r = run({"--level", "1", "sub", "psi", "a"});
  CHECK(r.code == 1);
  CHECK(run({"sub", "rist", "b", "0"}).code == 1);
  CHECK(run({"--level", "3", "sub", "profile", "--gens", "a"}).out ==
        "1 4 64 (infinite-index-evidence)\n");
  r = run({"--level", "1", "sub", "escape", "--gens", "b,c,d", "--gamma", "a"});
  CHECK(r.code == 0);
  CHECK(r.out == "1\n");
  CHECK(run({"sub", "escape", "--gens", "b", "--gamma", "1"}).code == 2);
}

TEST_CASE("usage errors") {
  CHECK(run({}).code == 2);
  CHECK(run({"elem"}).code == 2);
  CHECK(run({"elem", "order"}).code == 2);
  CHECK(run({"elem", "order", "a z"}).code == 2);
  CHECK(run({"--preset", "nonexistent.json", "elem", "order", "a"}).code == 2);
  CHECK(run({"--budget", "0", "elem", "order", "a"}).code == 2);
  CHECK(run({"--format", "xml", "elem", "order", "a"}).code == 2);
  CHECK(run({"--help"}).code == 0);
}

TEST_CASE("json reports embed provenance") {
  auto r = run({"--format", "json", "--seed", "7", "elem", "order", "a c"});
  REQUIRE(r.code == 0);
  const auto doc = nlohmann::json::parse(r.out);
  CHECK(doc["command"] == "elem order");
  CHECK(doc["seed"] == 7);
  CHECK(doc["result"]["order"] == "8");
  CHECK(doc["preset"]["name"] == "grigorchuk");
  CHECK(doc["preset"]["fingerprint"].get<std::string>().size() == 16);
  CHECK(doc["budget"] == 200000);
  CHECK(run({"--format", "json", "--seed", "7", "elem", "order", "a c"}).out == r.out);
}

TEST_CASE("group commands and definition files") {
  auto r = run({"group", "show"});
  CHECK(r.code == 0);
  CHECK(r.out.find("fingerprint: ") != std::string::npos);
  CHECK(run({"group", "validate"}).out == "valid\n");

  const auto path = scratch("cli_bad_preset.json");
  auto doc = nlohmann::json::parse(run({"--format", "json", "group", "show"}).out)["result"]["definition"];
  doc["generators"][1]["sections"][0] = "q";
  std::ofstream(path) << doc.dump();
  r = run({"--preset", path.string(), "group", "validate"});
  CHECK(r.code == 1);
  CHECK(r.out.find("unknown-symbol") != std::string::npos);
  CHECK(run({"--preset", path.string(), "elem", "order", "a"}).code == 2);
}

TEST_CASE("config file from the environment") {
  const auto path = scratch("cli_config.json");
  std::ofstream(path) << R"({"preset": "gupta-sidki", "level": 2})";
  setenv(selfsim::cli::kConfigEnv, path.string().c_str(), 1);
  const auto r = run({"quotient", "order"});
  unsetenv(selfsim::cli::kConfigEnv);
  CHECK(r.out == "27\n");
}

TEST_CASE("construction commands") {
  CHECK(run({"wm", "rist-search", "0"}).code == 0);
  CHECK(run({"--budget", "1", "wm", "rist-search", "0"}).code == 3);
  auto r = run({"wm", "trap", "--q", "a", "-k", "1", "-l", "1"});
  CHECK(r.code == 0);
  CHECK(r.out.rfind("pass\n", 0) == 0);
  CHECK(run({"wm", "trap", "--gens", "a", "-k", "1"}).code == 1);
  r = run({"wm", "separate", "--gens", "a", "--second", "d"});
  CHECK(r.code == 0);
  CHECK(run({"wm", "separate", "--gens", "a", "--second", "a"}).code == 1);
  r = run({"--level", "3", "wm", "conjbound", "--vertex", "0"});
  CHECK(r.code == 0);
  CHECK(r.out == "2\n");
  CHECK(run({"--level", "3", "wm", "pullback", "--delta", "b,c,d", "-k", "1"}).code == 0);
}

TEST_CASE("certificate build and validate") {
  const auto cert = scratch("cli_cert.json");
  auto r = run({"--level", "6", "--seed", "5", "wm", "build", "--q", "a", "--avoid", "00,01,10",
                "--avoid-level", "6", "-o", cert.string()});
  REQUIRE(r.code == 0);
  CHECK(r.out.rfind("3 stages", 0) == 0);
  r = run({"wm", "validate", cert.string()});
  CHECK(r.code == 0);
  CHECK(r.out.rfind("valid\n", 0) == 0);

  std::ifstream in(cert);
  auto doc = nlohmann::json::parse(in);
  CHECK(doc["seed"] == 5);
  doc["stages"][0]["w"] = "1";
  const auto bad = scratch("cli_cert_bad.json");
  std::ofstream(bad) << doc.dump(2);
  r = run({"wm", "validate", bad.string()});
  CHECK(r.code == 1);
  CHECK(r.out.rfind("invalid", 0) == 0);

  std::ofstream(bad) << "{ not json";
  CHECK(run({"wm", "validate", bad.string()}).code == 1);
  CHECK(run({"wm", "validate", scratch("missing.json").string()}).code == 2);
}
