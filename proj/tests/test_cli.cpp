#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "json.hpp"
#include "../tools/cli.hpp"
#include "tbv/serialize.hpp"

using namespace tbv;
using nlohmann::json;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run_cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = tbv::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

/// Scratch directory with a period-doubling substitution file.
struct Scratch {
  std::filesystem::path dir;

  Scratch() {
    dir = std::filesystem::temp_directory_path() / "tbv-cli-test";
    std::filesystem::create_directories(dir);
    write("pd.json", substitution_to_json(Substitution::from_map(
                         Alphabet("ab"), {{'a', "ab"}, {'b', "aa"}})));
    write("tm.json", substitution_to_json(Substitution::from_map(
                         Alphabet("ab"), {{'a', "ab"}, {'b', "ba"}})));
    write("three.json", substitution_to_json(Substitution::from_map(
                            Alphabet("ab"), {{'a', "aab"}, {'b', "aba"}})));
  }

  std::string path(const std::string& name) const { return (dir / name).string(); }

  void write(const std::string& name, const std::string& content) const {
    std::ofstream f(dir / name, std::ios::binary);
    f << content;
  }

  std::string read(const std::string& name) const {
    std::ifstream f(dir / name, std::ios::binary);
    std::ostringstream buffer;
    buffer << f.rdbuf();
    return buffer.str();
  }
};

MorphismSequence pushup_fixture() {
  OrderedBratteliDiagram source(
      {{"root"}, {"wa", "wb"}, {"wp", "wt"}, {"ws", "wf"}},
      {{{0, 0, 0}, {0, 0, 0}}, {{0, 0, 1}, {0, 1, 1}}, {{0, 0, 1}, {0, 1, 1}}});
  OrderedBratteliDiagram target(
      {{"root"}, {"v1", "v2", "v3"}, {"u1", "u2"}},
      {{{0}, {0}, {0}}, {{0, 0, 1}, {0, 1, 2}}});
  MorphismSequence ms{std::move(source), std::move(target), {1, 3}, {}};
  ms.maps.push_back({{0, 1, 2}, {0, 0, 1}});
  ms.maps.push_back(
      {{1, 1, 0, 1, 1, 0, 1, 0, 0}, {1, 1, 0, 1, 0, 0, 1, 0, 0}});
  return ms;
}

}  // namespace

TEST_CASE("analyze reports the constructive structure") {
  Scratch fs;
  const auto text = run_cli({"analyze", "--subst", fs.path("pd.json"), "--depth", "5"});
  CHECK(text.code == 0);
  CHECK(text.out.find("2 4 8 16 32") != std::string::npos);

  const auto machine = run_cli({"--json", "analyze", "--subst", fs.path("pd.json"),
                            "--depth", "5"});
  CHECK(machine.code == 0);
  const json payload = json::parse(machine.out);
  CHECK(payload["command"] == "analyze");
  CHECK(payload["tool"] == "tbv");
  CHECK(payload["result"]["structure"]["periods"] ==
        json::array({"2", "4", "8", "16", "32"}));
  CHECK(payload["result"]["substitution"]["primitive"] == true);
  CHECK(payload["result"]["substitution"]["coincidence"]["power"] == 1);

  // stable across re-runs
  const auto again = run_cli({"--json", "analyze", "--subst", fs.path("pd.json"),
                          "--depth", "5"});
  CHECK(again.out == machine.out);

  // inline grammar and tower-file input agree with the substitution path
  const auto inline_run =
      run_cli({"--json", "analyze", "--subst-inline", "a=ab,b=aa", "--depth", "5"});
  CHECK(json::parse(inline_run.out)["result"]["structure"] ==
        payload["result"]["structure"]);
  fs.write("tower.json", tower_to_json(tower_from_substitution(
                             substitution_from_json(fs.read("pd.json")), 5)));
  const auto via_tower =
      run_cli({"--json", "analyze", "--tower", fs.path("tower.json"), "--depth", "5"});
  CHECK(via_tower.code == 0);
  CHECK(json::parse(via_tower.out)["result"]["structure"] ==
        payload["result"]["structure"]);
}

TEST_CASE("build-bv emits the library diagram and valid DOT") {
  Scratch fs;
  const auto run = run_cli({"--json", "build-bv", "--subst", fs.path("pd.json"),
                        "--depth", "3", "--dot", fs.path("pd.dot")});
  REQUIRE(run.code == 0);
  const json payload = json::parse(run.out);
  CHECK(payload["result"]["report"]["row_sums"] == json::array({2, 2, 2}));
  CHECK(payload["result"]["report"]["ers"] == true);

  // thin adapter: identical to the library construction at the same window
  const auto window = payload["result"]["window"].get<std::size_t>();
  const auto pd = substitution_from_json(fs.read("pd.json"));
  std::size_t depth = 3;
  for (;; ++depth) {
    try {
      const auto tower = tower_from_substitution(pd, depth);
      constructive_structure(tower, 3);
      fill_prefix(tower, window);
      break;
    } catch (const IncompleteTower&) {
    }
  }
  const auto expected =
      bv_from_tower(tower_from_substitution(pd, depth), 3, window);
  CHECK(payload["result"]["diagram"] ==
        json::parse(diagram_to_json(expected.diagram)));

  const std::string dot = fs.read("pd.dot");
  CHECK_NOTHROW(check_dot(dot));
  CHECK(dot.find("abaaabab") != std::string::npos);

  // text mode summary
  const auto text = run_cli({"build-bv", "--subst", fs.path("pd.json"), "--depth",
                         "3"});
  CHECK(text.code == 0);
  CHECK(text.out.find("row sums: 2 2 2") != std::string::npos);
}

TEST_CASE("orbit writes a deterministic trace") {
  Scratch fs;
  const auto run = run_cli({"orbit", "--subst", fs.path("pd.json"), "--depth", "6",
                        "--steps", "8", "--level", "1"});
  REQUIRE(run.code == 0);
  std::istringstream in(run.out);
  std::string line;
  std::getline(in, line);
  CHECK(line == "step,vertex,height,letter");
  std::string letters;
  while (std::getline(in, line)) letters += line.back();
  CHECK(letters == "abaaabab");
}

TEST_CASE("verify-factor distinguishes clean and broken realizations") {
  Scratch fs;
  fs.write("good.json", morphism_sequence_to_json(pushup_fixture()));
  const auto good = run_cli({"verify-factor", "--factor", fs.path("good.json")});
  CHECK(good.code == 0);
  CHECK(good.out.find("verified") != std::string::npos);

  auto broken = pushup_fixture();
  broken.maps[1][0][4] = 0;  // single-letter perturbation
  fs.write("broken.json", morphism_sequence_to_json(broken));
  const auto bad = run_cli({"--json", "verify-factor", "--factor",
                        fs.path("broken.json")});
  CHECK(bad.code == 1);
  const json payload = json::parse(bad.out);
  CHECK(payload["result"]["verified"] == false);
  CHECK(payload["result"]["diagnostics"].size() > 0);
}

TEST_CASE("split rebuilds the sequence at level one") {
  // morphism defined three levels up, one root edge per side
  OrderedBratteliDiagram source(
      {{"root"}, {"w1", "w2"}, {"x1", "x2"}, {"y1", "y2"}},
      {{{0}, {0}}, {{0, 1}, {0, 1}}, {{0, 1}, {0, 1}}});
  OrderedBratteliDiagram target({{"root"}, {"v", "vp", "vq"}},
                                {{{0}, {0}, {0}}});
  MorphismSequence ms{std::move(source), std::move(target), {3}, {}};
  ms.maps.push_back({{0, 1, 0, 2}, {1, 0, 2, 1}});
  REQUIRE(verify_squares(ms).empty());

  Scratch fs;
  fs.write("ms.json", morphism_sequence_to_json(ms));
  const auto run = run_cli({"split", "--factor", fs.path("ms.json"), "--ell",
                            "1", "--out", fs.path("split.json")});
  REQUIRE(run.code == 0);
  const auto rebuilt = morphism_sequence_from_json(fs.read("split.json"));
  CHECK(rebuilt.levels == std::vector<std::size_t>{1});
  CHECK(rebuilt.source.level_size(1) == 6);
  CHECK(rebuilt.source.level_size(2) == 4);
  CHECK(verify_squares(rebuilt).empty());
  // stdout carries the same payload
  CHECK(run.out == fs.read("split.json"));
}

TEST_CASE("telescope composes out levels") {
  Scratch fs;
  const auto built = run_cli({"--json", "build-bv", "--subst", fs.path("pd.json"),
                          "--depth", "4"});
  REQUIRE(built.code == 0);
  fs.write("d.json",
           json::parse(built.out)["result"]["diagram"].dump(2) + "\n");
  const auto run =
      run_cli({"telescope", "--diagram", fs.path("d.json"), "--levels", "2,4"});
  REQUIRE(run.code == 0);
  const auto scoped = diagram_from_json(run.out);
  CHECK(scoped.depth() == 2);
  CHECK(is_ers(scoped).row_sums == std::vector<std::uint64_t>{4, 4});
}

TEST_CASE("obstruct maps verdicts to exit codes") {
  const auto blocked = run_cli({"obstruct", "--p", "6", "--q", "12"});
  CHECK(blocked.code == 1);
  CHECK(blocked.out.find("Obstructed") != std::string::npos);

  const auto fine = run_cli({"--json", "obstruct", "--p", "12", "--q", "6"});
  CHECK(fine.code == 0);
  const json payload = json::parse(fine.out);
  CHECK(payload["result"]["exact_base"]["verdict"] == "NotObstructed");
  CHECK(payload["result"]["exact_base"]["conjugacy_compatible"] == false);
  CHECK(payload["result"]["multiplicatively_independent"] == true);
  CHECK(payload["result"]["scan"]["verdict"] == "NotObstructed");

  const auto conjugate = run_cli({"--json", "obstruct", "--p", "8", "--q", "8"});
  CHECK(conjugate.code == 0);
  CHECK(json::parse(conjugate.out)["result"]["exact_base"]
            ["conjugacy_compatible"] == true);

  const auto lists = run_cli({"obstruct", "--p-list", "6,36,216", "--q-list",
                          "12,144,1728", "--horizon", "3"});
  CHECK(lists.code == 1);
  CHECK(lists.out.find("ObstructedAtHorizon") != std::string::npos);
}

TEST_CASE("cobham gate exit codes") {
  Scratch fs;
  const auto pass =
      run_cli({"cobham", fs.path("pd.json"), fs.path("three.json")});
  CHECK(pass.code == 0);
  CHECK(pass.out.find("finite shift") != std::string::npos);

  const auto withheld = run_cli({"--json", "cobham", fs.path("tm.json"),
                             fs.path("three.json")});
  CHECK(withheld.code == 1);
  const json payload = json::parse(withheld.out);
  CHECK(payload["result"]["applies"] == false);
  CHECK(payload["result"]["first"]["coincidence"].is_null());
}

TEST_CASE("export-dot validates its own output") {
  Scratch fs;
  const auto built = run_cli({"--json", "build-bv", "--subst", fs.path("pd.json"),
                          "--depth", "2"});
  REQUIRE(built.code == 0);
  fs.write("d.json",
           json::parse(built.out)["result"]["diagram"].dump(2) + "\n");
  const auto run = run_cli({"export-dot", "--diagram", fs.path("d.json")});
  CHECK(run.code == 0);
  CHECK_NOTHROW(check_dot(run.out));
}

TEST_CASE("input errors exit with code 2") {
  CHECK(run_cli({"analyze", "--subst", "/nonexistent.json"}).code == 2);
  CHECK(run_cli({"analyze"}).code == 2);           // no input at all
  CHECK(run_cli({"frobnicate"}).code == 2);        // unknown verb
  CHECK(run_cli({"obstruct", "--p", "1", "--q", "3"}).code == 2);
  Scratch fs;
  fs.write("garbage.json", "{not json");
  CHECK(run_cli({"analyze", "--subst", fs.path("garbage.json")}).code == 2);
}

TEST_CASE("TBV_MAX_DEPTH caps requested work") {
  Scratch fs;
  setenv("TBV_MAX_DEPTH", "4", 1);
  const auto run = run_cli({"analyze", "--subst", fs.path("pd.json"), "--depth",
                        "9"});
  unsetenv("TBV_MAX_DEPTH");
  CHECK(run.code == 0);
  CHECK(run.err.find("capped") != std::string::npos);
  CHECK(run.out.find("2 4 8 16") != std::string::npos);
  CHECK(run.out.find("32") == std::string::npos);
}
