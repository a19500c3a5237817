#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <sys/wait.h>
#include <unistd.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "lgl/game_io.h"
#include "support/generators.h"

using namespace lgl;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

fs::path scratch() {
  static const fs::path dir = [] {
    auto d = fs::temp_directory_path() / ("lgl_cli_" + std::to_string(::getpid()));
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

int run(const std::string& args) {
  const std::string cmd = std::string(LGL_BINARY) + " " + args + " >>" + (scratch() / "log.txt").string() + " 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json read_json(const fs::path& p) { return json::parse(slurp(p)); }

std::string at(const std::string& name) { return (scratch() / name).string(); }

// Diamond action lattice where v(x) + v(y) > v(top) + v(bot).
GameInstance non_supermodular() {
  GameInstance g;
  g.name = "diamond";
  g.characteristics = {{"c"}, {1.0}};
  g.actions = ActionLattice::from_poset(
      order::FinitePoset::from_pairs({"bot", "x", "y", "top"}, {{0, 1}, {0, 2}, {1, 3}, {2, 3}}));
  g.availability = {{0, 1, 2, 3}};
  g.states = {{"s"}, std::nullopt};
  g.type_space.worlds = {"t"};
  g.type_space.sigma = {0};
  g.type_space.tau = {{{0, 0, 1.0}}};
  g.beliefs = {{"b", {1.0}}};
  g.payoff = PayoffOracle::linear(1, 4, 1);
  g.payoff.base(0, 1, 0) = 1.0;
  g.payoff.base(0, 2, 0) = 1.0;
  return g;
}

}  // namespace

TEST_CASE("usage and parse errors exit 2") {
  CHECK(run("") == 2);
  CHECK(run("nonsense") == 2);
  CHECK(run("validate " + at("missing.json")) == 2);
  std::ofstream(at("broken.json")) << "{";
  CHECK(run("validate " + at("broken.json")) == 2);
  CHECK(run("email-game --L 0.5 --out " + at("bad_email")) == 2);
  CHECK(run("solve " + at("broken.json")) == 2);
}

TEST_CASE("validate") {
  save_game(testing::random_game(4), at("ok.json"));
  CHECK(run("validate " + at("ok.json")) == 0);
  CHECK(run("validate --supermodular " + at("ok.json")) == 0);
  auto j = read_json(at("ok.json"));
  j["characteristics"]["nu"][0] = 0.9;
  std::ofstream(at("mismatch.json")) << j.dump();
  CHECK(run("validate " + at("mismatch.json") + " --out " + at("findings.json")) == 1);
  const auto report = read_json(at("findings.json"));
  CHECK_FALSE(report["violations"].empty());
}

TEST_CASE("solve writes reports") {
  REQUIRE(run("global-game --fixture ladder --size 10 --eps 0.3 --out " + at("ladder")) == 0);
  REQUIRE(run("solve " + at("ladder/game.json") + " --out " + at("solved")) == 0);
  for (auto name : {"icr_trace.json", "icr_summary.csv", "supermodularity.json", "equilibrium.json", "sandwich.json"})
    CHECK(fs::exists(scratch() / "solved" / name));
  CHECK(read_json(scratch() / "solved/sandwich.json")["ok"] == true);
  const auto eq = read_json(scratch() / "solved/equilibrium.json");
  CHECK(eq["top"]["verification"]["is_bne"] == true);
  CHECK(eq["bottom"]["verification"]["is_bne"] == true);
  CHECK(eq["pairs"].size() == 10);
  const auto csv = slurp(scratch() / "solved/icr_summary.csv");
  CHECK(csv.rfind("characteristic,belief,surviving,eliminated\n", 0) == 0);

  // Same input, same bytes.
  REQUIRE(run("solve " + at("ladder/game.json") + " --out " + at("solved_again")) == 0);
  for (auto name : {"icr_trace.json", "icr_summary.csv", "equilibrium.json", "sandwich.json"})
    CHECK(slurp(scratch() / "solved" / name) == slurp(scratch() / "solved_again" / name));
}

TEST_CASE("solve refuses a non-supermodular game unless forced") {
  save_game(non_supermodular(), at("diamond.json"));
  CHECK(run("solve " + at("diamond.json") + " --out " + at("refused")) == 3);
  CHECK(fs::exists(scratch() / "refused/supermodularity.json"));
  CHECK_FALSE(fs::exists(scratch() / "refused/equilibrium.json"));
  CHECK(run("solve --force " + at("diamond.json") + " --out " + at("forced")) == 0);
  CHECK(fs::exists(scratch() / "forced/icr_trace.json"));
  CHECK(read_json(scratch() / "forced/equilibrium.json").contains("skipped"));
}

TEST_CASE("email game sweep") {
  REQUIRE(run("email-game --positions 5 --max-signals 3 --buckets 2 --grid 0.25,0.5,1,2 --out " + at("email")) == 0);
  CHECK(run("validate " + at("email/game.json")) == 0);
  const auto summary = read_json(scratch() / "email/contagion.json");
  CHECK(summary["all_zero_unique"] == true);
  std::istringstream sweep(slurp(scratch() / "email/alpha_sweep.csv"));
  std::string line;
  std::getline(sweep, line);
  CHECK(line == "alpha,contagion_function,risk_dominance_threshold,analytic_unique,all_zero_unique");
  double previous = 1.0;
  int rows = 0;
  while (std::getline(sweep, line)) {
    const double f = std::stod(line.substr(line.find(',') + 1));
    CHECK(f < previous);
    previous = f;
    CHECK(line.substr(line.size() - 4) == ",1,1");
    ++rows;
  }
  CHECK(rows == 4);
}

TEST_CASE("global game regions and hierarchy dump") {
  REQUIRE(run("global-game --fixture random --size 20 --seed 3 --eps 0.3 --out " + at("random")) == 0);
  CHECK(fs::exists(scratch() / "random/regions.csv"));
  const auto regions = read_json(scratch() / "random/regions.json");
  CHECK(regions.is_object());
  CHECK(run("global-game --game " + at("random/game.json") + " --eps 0.3 --out " + at("random_again")) == 0);
  CHECK(slurp(scratch() / "random/regions.json") == slurp(scratch() / "random_again/regions.json"));

  const auto game = read_json(at("ladder/game.json"));
  const std::string belief = game["beliefs"][0]["label"];
  REQUIRE(run("hierarchy " + at("ladder/game.json") + " --belief " + belief + " --depth 2 --out " + at("h.json")) == 0);
  const auto h = read_json(at("h.json"));
  CHECK(h["depth"] == 2);
  CHECK(h["coherent"] == true);
  CHECK(h["levels"].size() == 2);
  CHECK(run("hierarchy " + at("ladder/game.json") + " --belief nobody") == 2);
  CHECK(run("hierarchy " + at("ladder/game.json") + " --belief " + belief + " --depth 9 --max-depth 3") == 2);
}

TEST_CASE("round trip through the CLI") {
  const auto g = testing::random_game(11);
  save_game(g, at("trip.json"));
  const auto back = load_game(at("trip.json"));
  save_game(back, at("trip2.json"));
  CHECK(slurp(at("trip.json")) == slurp(at("trip2.json")));
}
