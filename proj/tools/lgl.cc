// Command-line front end: validate, solve, email-game, global-game, hierarchy.
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"

#include "lgl/email_game.h"
#include "lgl/equilibrium.h"
#include "lgl/game_io.h"
#include "lgl/global_game.h"
#include "lgl/hierarchy.h"
#include "lgl/icr.h"
#include "lgl/numerics.h"
#include "lgl/reports.h"

namespace fs = std::filesystem;
using namespace lgl;

namespace {

enum ExitCode { kOk = 0, kFindings = 1, kUsage = 2, kAssumption = 3, kInternal = 4 };

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void write_file(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

int find_belief(const GameInstance& game, const std::string& label) {
  for (int b = 0; b < game.num_beliefs(); ++b)
    if (game.beliefs[b].label == label) return b;
  throw UsageError("unknown belief '" + label + "'");
}

struct ValidateArgs {
  std::string game;
  std::string out;
  bool supermodular = false;
};

int cmd_validate(const ValidateArgs& a) {
  const auto game = load_game(a.game);
  const auto report = validate_game(game, {a.supermodular});
  const auto text = dump_json(reports::validation_json(report));
  if (a.out.empty()) {
    std::cout << text;
  } else {
    write_file(a.out, text);
  }
  for (const auto& v : report.violations) {
    std::cerr << v.code << " at " << v.location << ": " << v.message << "\n";
  }
  return report.usable() ? kOk : kFindings;
}

struct SolveArgs {
  std::string game;
  std::string out;
  double tol = kDecisionTol;
  bool force = false;
};

int cmd_solve(const SolveArgs& a) {
  const auto game = load_game(a.game);
  const auto validation = validate_game(game);
  if (!validation.usable()) {
    for (const auto& v : validation.violations) {
      std::cerr << v.code << " at " << v.location << ": " << v.message << "\n";
    }
    return kFindings;
  }
  icr::SolverOptions options;
  options.tol = a.tol;
  icr::IcrResult icr_result;
  try {
    icr_result = icr::icr_solve(game, options);
  } catch (const InternalError& e) {
    std::cerr << "icr: " << e.what() << "\n";
    return kInternal;
  }
  fs::create_directories(a.out);
  write_file(fs::path(a.out) / "icr_trace.json", dump_json(reports::icr_trace_json(game, icr_result)));
  write_file(fs::path(a.out) / "icr_summary.csv", reports::icr_summary_csv(game, icr_result));

  auto sm = equilibrium::check_supermodular(game);
  const auto id = equilibrium::check_increasing_differences(game);
  sm.increasing_differences_ok = id.increasing_differences_ok;
  sm.violations.insert(sm.violations.end(), id.violations.begin(), id.violations.end());
  write_file(fs::path(a.out) / "supermodularity.json",
             dump_json(reports::supermodularity_json(game, sm)));

  if (!sm.ok()) {
    if (!a.force) {
      std::cerr << "equilibrium: supermodularity or increasing differences fails; rerun with "
                   "--force to skip equilibrium computation\n";
      return kAssumption;
    }
    write_file(fs::path(a.out) / "equilibrium.json",
               dump_json({{"skipped", "assumption validators failed"}}));
    std::cout << "icr rounds: " << icr_result.rounds << "; equilibrium skipped\n";
    return kOk;
  }

  equilibrium::ExtremalOptions eq_options;
  eq_options.tol = a.tol;
  try {
    const auto top = equilibrium::extremal_equilibrium(game, equilibrium::Direction::kTop, eq_options);
    const auto bottom =
        equilibrium::extremal_equilibrium(game, equilibrium::Direction::kBottom, eq_options);
    const auto sandwich =
        equilibrium::sandwich_check(game, icr_result.rationalizable, top.zeta, bottom.zeta);
    write_file(fs::path(a.out) / "equilibrium.json",
               dump_json(reports::equilibrium_json(game, top, bottom)));
    write_file(fs::path(a.out) / "sandwich.json", dump_json(reports::sandwich_json(game, sandwich)));
    std::cout << "icr rounds: " << icr_result.rounds << "; top rounds: " << top.rounds
              << "; bottom rounds: " << bottom.rounds << "; sandwich " << (sandwich.ok ? "ok" : "FAILED")
              << "\n";
    return sandwich.ok ? kOk : kInternal;
  } catch (const equilibrium::BrokenLatticeArgmax& e) {
    std::cerr << "equilibrium: " << e.what() << "\n";
    return kAssumption;
  } catch (const equilibrium::AssumptionFailure& e) {
    std::cerr << "equilibrium: " << e.what() << "\n";
    return kAssumption;
  } catch (const InternalError& e) {
    std::cerr << "equilibrium: " << e.what() << "\n";
    return kInternal;
  }
}

struct EmailArgs {
  email_game::EmailGameParams params;
  bool literal = false;
  bool any_order = false;
  std::vector<double> grid;
  std::string out;
  double tol = kDecisionTol;
};

int cmd_email_game(EmailArgs a) {
  auto& p = a.params;
  if (a.literal) p.reading = email_game::IntervalReading::kLiteral;
  p.enforce_payoff_order = !a.any_order;
  try {
    email_game::check_params(p);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  icr::SolverOptions options;
  options.tol = a.tol;
  const auto model = email_game::generate_email_game(p);
  const auto result = email_game::contagion_check(model, p, options);
  fs::create_directories(a.out);
  save_game(model.game, (fs::path(a.out) / "game.json").string());
  write_file(fs::path(a.out) / "contagion.csv", reports::contagion_csv(result));
  write_file(fs::path(a.out) / "contagion.json",
             dump_json(reports::contagion_json(model.game, p, result)));
  if (!a.grid.empty()) {
    std::ostringstream os;
    os << "alpha,contagion_function,risk_dominance_threshold,analytic_unique,all_zero_unique\n";
    for (double alpha : a.grid) {
      auto q = p;
      q.alpha = alpha;
      const auto r = email_game::contagion_check(q, options);
      os << reports::csv_number(alpha) << "," << reports::csv_number(r.contagion_value) << ","
         << reports::csv_number(r.threshold) << "," << (r.threshold > r.contagion_value) << ","
         << r.all_zero_unique << "\n";
    }
    write_file(fs::path(a.out) / "alpha_sweep.csv", os.str());
  }
  std::cout << "all_zero_unique: " << (result.all_zero_unique ? "true" : "false")
            << "; rounds: " << result.rounds << "; threshold " << reports::csv_number(result.threshold)
            << " vs contagion " << reports::csv_number(result.contagion_value) << "\n";
  return kOk;
}

struct GlobalArgs {
  std::string game;
  std::string fixture = "ladder";
  int size = 10;
  int window = 3;
  std::uint64_t seed = 1;
  double eps = 0.3;
  std::string out;
};

GameInstance global_fixture(const GlobalArgs& a) {
  namespace gg = global_game;
  if (a.size < 1) throw UsageError("--size must be positive");
  std::vector<double> states;
  for (int k = 0; k < a.size; ++k) states.push_back(a.size == 1 ? 0.5 : -1.0 + 3.0 * k / (a.size - 1));
  if (a.fixture == "ladder") return gg::build_game(gg::rank_ladder_spec(states));
  if (a.fixture == "certainty") return gg::build_game(gg::common_certainty_spec(states));
  if (a.fixture == "window") {
    if (a.window < 1 || a.window > a.size) throw UsageError("--window must lie in [1, size]");
    return gg::build_game(gg::window_spec(a.size, a.window, -1.0, 2.0));
  }
  if (a.fixture == "random") return gg::build_game(gg::random_spec(a.seed, a.size, a.size));
  throw UsageError("unknown fixture '" + a.fixture + "'");
}

int cmd_global_game(const GlobalArgs& a) {
  if (!(a.eps >= 0.0)) throw UsageError("--eps must be nonnegative");
  const auto game = a.game.empty() ? global_fixture(a) : load_game(a.game);
  const auto validation = validate_game(game);
  if (!validation.usable()) {
    for (const auto& v : validation.violations) {
      std::cerr << v.code << " at " << v.location << ": " << v.message << "\n";
    }
    return kFindings;
  }
  global_game::UniquenessCertificate cert;
  try {
    cert = global_game::uniqueness_certificate(game, a.eps);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  fs::create_directories(a.out);
  if (a.game.empty()) save_game(game, (fs::path(a.out) / "game.json").string());
  write_file(fs::path(a.out) / "regions.json", dump_json(reports::region_json(game, cert)));
  write_file(fs::path(a.out) / "regions.csv", reports::region_csv(game, cert));
  std::cout << "certified invest: " << cert.invest_region.size()
            << "; certified noninvest: " << cert.noninvest_region.size() << "\n";
  return kOk;
}

struct HierarchyArgs {
  std::string game;
  std::string belief;
  int depth = 2;
  int max_depth = hierarchy::kDefaultMaxDepth;
  std::string out;
};

int cmd_hierarchy(const HierarchyArgs& a) {
  const auto game = load_game(a.game);
  const int b = find_belief(game, a.belief);
  hierarchy::TruncatedHierarchy h;
  try {
    h = hierarchy::extract_hierarchy(game, b, a.depth, a.max_depth);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  const auto coherence = hierarchy::check_coherence(h);
  auto doc = hierarchy::to_json(h, game);
  doc["belief"] = a.belief;
  doc["coherent"] = coherence.coherent;
  if (!coherence.coherent) doc["first_violation_level"] = coherence.first_violation_level;
  if (a.out.empty()) {
    std::cout << dump_json(doc);
  } else {
    write_file(a.out, dump_json(doc));
  }
  return coherence.coherent ? kOk : kInternal;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Solvers for finite distributional Bayesian games"};
  app.require_subcommand(1);

  double tol = kDecisionTol;
  bool force = false;
  int depth = 2;
  std::vector<double> grid;
  std::string out;

  ValidateArgs va;
  auto* validate = app.add_subcommand("validate", "Check a game file against the model invariants");
  validate->add_option("game", va.game, "Game JSON file")->required();
  validate->add_flag("--supermodular", va.supermodular, "Also require sublattice availability sets");
  validate->add_option("--out", out, "Write the report here instead of stdout");

  SolveArgs sa;
  auto* solve = app.add_subcommand("solve", "ICR, extremal equilibria and the sandwich check");
  solve->add_option("game", sa.game, "Game JSON file")->required();
  solve->add_option("--out", out, "Output directory")->required();
  solve->add_option("--tol", tol, "Decision tolerance")->check(CLI::PositiveNumber);
  solve->add_flag("--force", force, "Skip equilibria instead of failing when assumptions fail");

  EmailArgs ea;
  auto* email = app.add_subcommand("email-game", "Generate and analyze the coordinated attack game");
  email->add_option("--M", ea.params.M, "Payoff M");
  email->add_option("--L", ea.params.L, "Payoff L");
  email->add_option("--pi", ea.params.pi, "Prior probability of state 1");
  email->add_option("--alpha", ea.params.alpha, "Death intensity");
  email->add_option("--positions", ea.params.n_positions, "Positions on the circle");
  email->add_option("--max-signals", ea.params.max_signals, "Signal count truncation");
  email->add_option("--buckets", ea.params.buckets_per_unit, "Death-time buckets per unit");
  email->add_flag("--literal-interval", ea.literal, "Use the (n i, n i + 1) death interval");
  email->add_flag("--any-payoff-order", ea.any_order, "Accept L <= M");
  email->add_option("--grid", grid, "Alpha values for a sweep")->delimiter(',');
  email->add_option("--out", out, "Output directory")->required();
  email->add_option("--tol", tol, "Decision tolerance")->check(CLI::PositiveNumber);

  GlobalArgs ga;
  auto* global = app.add_subcommand("global-game", "Uniqueness regions of an investment game");
  global->add_option("--game", ga.game, "Game JSON file (instead of a fixture)");
  global->add_option("--fixture", ga.fixture, "ladder, certainty, window or random");
  global->add_option("--size", ga.size, "Worlds (signals for window)");
  global->add_option("--window", ga.window, "Window width for the window fixture");
  global->add_option("--seed", ga.seed, "Seed for the random fixture");
  global->add_option("--eps", ga.eps, "Epsilon");
  global->add_option("--out", out, "Output directory")->required();

  HierarchyArgs ha;
  auto* hier = app.add_subcommand("hierarchy", "Dump the belief hierarchy of one belief");
  hier->add_option("game", ha.game, "Game JSON file")->required();
  hier->add_option("--belief", ha.belief, "Belief label")->required();
  hier->add_option("--depth", depth, "Hierarchy depth");
  hier->add_option("--max-depth", ha.max_depth, "Depth guard");
  hier->add_option("--out", out, "Output file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*validate) {
      va.out = out;
      return cmd_validate(va);
    }
    if (*solve) {
      sa.out = out;
      sa.tol = tol;
      sa.force = force;
      return cmd_solve(sa);
    }
    if (*email) {
      ea.out = out;
      ea.grid = grid;
      ea.tol = tol;
      return cmd_email_game(ea);
    }
    if (*global) {
      ga.out = out;
      return cmd_global_game(ga);
    }
    if (*hier) {
      ha.depth = depth;
      ha.out = out;
      return cmd_hierarchy(ha);
    }
  } catch (const GameParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kUsage;
  } catch (const UsageError& e) {
    std::cerr << "usage: " << e.what() << "\n";
    return kUsage;
  } catch (const InternalError& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kInternal;
  } catch (const numerics::NumericalError& e) {
    std::cerr << "numerics: " << e.what() << "\n";
    return kInternal;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInternal;
  }
  return kUsage;
}
