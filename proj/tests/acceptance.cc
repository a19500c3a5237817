// One line per acceptance criterion; exit status 1 if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "lgl/email_game.h"
#include "lgl/equilibrium.h"
#include "lgl/global_game.h"
#include "lgl/hierarchy.h"
#include "lgl/icr.h"
#include "lgl/order.h"
#include "support/generators.h"
#include "support/reference.h"

using namespace lgl;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

struct Outcome {
  bool pass = true;
  std::string detail;
  std::string first_failure;

  void fail(const std::string& why) {
    if (pass) first_failure = why;
    pass = false;
  }
};

int failures = 0;

void report(int id, const std::string& title, const Outcome& o) {
  std::printf("%s %d %s: %s%s\n", o.pass ? "PASS" : "FAIL", id, title.c_str(), o.detail.c_str(),
              o.pass ? "" : (" [first failure: " + o.first_failure + "]").c_str());
  std::fflush(stdout);
  if (!o.pass) ++failures;
}

std::string fmt(const char* f, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, x);
  return buf;
}

// ---------------------------------------------------------------- 1 and 2

struct RandomSuite {
  std::vector<GameInstance> games;
  std::vector<icr::IcrResult> icr;
  double icr_seconds = 0.0;
};

RandomSuite& random_suite() {
  static RandomSuite suite = [] {
    RandomSuite s;
    for (std::uint64_t seed = 1; seed <= 200; ++seed) s.games.push_back(testing::random_game(1000 + seed));
    const auto start = Clock::now();
    for (const auto& g : s.games) s.icr.push_back(icr::icr_solve(g));
    s.icr_seconds = seconds_since(start);
    return s;
  }();
  return suite;
}

void criterion_1() {
  Outcome o;
  auto& suite = random_suite();
  const auto start = Clock::now();
  int contained = 0;
  for (size_t k = 0; k < suite.games.size(); ++k) {
    const auto& g = suite.games[k];
    const auto& r = suite.icr[k];
    const auto name = g.name;
    if (!(icr::eliminate_round(g, r.rationalizable) == r.rationalizable)) o.fail(name + ": not a fixed point");
    if (!(r.trace.front() == icr::full_availability(g))) o.fail(name + ": trace does not start at S_0");
    for (size_t m = 1; m < r.trace.size(); ++m)
      if (!icr::pointwise_subset(r.trace[m], r.trace[m - 1])) o.fail(name + ": trace not nested");
    for (auto dir : {equilibrium::Direction::kTop, equilibrium::Direction::kBottom}) {
      const auto singleton = equilibrium::extremal_equilibrium(g, dir).zeta.as_behavior();
      if (!icr::check_self_rationalizing(g, singleton).is_rationalized)
        o.fail(name + ": extremal equilibrium does not rationalize itself");
      if (!icr::pointwise_subset(singleton, r.rationalizable)) o.fail(name + ": equilibrium outside S");
      else ++contained;
    }
  }
  const double total = suite.icr_seconds + seconds_since(start);
  if (total >= 60.0) o.fail("runtime " + fmt("%.2f", total) + " s");
  o.detail = std::to_string(suite.games.size()) + " instances, " + std::to_string(contained) +
             " equilibrium maps contained in S, " + fmt("%.2f", total) + " s (limit 60 s)";
  report(1, "ICR fixed point and maximality", o);
}

void criterion_2() {
  Outcome o;
  auto& suite = random_suite();
  int unique = 0, max_rounds = 0;
  for (size_t k = 0; k < suite.games.size(); ++k) {
    const auto& g = suite.games[k];
    const auto& s = suite.icr[k].rationalizable;
    const auto name = g.name;
    int budget = 0;
    for (const auto& pair : registered_pairs(g))
      budget += static_cast<int>(g.availability[pair.characteristic].size()) - 1;
    const auto top = equilibrium::extremal_equilibrium(g, equilibrium::Direction::kTop);
    const auto bottom = equilibrium::extremal_equilibrium(g, equilibrium::Direction::kBottom);
    for (const auto* e : {&top, &bottom}) {
      if (e->rounds > budget) o.fail(name + ": too many rounds");
      max_rounds = std::max(max_rounds, e->rounds);
      const auto check = equilibrium::verify_equilibrium(g, e->zeta);
      if (!check.is_bne || check.max_regret > 1e-9) o.fail(name + ": extremal profile is not an equilibrium");
    }
    // Actions form a chain, so the lattice order is the index order.
    bool all_singleton = true;
    for (size_t i = 0; i < s.pairs.size(); ++i) {
      const auto& set = s.sets[i];
      const int hi = top.zeta.action_at(s.pairs[i]), lo = bottom.zeta.action_at(s.pairs[i]);
      if (set.front() != lo || set.back() != hi) o.fail(name + ": extremal equilibria are not the ends of S");
      for (int a : set)
        if (a < lo || a > hi) o.fail(name + ": sandwich violated");
      all_singleton &= set.size() == 1;
    }
    if (!equilibrium::sandwich_check(g, s, top.zeta, bottom.zeta).ok) o.fail(name + ": sandwich_check rejects");
    if ((top.zeta == bottom.zeta) != all_singleton) o.fail(name + ": uniqueness equivalence fails");
    unique += top.zeta == bottom.zeta;
  }
  o.detail = std::to_string(suite.games.size()) + " instances, " + std::to_string(unique) +
             " with a unique equilibrium, at most " + std::to_string(max_rounds) + " rounds";
  report(2, "Sandwich and extremal equilibria", o);
}

// ---------------------------------------------------------------- 3

void criterion_3() {
  Outcome o;
  testing::Rng rng(3);
  const auto start = Clock::now();
  int dominated = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const int n = rng.integer(1, 8);
    const auto poset = testing::random_poset(rng, n, rng.uniform(0.1, 0.7));
    const auto lower = rng.simplex(n, rng.integer(1, n));
    const auto upper = trial % 2 == 0 ? testing::push_up(rng, poset, lower) : rng.simplex(n, rng.integer(1, n));
    const auto flow = order::stochastic_dominates(poset, upper, lower, order::DominanceMethod::kCoupling);
    const auto sets = order::stochastic_dominates(poset, upper, lower, order::DominanceMethod::kUpperSets);
    const auto mono = order::stochastic_dominates(poset, upper, lower, order::DominanceMethod::kMonotoneFunctions);
    const auto name = "poset " + std::to_string(trial);
    if (flow.dominates != sets.dominates || sets.dominates != mono.dominates) o.fail(name + ": methods disagree");
    if (trial % 2 == 0 && !flow.dominates) o.fail(name + ": pushed-up distribution not dominant");
    if (!flow.dominates) continue;
    ++dominated;
    if (!flow.coupling) {
      o.fail(name + ": no coupling");
      continue;
    }
    const auto& q = *flow.coupling;
    for (int i = 0; i < n; ++i) {
      double row = 0.0, col = 0.0;
      for (int j = 0; j < n; ++j) {
        row += q[i][j];
        col += q[j][i];
        if (q[i][j] > 0.0 && !poset.le(j, i)) o.fail(name + ": coupling leaves the order graph");
        if (q[i][j] < 0.0) o.fail(name + ": negative coupling mass");
      }
      if (std::abs(row - upper[i]) > 1e-9 || std::abs(col - lower[i]) > 1e-9) o.fail(name + ": marginal error");
    }
  }
  const double elapsed = seconds_since(start);
  if (elapsed >= 10.0) o.fail("runtime " + fmt("%.2f", elapsed) + " s");
  o.detail = "200 pairs, " + std::to_string(dominated) + " dominated, " + fmt("%.2f", elapsed) + " s (limit 10 s)";
  report(3, "Stochastic-order oracle equivalence", o);
}

// ---------------------------------------------------------------- 4

// Largest achievable min-margin of `action` over its rivals for (c, belief)
// when others follow `behavior`. Every conjecture's margin vector is a
// convex combination of the vectors at polytope vertices (each tau atom
// plays one allowed action), so we search the convex hull of those points:
// every point, every segment between two points on a 1e-3 grid, and the
// exact crossing of the two margins on each segment.
double grid_margin(const GameInstance& g, int c, int belief, int action, const icr::BehaviorMap& behavior) {
  std::vector<int> rivals;
  for (int a : g.availability[c])
    if (a != action) rivals.push_back(a);
  if (rivals.empty()) return 0.0;

  struct Slot {
    int world;
    int atom;
  };
  std::vector<Slot> slots;
  for (int t = 0; t < g.num_worlds(); ++t) {
    if (g.beliefs[belief].probs[t] == 0.0) continue;
    for (int k = 0; k < static_cast<int>(g.type_space.tau[t].size()); ++k) slots.push_back({t, k});
  }
  std::vector<std::vector<double>> points;
  std::vector<int> pick(slots.size(), 0);
  std::function<void(size_t)> rec = [&](size_t i) {
    if (i == slots.size()) {
      std::vector<double> y(rivals.size(), 0.0);
      for (int t = 0; t < g.num_worlds(); ++t) {
        const double p = g.beliefs[belief].probs[t];
        if (p == 0.0) continue;
        AggregateProfile mu(g.num_characteristics(), g.num_actions());
        for (size_t k = 0; k < slots.size(); ++k) {
          if (slots[k].world != t) continue;
          const auto& atom = g.type_space.tau[t][slots[k].atom];
          mu.at(atom.characteristic, pick[k]) += atom.mass;
        }
        const int s = g.type_space.sigma[t];
        const double mine = eval_payoff(g, c, action, s, mu);
        for (size_t r = 0; r < rivals.size(); ++r) y[r] += p * (mine - eval_payoff(g, c, rivals[r], s, mu));
      }
      points.push_back(y);
      return;
    }
    const auto& atom = g.type_space.tau[slots[i].world][slots[i].atom];
    for (int a : behavior.at({atom.characteristic, atom.belief})) {
      pick[i] = a;
      rec(i + 1);
    }
  };
  rec(0);

  auto value = [](const std::vector<double>& y) { return *std::min_element(y.begin(), y.end()); };
  double best = -1e300;
  for (const auto& y : points) best = std::max(best, value(y));
  for (size_t i = 0; i < points.size(); ++i) {
    for (size_t j = i + 1; j < points.size(); ++j) {
      const auto& u = points[i];
      const auto& v = points[j];
      auto at = [&](double w) {
        std::vector<double> y(u.size());
        for (size_t r = 0; r < u.size(); ++r) y[r] = (1 - w) * u[r] + w * v[r];
        return y;
      };
      for (int step = 1; step < 1000; ++step) best = std::max(best, value(at(step * 1e-3)));
      if (u.size() == 2) {
        const double du = u[0] - u[1], dv = v[0] - v[1];
        if (du != dv) {
          const double w = du / (du - dv);
          if (w > 0.0 && w < 1.0) best = std::max(best, value(at(w)));
        }
      }
    }
  }
  return best;
}

void criterion_4() {
  Outcome o;
  int compared = 0, banded = 0, disagreements = 0;
  for (std::uint64_t seed = 1; seed <= 50; ++seed) {
    const auto g = testing::micro_game(seed);
    const auto s0 = icr::full_availability(g);
    const auto s1 = icr::eliminate_round(g, s0);
    for (const auto* behavior : {&s0, &s1}) {
      for (const auto& pair : registered_pairs(g)) {
        for (int a : g.availability[pair.characteristic]) {
          const bool solver = icr::best_reply_feasible(g, pair.characteristic, pair.belief, a, *behavior).survives;
          const double margin = grid_margin(g, pair.characteristic, pair.belief, a, *behavior);
          ++compared;
          if (std::abs(margin) <= 1e-6) {
            ++banded;
            continue;
          }
          if (solver != (margin > 0.0)) {
            ++disagreements;
            o.fail(g.name + ": verdict " + (solver ? "feasible" : "infeasible") + " but grid margin " +
                   fmt("%.3g", margin));
          }
        }
      }
    }
  }
  o.detail = "50 instances, " + std::to_string(compared) + " verdicts, " + std::to_string(disagreements) +
             " disagreements, " + std::to_string(banded) + " inside the 1e-6 band";
  report(4, "Conjecture-feasibility oracle", o);
}

// ---------------------------------------------------------------- 5

void criterion_5() {
  Outcome o;
  const auto start = Clock::now();
  int certified = 0, worlds_max = 0;
  for (std::uint64_t seed = 1; seed <= 50; ++seed) {
    const auto g = global_game::build_game(global_game::random_spec(5000 + seed, 40, 40));
    worlds_max = std::max(worlds_max, g.num_worlds());
    const auto stats = global_game::compute_statistics(g);
    const auto s = icr::icr_solve(g).rationalizable;
    global_game::BeliefSet top_one, bottom_zero;
    for (size_t i = 0; i < s.pairs.size(); ++i) {
      if (s.sets[i].back() == 1) top_one.push_back(s.pairs[i].belief);
      if (s.sets[i].front() == 0) bottom_zero.push_back(s.pairs[i].belief);
    }
    if (top_one != global_game::invest_possible(stats)) o.fail(g.name + ": top set differs from C_{1-x}");
    if (bottom_zero != global_game::noninvest_possible(stats)) o.fail(g.name + ": bottom set differs from C_x");
    for (double eps : {0.1, 0.2, 0.3, 0.4}) {
      const auto cert = global_game::uniqueness_certificate(g, eps);
      for (int b : cert.invest_region) {
        ++certified;
        if (s.at({0, b}) != std::vector<int>{1}) o.fail(g.name + ": invest region not unique");
      }
      for (int b : cert.noninvest_region) {
        ++certified;
        if (s.at({0, b}) != std::vector<int>{0}) o.fail(g.name + ": noninvest region not unique");
      }
    }
  }
  const double elapsed = seconds_since(start);
  if (elapsed >= 120.0) o.fail("runtime " + fmt("%.2f", elapsed) + " s");
  o.detail = "50 instances (up to " + std::to_string(worlds_max) + " worlds), " + std::to_string(certified) +
             " certified beliefs confirmed, " + fmt("%.2f", elapsed) + " s (limit 120 s)";
  report(5, "Global-game characterization cross-check", o);
}

// ---------------------------------------------------------------- 6

void criterion_6() {
  Outcome o;
  double worst = 0.0, previous = 1.0;
  for (const auto& [alpha, value] : testing::kContagionReference) {
    const double f = email_game::contagion_function(alpha);
    worst = std::max(worst, std::abs(f - value));
    if (!(f < previous)) o.fail("not strictly decreasing at alpha " + fmt("%g", alpha));
    previous = f;
  }
  if (worst > 1e-12) o.fail("reference error " + fmt("%.3g", worst));
  const double limit_gap = std::abs(email_game::contagion_function(1e-6) - 0.5);
  if (!(limit_gap < 1e-6)) o.fail("limit gap " + fmt("%.3g", limit_gap));

  int runs = 0;
  double slowest = 0.0;
  for (double L : {1.5, 2.0, 3.0}) {
    for (double alpha : {0.25, 0.5, 1.0, 2.0}) {
      email_game::EmailGameParams p;
      p.M = 1.0;
      p.L = L;
      p.alpha = alpha;
      p.n_positions = 20;
      p.max_signals = 10;
      p.buckets_per_unit = 4;
      auto start = Clock::now();
      const auto base = email_game::contagion_check(p);
      slowest = std::max(slowest, seconds_since(start));
      auto fine = p;
      fine.n_positions *= 2;
      fine.buckets_per_unit *= 2;
      start = Clock::now();
      const auto refined = email_game::contagion_check(fine);
      slowest = std::max(slowest, seconds_since(start));
      runs += 2;
      const auto tag = "L=" + fmt("%g", L) + " alpha=" + fmt("%g", alpha);
      if (!base.all_zero_unique) o.fail(tag + ": all_zero_unique false");
      if (base.all_zero_unique != refined.all_zero_unique) o.fail(tag + ": verdict changes under refinement");
    }
  }
  if (slowest >= 60.0) o.fail("slowest run " + fmt("%.2f", slowest) + " s");
  o.detail = "max reference error " + fmt("%.2e", worst) + ", f(1e-6) gap " + fmt("%.2e", limit_gap) + ", " +
             std::to_string(runs) + " contagion runs, slowest " + fmt("%.2f", slowest) + " s (limit 60 s)";
  report(6, "Contagion closed forms and equilibrium selection", o);
}

// ---------------------------------------------------------------- 7

void criterion_7() {
  Outcome o;
  testing::Rng rng(7);
  int hierarchies = 0;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const auto g = testing::random_game(7000 + seed);
    const auto dup = testing::duplicate_world(g, rng.integer(0, g.num_worlds() - 1), rng);
    for (int b = 0; b < g.num_beliefs(); ++b) {
      for (int depth = 1; depth <= 3; ++depth) {
        const auto before = hierarchy::extract_hierarchy(g, b, depth);
        const auto after = hierarchy::extract_hierarchy(dup, b, depth);
        hierarchies += 2;
        if (before.canonical() != after.canonical()) o.fail(g.name + ": hierarchy changed");
        if (!hierarchy::check_coherence(before).coherent || !hierarchy::check_coherence(after).coherent)
          o.fail(g.name + ": incoherent hierarchy");
      }
    }
    if (!(icr::icr_solve(g).rationalizable == icr::icr_solve(dup).rationalizable)) o.fail(g.name + ": ICR changed");
  }
  o.detail = "20 fixtures, " + std::to_string(hierarchies) + " hierarchies compared and coherent";
  report(7, "Hierarchy redundancy", o);
}

}  // namespace

int main() {
  criterion_1();
  criterion_2();
  criterion_3();
  criterion_4();
  criterion_5();
  criterion_6();
  criterion_7();
  std::printf("%d of 7 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
