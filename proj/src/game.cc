#include "lgl/game.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <sstream>

namespace lgl {

ActionLattice ActionLattice::from_poset(order::FinitePoset poset) {
  if (auto defect = order::poset_defect(poset); !defect.empty()) {
    throw std::invalid_argument("action order: " + defect);
  }
  auto check = order::check_lattice(poset);
  if (!check.is_lattice) {
    std::string msg = "action order is not a lattice";
    if (check.witness) {
      msg += ": " + poset.elements[check.witness->first] + " and " +
             poset.elements[check.witness->second] + " lack a join or meet";
    }
    throw std::invalid_argument(msg);
  }
  ActionLattice lattice;
  lattice.top = *order::top_element(poset);
  lattice.bottom = *order::bottom_element(poset);
  lattice.join_table = std::move(check.join);
  lattice.meet_table = std::move(check.meet);
  lattice.poset = std::move(poset);
  return lattice;
}

ActionLattice ActionLattice::chain(std::vector<std::string> labels) {
  std::vector<std::pair<int, int>> pairs;
  for (int i = 1; i < static_cast<int>(labels.size()); ++i) pairs.emplace_back(i - 1, i);
  return from_poset(order::FinitePoset::from_pairs(std::move(labels), pairs));
}

double AggregateProfile::action_mass(int a) const {
  double total = 0.0;
  for (int c = 0; c < num_c_; ++c) total += at(c, a);
  return total;
}

PayoffOracle PayoffOracle::linear(int num_c, int num_a, int num_s) {
  PayoffOracle p;
  p.mode = Mode::kLinear;
  p.num_c = num_c;
  p.num_a = num_a;
  p.num_s = num_s;
  p.base_values.assign(static_cast<size_t>(num_c) * num_a * num_s, 0.0);
  p.weight_values.assign(p.base_values.size() * num_c * num_a, 0.0);
  return p;
}

PayoffOracle PayoffOracle::blackbox(int num_c, int num_a, int num_s, Evaluator evaluator) {
  PayoffOracle p;
  p.mode = Mode::kBlackbox;
  p.num_c = num_c;
  p.num_a = num_a;
  p.num_s = num_s;
  p.evaluator = std::move(evaluator);
  return p;
}

bool GameInstance::available(int c, int a) const {
  const auto& set = availability[c];
  return std::binary_search(set.begin(), set.end(), a);
}

int GameInstance::top_available(int c) const {
  const auto& set = availability[c];
  int best = set.front();
  for (int a : set) best = actions.join(best, a);
  return best;
}

int GameInstance::bottom_available(int c) const {
  const auto& set = availability[c];
  int best = set.front();
  for (int a : set) best = actions.meet(best, a);
  return best;
}

std::vector<TypePair> registered_pairs(const GameInstance& game) {
  std::set<TypePair> pairs(game.queries.begin(), game.queries.end());
  for (const auto& population : game.type_space.tau) {
    for (const auto& atom : population) pairs.insert({atom.characteristic, atom.belief});
  }
  return {pairs.begin(), pairs.end()};
}

bool ValidationReport::has(const std::string& code) const {
  return std::any_of(violations.begin(), violations.end(),
                     [&](const Violation& v) { return v.code == code; });
}

namespace {

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(17);
  os << x;
  return os.str();
}

class Validator {
 public:
  Validator(const GameInstance& g, const ValidationOptions& o) : g_(g), options_(o) {}

  ValidationReport run() {
    characteristics();
    actions();
    availability();
    states();
    type_space();
    beliefs();
    queries();
    payoff();
    return std::move(report_);
  }

 private:
  void add(std::string code, std::string location, std::string message) {
    report_.violations.push_back({std::move(code), std::move(location), std::move(message)});
  }

  template <typename Labels>
  void distinct(const Labels& labels, const std::string& what) {
    std::set<std::string> seen;
    for (const auto& l : labels) {
      if (!seen.insert(l).second) add("duplicate label", what, "label '" + l + "' repeated");
    }
  }

  void characteristics() {
    const auto& cs = g_.characteristics;
    distinct(cs.labels, "characteristics");
    if (cs.labels.empty()) add("empty", "characteristics", "no characteristics");
    if (cs.nu.size() != cs.labels.size()) {
      add("nu length", "characteristics", "nu has " + std::to_string(cs.nu.size()) +
                                              " entries for " + std::to_string(cs.labels.size()) +
                                              " labels");
      return;
    }
    double total = 0.0;
    for (size_t c = 0; c < cs.nu.size(); ++c) {
      if (!(cs.nu[c] >= 0.0)) add("negative nu", cs.labels[c], "nu = " + fmt(cs.nu[c]));
      total += cs.nu[c];
    }
    if (std::abs(total - 1.0) > kStructuralTol) {
      add("nu not probability", "characteristics", "nu sums to " + fmt(total));
    }
  }

  void actions() {
    const auto& lat = g_.actions;
    distinct(lat.poset.elements, "actions");
    if (lat.size() == 0) {
      add("empty", "actions", "no actions");
      return;
    }
    if (auto defect = order::poset_defect(lat.poset); !defect.empty()) {
      add("order", "actions", defect);
      return;
    }
    const int n = lat.size();
    if (static_cast<int>(lat.join_table.size()) != n || static_cast<int>(lat.meet_table.size()) != n) {
      add("lattice", "actions", "join/meet tables missing");
      return;
    }
    for (int a = 0; a < n; ++a) {
      for (int b = 0; b < n; ++b) {
        const int j = lat.join_table[a][b];
        const int m = lat.meet_table[a][b];
        const std::string where = lat.label(a) + "," + lat.label(b);
        if (j < 0 || j >= n || m < 0 || m >= n) {
          add("lattice", where, "join/meet entry out of range");
          continue;
        }
        if (!lat.le(a, j) || !lat.le(b, j) || !lat.le(m, a) || !lat.le(m, b)) {
          add("lattice", where, "join/meet not a bound");
          continue;
        }
        for (int z = 0; z < n; ++z) {
          if (lat.le(a, z) && lat.le(b, z) && !lat.le(j, z)) {
            add("lattice", where, "join is not least: " + lat.label(z));
          }
          if (lat.le(z, a) && lat.le(z, b) && !lat.le(z, m)) {
            add("lattice", where, "meet is not greatest: " + lat.label(z));
          }
        }
      }
    }
    if (lat.top < 0 || lat.top >= n || lat.bottom < 0 || lat.bottom >= n) {
      add("lattice", "actions", "missing top or bottom");
      return;
    }
    for (int a = 0; a < n; ++a) {
      if (!lat.le(a, lat.top) || !lat.le(lat.bottom, a)) {
        add("lattice", "actions", "top/bottom do not bound " + lat.label(a));
      }
    }
  }

  void availability() {
    const int nc = g_.num_characteristics();
    if (static_cast<int>(g_.availability.size()) != nc) {
      add("availability", "availability", "one set per characteristic required");
      return;
    }
    for (int c = 0; c < nc; ++c) {
      const auto& set = g_.availability[c];
      const std::string& where = g_.characteristics.labels[c];
      if (set.empty()) {
        add("empty availability", where, "no available action");
        continue;
      }
      bool in_range = true;
      for (int a : set) in_range = in_range && a >= 0 && a < g_.num_actions();
      if (!in_range || !std::is_sorted(set.begin(), set.end()) ||
          std::adjacent_find(set.begin(), set.end()) != set.end()) {
        add("availability", where, "availability set must hold sorted distinct action indices");
        continue;
      }
      if (!options_.supermodular || g_.actions.join_table.empty()) continue;
      for (int a : set) {
        for (int b : set) {
          if (!g_.available(c, g_.actions.join(a, b)) || !g_.available(c, g_.actions.meet(a, b))) {
            add("not sublattice", where,
                "join/meet of " + g_.actions.label(a) + "," + g_.actions.label(b) +
                    " not available");
          }
        }
      }
    }
  }

  void states() {
    distinct(g_.states.labels, "states");
    if (g_.states.size() == 0) add("empty", "states", "no states");
    if (g_.states.values && g_.states.values->size() != g_.states.labels.size()) {
      add("state values", "states", "values must align with labels");
    }
  }

  void type_space() {
    const auto& ts = g_.type_space;
    distinct(ts.worlds, "worlds");
    if (ts.worlds.empty()) add("empty", "type_space", "no worlds");
    const int nw = ts.num_worlds();
    if (static_cast<int>(ts.sigma.size()) != nw || static_cast<int>(ts.tau.size()) != nw) {
      add("type space shape", "type_space", "sigma and tau must have one entry per world");
      return;
    }
    const int nc = g_.num_characteristics();
    for (int t = 0; t < nw; ++t) {
      const std::string& where = ts.worlds[t];
      if (ts.sigma[t] < 0 || ts.sigma[t] >= g_.num_states()) {
        add("sigma range", where, "sigma maps to an unknown state");
      }
      std::vector<double> marginal(nc, 0.0);
      double total = 0.0;
      bool shape_ok = true;
      for (const auto& atom : ts.tau[t]) {
        if (atom.characteristic < 0 || atom.characteristic >= nc) {
          add("tau characteristic", where, "unknown characteristic in tau");
          shape_ok = false;
          continue;
        }
        if (atom.belief < 0 || atom.belief >= g_.num_beliefs()) {
          add("dangling belief", where, "tau references a belief absent from the registry");
        }
        if (!(atom.mass >= 0.0)) add("tau weights", where, "negative tau mass");
        marginal[atom.characteristic] += atom.mass;
        total += atom.mass;
      }
      if (std::abs(total - 1.0) > kStructuralTol) {
        add("tau weights", where, "tau weights sum to " + fmt(total));
      }
      if (!shape_ok || g_.characteristics.nu.size() != marginal.size()) continue;
      for (int c = 0; c < nc; ++c) {
        if (std::abs(marginal[c] - g_.characteristics.nu[c]) > kStructuralTol) {
          add("marginal mismatch", where,
              "mass " + fmt(marginal[c]) + " on " + g_.characteristics.labels[c] +
                  " but nu = " + fmt(g_.characteristics.nu[c]));
        }
      }
    }
  }

  void beliefs() {
    std::vector<std::string> labels;
    for (const auto& b : g_.beliefs) labels.push_back(b.label);
    distinct(labels, "beliefs");
    const int nw = g_.num_worlds();
    for (const auto& b : g_.beliefs) {
      if (static_cast<int>(b.probs.size()) != nw) {
        add("belief length", b.label, "belief must have one entry per world");
        continue;
      }
      double total = 0.0;
      bool negative = false;
      for (double p : b.probs) {
        negative = negative || !(p >= 0.0);
        total += p;
      }
      if (negative || std::abs(total - 1.0) > kStructuralTol) {
        add("belief not probability", b.label, "belief sums to " + fmt(total));
      }
    }
  }

  void queries() {
    for (const auto& q : g_.queries) {
      if (q.characteristic < 0 || q.characteristic >= g_.num_characteristics()) {
        add("query", "queries", "query references an unknown characteristic");
      }
      if (q.belief < 0 || q.belief >= g_.num_beliefs()) {
        add("dangling belief", "queries", "query references a belief absent from the registry");
      }
    }
  }

  void payoff() {
    const auto& p = g_.payoff;
    if (p.num_c != g_.num_characteristics() || p.num_a != g_.num_actions() ||
        p.num_s != g_.num_states()) {
      add("payoff shape", "payoff", "payoff dimensions disagree with the game");
      return;
    }
    if (p.is_linear()) {
      const size_t nb = static_cast<size_t>(p.num_c) * p.num_a * p.num_s;
      if (p.base_values.size() != nb || p.weight_values.size() != nb * p.num_c * p.num_a) {
        add("payoff shape", "payoff", "linear payoff tables have the wrong size");
        return;
      }
      for (double x : p.base_values)
        if (!std::isfinite(x)) add("payoff value", "payoff.base", "non-finite entry");
      for (double x : p.weight_values)
        if (!std::isfinite(x)) add("payoff value", "payoff.weights", "non-finite entry");
    } else if (!p.evaluator) {
      add("payoff evaluator", "payoff", "blackbox payoff without an evaluator");
    }
  }

  const GameInstance& g_;
  const ValidationOptions& options_;
  ValidationReport report_;
};

}  // namespace

ValidationReport validate_game(const GameInstance& game, const ValidationOptions& options) {
  return Validator(game, options).run();
}

std::string aggregate_defect(const GameInstance& g, const AggregateProfile& mu) {
  if (mu.num_characteristics() != g.num_characteristics() || mu.num_actions() != g.num_actions()) {
    return "aggregate has the wrong shape";
  }
  for (int c = 0; c < g.num_characteristics(); ++c) {
    double total = 0.0;
    for (int a = 0; a < g.num_actions(); ++a) {
      const double m = mu.at(c, a);
      if (m < 0.0) return "negative mass at " + g.characteristics.labels[c];
      if (m > 0.0 && !g.available(c, a)) {
        return "mass on unavailable action " + g.actions.label(a) + " at " +
               g.characteristics.labels[c];
      }
      total += m;
    }
    if (std::abs(total - g.characteristics.nu[c]) > kStructuralTol) {
      return "C-marginal differs from nu at " + g.characteristics.labels[c];
    }
  }
  return {};
}

double eval_payoff(const GameInstance& g, int c, int a, int s, const AggregateProfile& mu) {
  if (!g.available(c, a)) {
    throw UnavailableAction("action " + g.actions.label(a) + " is not available to " +
                            g.characteristics.labels[c]);
  }
  const auto& p = g.payoff;
  if (!p.is_linear()) return p.evaluator(c, a, s, mu);
  double value = p.base(c, a, s);
  for (int c2 = 0; c2 < p.num_c; ++c2) {
    for (int a2 = 0; a2 < p.num_a; ++a2) {
      const double m = mu.at(c2, a2);
      if (m != 0.0) value += p.weight(c, a, s, c2, a2) * m;
    }
  }
  return value;
}

double conjecture_payoff(const GameInstance& g, int c, int a,
                         std::span<const ConjectureAtom> conjecture) {
  double total = 0.0;
  for (const auto& atom : conjecture) {
    total += atom.weight * eval_payoff(g, c, a, atom.state, atom.aggregate);
  }
  return total;
}

}  // namespace lgl
