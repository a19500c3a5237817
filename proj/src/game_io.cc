#include "lgl/game_io.h"

#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

namespace lgl {

using nlohmann::json;

namespace {

class LabelIndex {
 public:
  LabelIndex(const std::vector<std::string>& labels, std::string what) : what_(std::move(what)) {
    for (size_t i = 0; i < labels.size(); ++i) {
      if (!index_.emplace(labels[i], static_cast<int>(i)).second) {
        throw GameParseError("duplicate " + what_ + " label '" + labels[i] + "'");
      }
    }
  }

  int at(const json& label) const {
    const auto key = label.get<std::string>();
    auto it = index_.find(key);
    if (it == index_.end()) throw GameParseError("unknown " + what_ + " '" + key + "'");
    return it->second;
  }

  int find_or(const json& label, int fallback) const {
    auto it = index_.find(label.get<std::string>());
    return it == index_.end() ? fallback : it->second;
  }

 private:
  std::string what_;
  std::map<std::string, int> index_;
};

const json& field(const json& doc, const char* key) {
  if (!doc.is_object() || !doc.contains(key)) {
    throw GameParseError(std::string("missing field '") + key + "'");
  }
  return doc.at(key);
}

std::vector<std::string> string_list(const json& doc, const char* what) {
  if (!doc.is_array()) throw GameParseError(std::string(what) + " must be an array");
  std::vector<std::string> out;
  for (const auto& item : doc) {
    if (!item.is_string()) throw GameParseError(std::string(what) + " entries must be strings");
    out.push_back(item.get<std::string>());
  }
  return out;
}

double number(const json& value, const char* what) {
  if (!value.is_number()) throw GameParseError(std::string(what) + " must be a number");
  return value.get<double>();
}

const json& tuple(const json& value, size_t arity, const char* what) {
  if (!value.is_array() || value.size() != arity) {
    throw GameParseError(std::string(what) + " entries must be arrays of length " +
                         std::to_string(arity));
  }
  return value;
}

ActionLattice parse_actions(const json& doc) {
  auto labels = string_list(field(doc, "list"), "actions.list");
  LabelIndex index(labels, "action");
  const int n = static_cast<int>(labels.size());
  std::vector<std::pair<int, int>> pairs;
  if (doc.contains("leq")) {
    for (const auto& p : doc.at("leq")) {
      tuple(p, 2, "actions.leq");
      pairs.emplace_back(index.at(p[0]), index.at(p[1]));
    }
  } else {
    for (int i = 1; i < n; ++i) pairs.emplace_back(i - 1, i);
  }
  ActionLattice lattice;
  lattice.poset = order::FinitePoset::from_pairs(labels, pairs);
  if (order::poset_defect(lattice.poset).empty()) {
    auto check = order::check_lattice(lattice.poset);
    if (check.is_lattice) {
      lattice.join_table = std::move(check.join);
      lattice.meet_table = std::move(check.meet);
      lattice.top = *order::top_element(lattice.poset);
      lattice.bottom = *order::bottom_element(lattice.poset);
    }
  }
  auto read_table = [&](const char* key, std::vector<std::vector<int>>& table) {
    if (!doc.contains(key)) return;
    const json& rows = doc.at(key);
    if (!rows.is_array() || static_cast<int>(rows.size()) != n) {
      throw GameParseError(std::string("actions.") + key + " must be an n x n table");
    }
    table.assign(n, std::vector<int>(n, -1));
    for (int i = 0; i < n; ++i) {
      if (!rows[i].is_array() || static_cast<int>(rows[i].size()) != n) {
        throw GameParseError(std::string("actions.") + key + " must be an n x n table");
      }
      for (int j = 0; j < n; ++j) table[i][j] = index.at(rows[i][j]);
    }
  };
  read_table("join", lattice.join_table);
  read_table("meet", lattice.meet_table);
  return lattice;
}

}  // namespace

GameInstance game_from_json(const json& doc) {
  try {
    GameInstance g;
    if (!doc.is_object()) throw GameParseError("game document must be an object");
    if (doc.contains("name")) g.name = doc.at("name").get<std::string>();

    const json& chars = field(doc, "characteristics");
    g.characteristics.labels = string_list(field(chars, "labels"), "characteristics.labels");
    for (const auto& x : field(chars, "nu")) g.characteristics.nu.push_back(number(x, "nu"));
    LabelIndex c_index(g.characteristics.labels, "characteristic");

    g.actions = parse_actions(field(doc, "actions"));
    LabelIndex a_index(g.actions.poset.elements, "action");

    const json& avail = field(doc, "availability");
    if (!avail.is_object()) throw GameParseError("availability must be an object");
    g.availability.assign(g.num_characteristics(), {});
    for (const auto& [label, list] : avail.items()) {
      const int c = c_index.at(json(label));
      for (const auto& a : list) g.availability[c].push_back(a_index.at(a));
      std::sort(g.availability[c].begin(), g.availability[c].end());
    }

    const json& states = field(doc, "states");
    g.states.labels = string_list(field(states, "labels"), "states.labels");
    if (states.contains("values")) {
      std::vector<double> values;
      for (const auto& v : states.at("values")) values.push_back(number(v, "states.values"));
      g.states.values = std::move(values);
    }
    LabelIndex s_index(g.states.labels, "state");

    std::vector<std::string> belief_labels;
    const json& beliefs = field(doc, "beliefs");
    if (!beliefs.is_array()) throw GameParseError("beliefs must be an array");
    for (const auto& b : beliefs) belief_labels.push_back(field(b, "label").get<std::string>());
    LabelIndex b_index(belief_labels, "belief");
    const int dangling = static_cast<int>(belief_labels.size());

    const json& ts = field(doc, "type_space");
    g.type_space.worlds = string_list(field(ts, "worlds"), "type_space.worlds");
    LabelIndex w_index(g.type_space.worlds, "world");
    for (const auto& s : field(ts, "sigma")) g.type_space.sigma.push_back(s_index.at(s));
    for (const auto& population : field(ts, "tau")) {
      std::vector<TauAtom> atoms;
      for (const auto& atom : population) {
        tuple(atom, 3, "tau");
        atoms.push_back({c_index.at(atom[0]), b_index.find_or(atom[1], dangling),
                         number(atom[2], "tau mass")});
      }
      g.type_space.tau.push_back(std::move(atoms));
    }

    for (const auto& b : beliefs) {
      Belief belief;
      belief.label = b.at("label").get<std::string>();
      belief.probs.assign(g.num_worlds(), 0.0);
      for (const auto& entry : field(b, "probs")) {
        tuple(entry, 2, "belief probs");
        belief.probs[w_index.at(entry[0])] += number(entry[1], "belief probability");
      }
      g.beliefs.push_back(std::move(belief));
    }

    if (doc.contains("queries")) {
      for (const auto& q : doc.at("queries")) {
        tuple(q, 2, "queries");
        g.queries.push_back({c_index.at(q[0]), b_index.find_or(q[1], dangling)});
      }
    }

    const json& payoff = field(doc, "payoff");
    const auto mode = field(payoff, "mode").get<std::string>();
    if (mode != "linear") {
      throw GameParseError("payoff mode '" + mode + "' cannot be loaded from a file");
    }
    g.payoff = PayoffOracle::linear(g.num_characteristics(), g.num_actions(), g.num_states());
    if (payoff.contains("base")) {
      for (const auto& e : payoff.at("base")) {
        tuple(e, 4, "payoff.base");
        g.payoff.base(c_index.at(e[0]), a_index.at(e[1]), s_index.at(e[2])) +=
            number(e[3], "payoff.base value");
      }
    }
    if (payoff.contains("weights")) {
      for (const auto& e : payoff.at("weights")) {
        tuple(e, 6, "payoff.weights");
        g.payoff.weight(c_index.at(e[0]), a_index.at(e[1]), s_index.at(e[2]), c_index.at(e[3]),
                        a_index.at(e[4])) += number(e[5], "payoff.weights value");
      }
    }
    return g;
  } catch (const json::exception& e) {
    throw GameParseError(std::string("malformed game document: ") + e.what());
  }
}

json game_to_json(const GameInstance& g) {
  json doc;
  if (!g.name.empty()) doc["name"] = g.name;

  doc["characteristics"] = {{"labels", g.characteristics.labels}, {"nu", g.characteristics.nu}};

  json actions;
  actions["list"] = g.actions.poset.elements;
  json leq = json::array();
  for (int i = 0; i < g.num_actions(); ++i)
    for (int j = 0; j < g.num_actions(); ++j)
      if (i != j && g.actions.le(i, j)) leq.push_back({g.actions.label(i), g.actions.label(j)});
  actions["leq"] = leq;
  auto table = [&](const std::vector<std::vector<int>>& t) {
    json rows = json::array();
    for (const auto& row : t) {
      json r = json::array();
      for (int a : row) r.push_back(a >= 0 && a < g.num_actions() ? g.actions.label(a) : "?");
      rows.push_back(r);
    }
    return rows;
  };
  if (!g.actions.join_table.empty()) {
    actions["join"] = table(g.actions.join_table);
    actions["meet"] = table(g.actions.meet_table);
  }
  doc["actions"] = actions;

  json avail = json::object();
  for (int c = 0; c < g.num_characteristics(); ++c) {
    json list = json::array();
    for (int a : g.availability[c]) list.push_back(g.actions.label(a));
    avail[g.characteristics.labels[c]] = list;
  }
  doc["availability"] = avail;

  json states = {{"labels", g.states.labels}};
  if (g.states.values) states["values"] = *g.states.values;
  doc["states"] = states;

  auto belief_label = [&](int b) -> std::string {
    return b >= 0 && b < g.num_beliefs() ? g.beliefs[b].label : "<dangling>";
  };
  json sigma = json::array();
  json tau = json::array();
  for (int t = 0; t < g.num_worlds(); ++t) {
    sigma.push_back(g.states.labels[g.type_space.sigma[t]]);
    json population = json::array();
    for (const auto& atom : g.type_space.tau[t]) {
      population.push_back(
          {g.characteristics.labels[atom.characteristic], belief_label(atom.belief), atom.mass});
    }
    tau.push_back(population);
  }
  doc["type_space"] = {{"worlds", g.type_space.worlds}, {"sigma", sigma}, {"tau", tau}};

  json beliefs = json::array();
  for (const auto& b : g.beliefs) {
    json probs = json::array();
    for (int t = 0; t < g.num_worlds(); ++t) {
      if (b.probs[t] != 0.0) probs.push_back({g.type_space.worlds[t], b.probs[t]});
    }
    beliefs.push_back({{"label", b.label}, {"probs", probs}});
  }
  doc["beliefs"] = beliefs;

  if (!g.queries.empty()) {
    json queries = json::array();
    for (const auto& q : g.queries) {
      queries.push_back({g.characteristics.labels[q.characteristic], belief_label(q.belief)});
    }
    doc["queries"] = queries;
  }

  if (!g.payoff.is_linear()) {
    throw std::invalid_argument("game_to_json: blackbox payoffs cannot be serialized");
  }
  json base = json::array();
  json weights = json::array();
  const auto& p = g.payoff;
  for (int c = 0; c < p.num_c; ++c)
    for (int a = 0; a < p.num_a; ++a)
      for (int s = 0; s < p.num_s; ++s) {
        const auto& cl = g.characteristics.labels[c];
        const auto& al = g.actions.label(a);
        const auto& sl = g.states.labels[s];
        if (p.base(c, a, s) != 0.0) base.push_back({cl, al, sl, p.base(c, a, s)});
        for (int c2 = 0; c2 < p.num_c; ++c2)
          for (int a2 = 0; a2 < p.num_a; ++a2) {
            const double w = p.weight(c, a, s, c2, a2);
            if (w != 0.0) {
              weights.push_back(
                  {cl, al, sl, g.characteristics.labels[c2], g.actions.label(a2), w});
            }
          }
      }
  doc["payoff"] = {{"mode", "linear"}, {"base", base}, {"weights", weights}};
  return doc;
}

GameInstance load_game(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw GameParseError("cannot open " + path);
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    throw GameParseError(path + ": " + e.what());
  }
  return game_from_json(doc);
}

void save_game(const GameInstance& game, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << dump_json(game_to_json(game));
}

std::string dump_json(const json& doc) { return doc.dump(1) + "\n"; }

double report_number(double x) {
  if (!std::isfinite(x) || std::abs(x) >= 1e6) return x;
  const double r = std::round(x * 1e12) / 1e12;
  return r == 0.0 ? 0.0 : r;
}

}  // namespace lgl
