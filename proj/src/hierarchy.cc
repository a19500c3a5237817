#include "lgl/hierarchy.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>

#include "lgl/game_io.h"

namespace lgl::hierarchy {

namespace {

std::string fixed12(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12f", x);
  std::string s = buf;
  if (s == "-0.000000000000") s = "0.000000000000";
  return s;
}

std::string population_key(const std::vector<PopulationAtom>& population) {
  std::string key = "{";
  for (const auto& atom : population) {
    key += std::to_string(atom.characteristic) + ":" + fixed12(atom.mass) + ":" + atom.hierarchy->key +
           ";";
  }
  return key + "}";
}

std::vector<PopulationAtom> merge_population(std::vector<PopulationAtom> atoms) {
  std::map<std::pair<int, std::string>, PopulationAtom> merged;
  for (auto& atom : atoms) {
    if (atom.mass == 0.0) continue;
    auto [it, inserted] = merged.try_emplace({atom.characteristic, atom.hierarchy->key}, atom);
    if (!inserted) it->second.mass += atom.mass;
  }
  std::vector<PopulationAtom> out;
  for (auto& [key, atom] : merged) out.push_back(std::move(atom));
  return out;
}

void check_depth(int depth, int max_depth) {
  if (depth < 1) throw std::invalid_argument("hierarchy depth must be at least 1");
  if (depth > max_depth) {
    throw DepthGuardExceeded("hierarchy depth " + std::to_string(depth) + " exceeds the guard " +
                             std::to_string(max_depth));
  }
}

}  // namespace

NodePtr make_node(int level, std::vector<Point> points) {
  std::map<std::pair<int, std::string>, Point> merged;
  for (auto& point : points) {
    if (point.prob == 0.0) continue;
    point.population = merge_population(std::move(point.population));
    std::string pop = level > 1 ? population_key(point.population) : std::string();
    auto [it, inserted] = merged.try_emplace({point.state, std::move(pop)}, point);
    if (!inserted) it->second.prob += point.prob;
  }
  auto node = std::make_shared<Node>();
  node->level = level;
  node->key = "L" + std::to_string(level) + "[";
  for (auto& [key, point] : merged) {
    node->key += std::to_string(key.first) + key.second + ":" + fixed12(point.prob) + ";";
    node->points.push_back(std::move(point));
  }
  node->key += "]";
  return node;
}

TruncatedHierarchy extract_hierarchy(const GameInstance& game, int belief, int depth,
                                     int max_depth) {
  check_depth(depth, max_depth);
  if (belief < 0 || belief >= game.num_beliefs()) {
    throw std::out_of_range("extract_hierarchy: unknown belief id");
  }
  const auto& ts = game.type_space;
  const int nb = game.num_beliefs();

  auto level_of = [&](int b, int level, const std::vector<NodePtr>& below) {
    std::vector<Point> points;
    const auto& probs = game.beliefs[b].probs;
    for (int t = 0; t < ts.num_worlds(); ++t) {
      if (probs[t] == 0.0) continue;
      Point point{ts.sigma[t], {}, probs[t]};
      if (level > 1) {
        for (const auto& atom : ts.tau[t]) {
          point.population.push_back({atom.characteristic, below.at(atom.belief), atom.mass});
        }
      }
      points.push_back(std::move(point));
    }
    return make_node(level, std::move(points));
  };

  // Lower levels are needed for every belief that appears in a population.
  TruncatedHierarchy h;
  h.depth = depth;
  std::vector<NodePtr> current;
  for (int level = 1; level <= depth; ++level) {
    std::vector<NodePtr> next(nb);
    if (level == depth) {
      next[belief] = level_of(belief, level, current);
    } else {
      for (int b = 0; b < nb; ++b) next[b] = level_of(b, level, current);
    }
    h.levels.push_back(next[belief]);
    current = std::move(next);
  }
  return h;
}

NodePtr marginal(const Node& node) {
  if (node.level < 2) throw std::invalid_argument("marginal: level-1 beliefs have no marginal");
  std::vector<Point> points;
  for (const auto& point : node.points) {
    Point out{point.state, {}, point.prob};
    if (node.level > 2) {
      for (const auto& atom : point.population) {
        out.population.push_back({atom.characteristic, marginal(*atom.hierarchy), atom.mass});
      }
    }
    points.push_back(std::move(out));
  }
  return make_node(node.level - 1, std::move(points));
}

namespace {

std::string vector_defect(const Node& node) {
  double total = 0.0;
  for (const auto& point : node.points) {
    if (point.prob < 0.0) return "negative probability";
    total += point.prob;
    if (node.level > 1) {
      double mass = 0.0;
      for (const auto& atom : point.population) {
        if (atom.mass < 0.0) return "negative population mass";
        mass += atom.mass;
        if (atom.hierarchy->level != node.level - 1) return "population hierarchy at the wrong level";
        if (auto inner = vector_defect(*atom.hierarchy); !inner.empty()) return inner;
      }
      if (std::abs(mass - 1.0) > kStructuralTol) return "population masses do not sum to 1";
    }
  }
  if (std::abs(total - 1.0) > kStructuralTol) return "probabilities do not sum to 1";
  return {};
}

}  // namespace

CoherenceReport check_coherence(const TruncatedHierarchy& h) {
  CoherenceReport report;
  for (int k = 1; k <= static_cast<int>(h.levels.size()); ++k) {
    if (auto defect = vector_defect(*h.levels[k - 1]); !defect.empty()) {
      report.first_violation_level = k;
      report.message = "level " + std::to_string(k) + ": " + defect;
      return report;
    }
  }
  for (int k = 1; k < static_cast<int>(h.levels.size()); ++k) {
    if (marginal(*h.levels[k])->key != h.levels[k - 1]->key) {
      report.first_violation_level = k;
      report.message = "level " + std::to_string(k) + " differs from the marginal of level " +
                       std::to_string(k + 1);
      return report;
    }
  }
  report.coherent = true;
  return report;
}

bool hierarchy_equivalent(const GameInstance& game, int belief1, int belief2, int depth,
                          int max_depth) {
  const auto a = extract_hierarchy(game, belief1, depth, max_depth);
  const auto b = extract_hierarchy(game, belief2, depth, max_depth);
  for (int k = 0; k < depth; ++k)
    if (a.levels[k]->key != b.levels[k]->key) return false;
  return true;
}

TruncatedHierarchy mix_hierarchies(const TruncatedHierarchy& a, const TruncatedHierarchy& b,
                                   double w) {
  if (a.depth != b.depth) throw std::invalid_argument("mix_hierarchies: depths differ");
  if (!(w >= 0.0 && w <= 1.0)) throw std::invalid_argument("mix_hierarchies: weight outside [0, 1]");
  TruncatedHierarchy out;
  out.depth = a.depth;
  for (int k = 0; k < a.depth; ++k) {
    std::vector<Point> points;
    for (auto point : a.levels[k]->points) {
      point.prob *= w;
      points.push_back(std::move(point));
    }
    for (auto point : b.levels[k]->points) {
      point.prob *= 1.0 - w;
      points.push_back(std::move(point));
    }
    out.levels.push_back(make_node(k + 1, std::move(points)));
  }
  return out;
}

namespace {

nlohmann::json node_json(const Node& node, const GameInstance& game) {
  auto points = nlohmann::json::array();
  for (const auto& point : node.points) {
    nlohmann::json p;
    p["state"] = game.states.labels.at(point.state);
    p["prob"] = report_number(point.prob);
    if (node.level > 1) {
      auto population = nlohmann::json::array();
      for (const auto& atom : point.population) {
        population.push_back({{"characteristic", game.characteristics.labels.at(atom.characteristic)},
                              {"mass", report_number(atom.mass)},
                              {"belief", node_json(*atom.hierarchy, game)}});
      }
      p["population"] = std::move(population);
    }
    points.push_back(std::move(p));
  }
  return {{"level", node.level}, {"points", std::move(points)}};
}

}  // namespace

nlohmann::json to_json(const TruncatedHierarchy& h, const GameInstance& game) {
  auto levels = nlohmann::json::array();
  for (const auto& node : h.levels) levels.push_back(node_json(*node, game));
  return {{"depth", h.depth}, {"levels", std::move(levels)}};
}

}  // namespace lgl::hierarchy
