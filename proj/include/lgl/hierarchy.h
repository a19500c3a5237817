#ifndef LGL_HIERARCHY_H_
#define LGL_HIERARCHY_H_

#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "lgl/game.h"

// Finite truncations of belief hierarchies induced by a type space.
namespace lgl::hierarchy {

inline constexpr int kDefaultMaxDepth = 3;

class DepthGuardExceeded : public std::invalid_argument {
 public:
  explicit DepthGuardExceeded(const std::string& what) : std::invalid_argument(what) {}
};

struct Node;
using NodePtr = std::shared_ptr<const Node>;

struct PopulationAtom {
  int characteristic = 0;
  NodePtr hierarchy;  // one level below the enclosing node
  double mass = 0.0;
};

// One support point of a level-k belief: a state of nature and, from level 2
// on, the population distribution over (characteristic, level k-1 belief).
struct Point {
  int state = 0;
  std::vector<PopulationAtom> population;  // sorted by (characteristic, key)
  double prob = 0.0;
};

struct Node {
  int level = 1;
  std::vector<Point> points;  // sorted by (state, population key)
  std::string key;            // canonical serialization, probabilities at 12 digits
};

// Builds a node from unsorted, possibly repeated points: merges equal
// points, sorts, and computes the key.
NodePtr make_node(int level, std::vector<Point> points);

struct TruncatedHierarchy {
  int depth = 0;
  std::vector<NodePtr> levels;  // levels[k - 1] is the level-k belief

  const std::string& canonical() const { return levels.back()->key; }
};

TruncatedHierarchy extract_hierarchy(const GameInstance& game, int belief, int depth,
                                     int max_depth = kDefaultMaxDepth);

// Level-j marginal of a level-(j+1) node.
NodePtr marginal(const Node& node);

struct CoherenceReport {
  bool coherent = false;
  int first_violation_level = 0;  // level k whose object differs from marg of level k+1
  std::string message;
};

CoherenceReport check_coherence(const TruncatedHierarchy& h);

bool hierarchy_equivalent(const GameInstance& game, int belief1, int belief2, int depth,
                          int max_depth = kDefaultMaxDepth);

// Level-by-level mixture w * a + (1 - w) * b of two hierarchies of equal depth.
TruncatedHierarchy mix_hierarchies(const TruncatedHierarchy& a, const TruncatedHierarchy& b,
                                   double w);

nlohmann::json to_json(const TruncatedHierarchy& h, const GameInstance& game);

}  // namespace lgl::hierarchy

#endif  // LGL_HIERARCHY_H_
