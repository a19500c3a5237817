#ifndef LGL_ORDER_H_
#define LGL_ORDER_H_

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace lgl::order {

// Finite partial order. leq[i][j] is true when element i <= element j.
struct FinitePoset {
  std::vector<std::string> elements;
  std::vector<std::vector<bool>> leq;

  int size() const { return static_cast<int>(elements.size()); }
  bool le(int i, int j) const { return leq[i][j]; }

  // Builds the reflexive-transitive closure of the given covering pairs.
  static FinitePoset from_pairs(std::vector<std::string> elements,
                                const std::vector<std::pair<int, int>>& pairs);
  // Total order 0 < 1 < ... < n-1.
  static FinitePoset chain(int n);
};

// Empty string when leq is reflexive, antisymmetric and transitive; otherwise
// a description of the first failure found.
std::string poset_defect(const FinitePoset& poset);

struct LatticeCheck {
  bool is_lattice = false;
  std::vector<std::vector<int>> join;
  std::vector<std::vector<int>> meet;
  std::optional<std::pair<int, int>> witness;  // pair without a join or meet
};

LatticeCheck check_lattice(const FinitePoset& poset);

// Indices of the greatest / least element, if any.
std::optional<int> top_element(const FinitePoset& poset);
std::optional<int> bottom_element(const FinitePoset& poset);

enum class DominanceMethod { kCoupling, kUpperSets, kMonotoneFunctions };

// Upper-set and monotone-function enumeration is exponential in the poset
// size; both refuse posets larger than this.
inline constexpr int kMaxEnumerationSize = 12;
inline constexpr double kDominanceTol = 1e-9;

struct DominanceResult {
  bool dominates = false;
  // coupling[i][j] is the mass moved from upper-atom i to lower-atom j; only
  // pairs with j <= i in the poset carry mass.
  std::optional<std::vector<std::vector<double>>> coupling;
  // An upper set U with upper(U) < lower(U).
  std::optional<std::vector<int>> violating_upper_set;
};

// Stochastic order: true when `upper` dominates `lower`, i.e. a coupling
// supported on {(x, y) : x >= y} exists.
DominanceResult stochastic_dominates(const FinitePoset& poset, const std::vector<double>& upper,
                                     const std::vector<double>& lower,
                                     DominanceMethod method = DominanceMethod::kCoupling);

// Distributions over C x X with a common C-marginal. mass[c][x].
// (c, x) >= (c', x') holds only when c == c' and x >= x'. Throws
// std::invalid_argument on a marginal mismatch beyond 1e-12.
bool product_order_dominates(const std::vector<double>& c_marginal, const FinitePoset& poset,
                             const std::vector<std::vector<double>>& upper,
                             const std::vector<std::vector<double>>& lower,
                             DominanceMethod method = DominanceMethod::kCoupling);

// All upper sets of the poset as sorted index lists.
std::vector<std::vector<int>> enumerate_upper_sets(const FinitePoset& poset);

}  // namespace lgl::order

#endif  // LGL_ORDER_H_
