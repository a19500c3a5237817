#ifndef LGL_NUMERICS_H_
#define LGL_NUMERICS_H_

#include <limits>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace lgl::numerics {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

// Raised when a pivot or verification step cannot be trusted in double
// precision. The message carries the offending magnitudes.
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

// Sparse row: sum_k coeffs[k].second * x[coeffs[k].first].
struct LinearRow {
  std::vector<std::pair<int, double>> coeffs;
  double rhs = 0.0;

  double evaluate(const std::vector<double>& x) const;
};

// Feasibility question over a box: lower <= x <= upper, equality rows
// (row == rhs) and covering rows (row >= rhs). No objective.
struct LinearFeasibilityProblem {
  std::vector<double> lower;
  std::vector<double> upper;
  std::vector<LinearRow> equalities;
  std::vector<LinearRow> at_least;

  int add_variable(double lo, double hi);
  void add_equality(LinearRow row) { equalities.push_back(std::move(row)); }
  void add_at_least(LinearRow row) { at_least.push_back(std::move(row)); }
  int num_variables() const { return static_cast<int>(lower.size()); }
};

// Farkas-style proof of infeasibility. With y_eq free and y_ge >= 0 the
// combination sum y_i * row_i must stay below sum y_i * rhs_i for every
// point of the box; `gap` is how far below it stays at the box maximum.
struct FarkasCertificate {
  std::vector<double> equality_multipliers;
  std::vector<double> at_least_multipliers;
  double gap = 0.0;
};

struct FeasibilityResult {
  bool feasible = false;
  std::vector<double> point;
  FarkasCertificate certificate;
  int pivots = 0;
};

// Phase-1 bounded-variable primal simplex with Bland's rule. Every variable
// must have finite bounds.
FeasibilityResult solve_feasibility(const LinearFeasibilityProblem& problem,
                                    double tol = 1e-9);

// Largest violation of any bound or row at x (0 for a feasible point).
double max_violation(const LinearFeasibilityProblem& problem,
                     const std::vector<double>& x);

// Recomputes the certificate gap from scratch. A positive return value proves
// infeasibility; the function never trusts the stored gap.
double certificate_gap(const LinearFeasibilityProblem& problem,
                       const FarkasCertificate& certificate);

struct Arc {
  int from = 0;
  int to = 0;
  double capacity = 0.0;
};

struct FlowNetwork {
  int num_nodes = 0;
  int source = 0;
  int sink = 0;
  std::vector<Arc> arcs;

  int add_arc(int from, int to, double capacity);
};

struct FlowResult {
  double value = 0.0;
  std::vector<double> flow;          // one entry per arc
  std::vector<bool> source_side;     // minimum cut reachable from the source
};

// Dinic's algorithm on double capacities.
FlowResult max_flow(const FlowNetwork& network);

}  // namespace lgl::numerics

#endif  // LGL_NUMERICS_H_
