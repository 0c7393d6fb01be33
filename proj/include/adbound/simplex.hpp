#pragma once

#include <cstddef>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

namespace adbound {

enum class Relation { Eq, Le };

struct LpConstraint {
  std::map<int, double> coeffs;
  Relation relation = Relation::Le;
  double rhs = 0.0;
};

/// Minimization program. Each variable is either x >= 0 or free.
struct LinearProgram {
  int num_vars = 0;
  std::vector<bool> var_lower_bounded;
  std::vector<LpConstraint> constraints;
  std::map<int, double> objective;

  /// Appends a variable and returns its index.
  int add_var(bool nonnegative);
  void add_constraint(std::map<int, double> coeffs, Relation relation, double rhs);
  /// Throws InputError on out-of-range indices or non-finite numbers.
  void validate() const;
};

enum class LpStatus { Optimal, Infeasible, Unbounded };

std::string to_string(LpStatus status);

struct LpSolution {
  LpStatus status = LpStatus::Infeasible;
  std::vector<double> values;
  double objective_value = 0.0;
  /// Row multipliers y with c_j - y^T A_j >= 0 for x_j >= 0 and = 0 for free
  /// x_j; y_r <= 0 on LE rows. Only meaningful when optimal.
  std::vector<double> duals;
  int iterations = 0;
};

struct SimplexOptions {
  double pivot_tol = 1e-9;
  double feasibility_tol = 1e-7;
  double optimality_tol = 1e-9;
  /// Upper bound on tableau rows * columns.
  std::size_t max_tableau_cells = std::size_t{60} * 1000 * 1000;
  /// When set, the initial and final tableaus are written here.
  std::ostream* dump = nullptr;
};

/// Two-phase primal simplex on a dense tableau with Bland's rule.
LpSolution solve(const LinearProgram& lp, const SimplexOptions& opts = {});

/// Same program, solved by running the primal simplex on its dual after
/// substituting out nonnegative columns that occur in a single equality row.
/// Much cheaper when the program has far more rows than columns.
LpSolution solve_via_dual(const LinearProgram& lp, const SimplexOptions& opts = {});

/// Plain-text listing of a program, one row per line.
std::string to_text(const LinearProgram& lp);

}  // namespace adbound
