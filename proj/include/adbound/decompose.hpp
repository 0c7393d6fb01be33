#pragma once

#include <iosfwd>
#include <vector>

#include "adbound/model.hpp"
#include "adbound/simplex.hpp"

namespace adbound {

enum class Direction { Upper, Lower };

std::string to_string(Direction d);

/// Numerical constants of the product decomposition.
struct DecomposeConstants {
  /// Stand-in for log(0).
  double z = -40.0;
  /// Smallest objective weight after normalizing the weights to sum 1.
  double coeff_floor = 1e-5;
  double log_base = 10.0;

  void validate() const;
};

/// Bound `lambda` by a combination of factors over the given clique scopes.
struct DecompositionRequest {
  Factor lambda;
  std::vector<std::vector<VariableId>> cliques;
  Direction direction = Direction::Upper;
  CombineOp combine_op = CombineOp::Product;

  /// Cliques must be non-empty subsets of lambda's scope that cover it.
  void validate() const;
};

struct DecomposeOptions {
  DecomposeConstants constants;
  SimplexOptions simplex;
  /// Solve through the dual program (fast for tall programs). The primal
  /// route is kept for cross-checking.
  bool dual_route = true;
  /// When set, every program is written here in plain text before solving.
  std::ostream* lp_dump = nullptr;
};

/// A built decomposition program and where its variables live.
struct DecompositionLp {
  LinearProgram lp;
  /// piece_vars[i][k]: LP variable of cell k of the factor on clique i
  /// (log-value for products, raw value for sums).
  std::vector<std::vector<int>> piece_vars;
  /// Per lambda cell: l_r for products, epsilon for sums.
  std::vector<int> error_vars;
  /// Per lambda cell: objective weight of its error variable.
  std::vector<double> weights;
  /// cell_map[i][x]: cell of clique i's table consistent with lambda cell x.
  std::vector<std::vector<std::size_t>> cell_map;
  /// Templates (scope, cards) of the resulting factors.
  std::vector<Factor> shapes;
};

struct Decomposition {
  std::vector<Factor> factors;
  /// Objective value reported by the LP solver (0 when no LP was needed).
  double lp_objective = 0.0;
  int lp_iterations = 0;
  bool solved_lp = false;
};

/// Log-space program: free log-values per clique cell, l_r >= 0 per lambda cell.
DecompositionLp build_product_lp(const DecompositionRequest& req, const DecomposeConstants& consts);

/// Raw-value program: free values per clique cell, epsilon >= 0 per lambda cell.
DecompositionLp build_sum_lp(const DecompositionRequest& req);

/// Factors whose product bounds lambda in the requested direction.
Decomposition product_decompose(const DecompositionRequest& req, const DecomposeOptions& opts = {});

/// Factors whose sum bounds lambda in the requested direction.
Decomposition sum_decompose(const DecompositionRequest& req, const DecomposeOptions& opts = {});

/// Dispatches on req.combine_op.
Decomposition decompose(const DecompositionRequest& req, const DecomposeOptions& opts = {});

/// Combination of the pieces re-expressed over lambda's scope.
Factor recombine(const std::vector<Factor>& pieces, const Factor& lambda, CombineOp op);

}  // namespace adbound
