#include "adbound/decompose.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <set>

#include "adbound/error.hpp"

namespace adbound {

std::string to_string(Direction d) { return d == Direction::Upper ? "upper" : "lower"; }

void DecomposeConstants::validate() const {
  if (!(coeff_floor > 0.0 && coeff_floor < 1.0)) throw ConfigError("coefficient floor must lie in (0, 1)");
  if (!(log_base > 1.0)) throw ConfigError("log base must exceed 1");
  if (!std::isfinite(z)) throw ConfigError("Z must be finite");
}

void DecompositionRequest::validate() const {
  if (cliques.empty()) throw InputError("decomposition needs at least one clique");
  std::set<VariableId> covered;
  for (const auto& c : cliques) {
    if (c.empty()) throw InputError("empty clique in decomposition request");
    for (VariableId v : c) {
      if (!lambda.mentions(v)) throw InputError("clique variable " + std::to_string(v) + " not in lambda's scope");
      covered.insert(v);
    }
  }
  if (covered.size() != lambda.scope().size()) throw InputError("cliques do not cover lambda's scope");
}

namespace {

// Shapes and the lambda-cell -> clique-cell maps shared by both programs.
void fill_layout(const DecompositionRequest& req, DecompositionLp& out) {
  const Factor& lam = req.lambda;
  for (const auto& c : req.cliques) {
    std::vector<int> cards;
    for (VariableId v : c) cards.push_back(lam.card_of(v));
    out.shapes.push_back(Factor::filled(c, cards, 0.0));
  }
  out.cell_map.assign(req.cliques.size(), std::vector<std::size_t>(lam.size()));
  std::vector<int> sub;
  for (std::size_t x = 0; x < lam.size(); ++x) {
    auto a = lam.assignment_of(x);
    for (std::size_t i = 0; i < req.cliques.size(); ++i) {
      sub.clear();
      for (VariableId v : req.cliques[i]) sub.push_back(a[static_cast<std::size_t>(lam.position(v))]);
      out.cell_map[i][x] = linear_index(out.shapes[i].cards(), sub);
    }
  }
  for (const auto& s : out.shapes) {
    std::vector<int> vars;
    for (std::size_t k = 0; k < s.size(); ++k) vars.push_back(out.lp.add_var(false));
    out.piece_vars.push_back(std::move(vars));
  }
}

std::map<int, double> piece_terms(const DecompositionLp& d, std::size_t x) {
  std::map<int, double> t;
  for (std::size_t i = 0; i < d.piece_vars.size(); ++i) t[d.piece_vars[i][d.cell_map[i][x]]] += 1.0;
  return t;
}

LpSolution run_lp(const LinearProgram& lp, const DecomposeOptions& opts) {
  if (opts.lp_dump) *opts.lp_dump << to_text(lp);
  LpSolution sol = opts.dual_route ? solve_via_dual(lp, opts.simplex) : solve(lp, opts.simplex);
  if (sol.status != LpStatus::Optimal) {
    throw InternalError("decomposition program reported " + to_string(sol.status));
  }
  return sol;
}

// Per-cell sum of piece values read from the LP solution.
std::vector<std::vector<double>> piece_values(const DecompositionLp& d, const LpSolution& sol) {
  std::vector<std::vector<double>> vals;
  for (const auto& vars : d.piece_vars) {
    std::vector<double> v;
    for (int j : vars) v.push_back(sol.values[static_cast<std::size_t>(j)]);
    vals.push_back(std::move(v));
  }
  return vals;
}

double cell_sum(const DecompositionLp& d, const std::vector<std::vector<double>>& vals, std::size_t x) {
  double s = 0.0;
  for (std::size_t i = 0; i < vals.size(); ++i) s += vals[i][d.cell_map[i][x]];
  return s;
}

// Moves every entry of the first piece so that the per-cell sums sit on the
// requested side of `target` for all cells flagged in `active`.
void enforce_side(const DecompositionLp& d, std::vector<std::vector<double>>& vals, const std::vector<double>& target,
                  const std::vector<bool>& active, Direction dir) {
  double shift = 0.0;
  for (std::size_t x = 0; x < target.size(); ++x) {
    if (!active[x]) continue;
    double gap = cell_sum(d, vals, x) - target[x];
    if (dir == Direction::Upper) shift = std::max(shift, -gap);
    else shift = std::max(shift, gap);
  }
  if (shift <= 0.0) return;
  for (double& v : vals[0]) v += dir == Direction::Upper ? shift : -shift;
}

}  // namespace

DecompositionLp build_product_lp(const DecompositionRequest& req, const DecomposeConstants& consts) {
  req.validate();
  consts.validate();
  const Factor& lam = req.lambda;
  for (double v : lam.values()) {
    if (v < 0.0) throw InputError("product decomposition needs a non-negative lambda");
  }
  DecompositionLp out;
  fill_layout(req, out);
  double total = 0.0;
  for (double v : lam.values()) total += v;
  const double log_base = std::log(consts.log_base);
  for (std::size_t x = 0; x < lam.size(); ++x) {
    int lr = out.lp.add_var(true);
    out.error_vars.push_back(lr);
    double w = total > 0.0 ? std::max(consts.coeff_floor, lam[x] / total) : consts.coeff_floor;
    out.weights.push_back(w);
    out.lp.objective[lr] = w;
    auto terms = piece_terms(out, x);
    if (lam[x] > 0.0) {
      terms[lr] = req.direction == Direction::Upper ? -1.0 : 1.0;
      out.lp.add_constraint(std::move(terms), Relation::Eq, std::log(lam[x]) / log_base);
    } else if (req.direction == Direction::Upper) {
      terms[lr] = -1.0;
      out.lp.add_constraint(std::move(terms), Relation::Le, consts.z);
    } else {
      out.lp.add_constraint(std::move(terms), Relation::Le, consts.z);
    }
  }
  return out;
}

DecompositionLp build_sum_lp(const DecompositionRequest& req) {
  req.validate();
  const Factor& lam = req.lambda;
  DecompositionLp out;
  fill_layout(req, out);
  for (std::size_t x = 0; x < lam.size(); ++x) {
    int eps = out.lp.add_var(true);
    out.error_vars.push_back(eps);
    out.weights.push_back(1.0);
    out.lp.objective[eps] = 1.0;
    auto terms = piece_terms(out, x);
    terms[eps] = req.direction == Direction::Upper ? -1.0 : 1.0;
    out.lp.add_constraint(std::move(terms), Relation::Eq, lam[x]);
  }
  return out;
}

Decomposition product_decompose(const DecompositionRequest& req, const DecomposeOptions& opts) {
  if (req.combine_op != CombineOp::Product) throw InputError("product_decompose needs a product request");
  req.validate();
  const Factor& lam = req.lambda;
  Decomposition result;
  bool all_zero = std::all_of(lam.values().begin(), lam.values().end(), [](double v) { return v == 0.0; });
  if (all_zero) {
    for (const auto& c : req.cliques) {
      std::vector<int> cards;
      for (VariableId v : c) cards.push_back(lam.card_of(v));
      result.factors.push_back(Factor::filled(c, cards, 0.0));
    }
    return result;
  }

  DecompositionLp prog = build_product_lp(req, opts.constants);
  LpSolution sol = run_lp(prog.lp, opts);
  result.lp_objective = sol.objective_value;
  result.lp_iterations = sol.iterations;
  result.solved_lp = true;

  const double log_base = std::log(opts.constants.log_base);
  std::vector<double> target(lam.size(), 0.0);
  std::vector<bool> positive(lam.size(), false);
  for (std::size_t x = 0; x < lam.size(); ++x) {
    positive[x] = lam[x] > 0.0;
    if (positive[x]) target[x] = std::log(lam[x]) / log_base;
  }
  auto logs = piece_values(prog, sol);
  // The solver meets its rows within tolerance; pin the bound side exactly.
  enforce_side(prog, logs, target, positive, req.direction);
  if (req.direction == Direction::Lower) {
    std::vector<double> ztarget(lam.size(), opts.constants.z);
    std::vector<bool> zero_cells(lam.size());
    for (std::size_t x = 0; x < lam.size(); ++x) zero_cells[x] = !positive[x];
    enforce_side(prog, logs, ztarget, zero_cells, Direction::Lower);
  }

  std::vector<std::vector<double>> vals(logs.size());
  for (std::size_t i = 0; i < logs.size(); ++i)
    for (double l : logs[i]) vals[i].push_back(std::pow(opts.constants.log_base, l));

  if (req.direction == Direction::Lower) {
    // Zero cells: zero the smallest participating entry so the product is exactly 0.
    for (std::size_t x = 0; x < lam.size(); ++x) {
      if (positive[x]) continue;
      std::size_t best = 0;
      for (std::size_t i = 1; i < vals.size(); ++i)
        if (vals[i][prog.cell_map[i][x]] < vals[best][prog.cell_map[best][x]]) best = i;
      vals[best][prog.cell_map[best][x]] = 0.0;
    }
  }
  for (std::size_t i = 0; i < vals.size(); ++i) {
    result.factors.emplace_back(prog.shapes[i].scope(), prog.shapes[i].cards(), std::move(vals[i]));
  }
  return result;
}

Decomposition sum_decompose(const DecompositionRequest& req, const DecomposeOptions& opts) {
  if (req.combine_op != CombineOp::Sum) throw InputError("sum_decompose needs a sum request");
  DecompositionLp prog = build_sum_lp(req);
  LpSolution sol = run_lp(prog.lp, opts);
  Decomposition result;
  result.lp_objective = sol.objective_value;
  result.lp_iterations = sol.iterations;
  result.solved_lp = true;
  auto vals = piece_values(prog, sol);
  std::vector<bool> all(req.lambda.size(), true);
  enforce_side(prog, vals, req.lambda.values(), all, req.direction);
  for (std::size_t i = 0; i < vals.size(); ++i) {
    result.factors.emplace_back(prog.shapes[i].scope(), prog.shapes[i].cards(), std::move(vals[i]));
  }
  return result;
}

Decomposition decompose(const DecompositionRequest& req, const DecomposeOptions& opts) {
  return req.combine_op == CombineOp::Product ? product_decompose(req, opts) : sum_decompose(req, opts);
}

Factor recombine(const std::vector<Factor>& pieces, const Factor& lambda, CombineOp op) {
  Factor acc = Factor::filled(lambda.scope(), lambda.cards(), combine_identity(op));
  for (const auto& p : pieces) acc = combine(acc, p, op);
  return acc;
}

}  // namespace adbound
