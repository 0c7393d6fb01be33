#include "adbound/engine.hpp"

#include <algorithm>
#include <cmath>

#include "adbound/elimination.hpp"
#include "adbound/error.hpp"
#include "adbound/graph.hpp"

namespace adbound {

BoundValue ad_run(std::span<const Factor> factors, const Domains& domains, const Task& task, const AdConfig& cfg) {
  task.validate(domains);
  cfg.decompose.constants.validate();
  if (cfg.i_bound < 1) throw ConfigError("i-bound must be at least 1");
  const int n = static_cast<int>(domains.size());

  std::vector<Factor> current;
  std::vector<Factor> constants;
  for (const auto& f : factors) {
    check_factor_domains(f, domains);
    for (VariableId u : f.scope()) {
      if (task.evidence.count(u)) throw InputError("evidence must be restricted before running AD");
    }
    if (f.arity() > cfg.i_bound + 1) {
      throw ConfigError("factor of arity " + std::to_string(f.arity()) + " exceeds i-bound + 1");
    }
    (f.is_constant() ? constants : current).push_back(f);
  }

  InteractionGraph g = interaction_graph(current, n);
  for (const auto& [var, val] : task.evidence) g.remove_vertex(var);
  if (int w = width(g); w > cfg.i_bound) {
    throw ConfigError("interaction graph width " + std::to_string(w) + " exceeds i-bound " + std::to_string(cfg.i_bound));
  }
  // The query is never eliminated, so every check below keeps it for last.
  if (width(g, task.query) > cfg.i_bound) {
    throw ConfigError("every non-query variable has more than " + std::to_string(cfg.i_bound) + " neighbors");
  }

  BoundValue out;
  out.direction = cfg.direction;
  AdStats& stats = out.stats;

  while (g.num_present() > 1) {
    auto chosen = choose_elim_var(g, task.query, cfg.i_bound);
    if (!chosen) throw InternalError("no variable with at most i-bound neighbors is left to eliminate");
    const VariableId v = *chosen;
    stats.order.push_back(v);

    std::vector<Factor> bucket, rest;
    for (auto& f : current) (f.mentions(v) ? bucket : rest).push_back(std::move(f));
    current = std::move(rest);

    std::vector<VariableId> neighbors(g.neighbors(v).begin(), g.neighbors(v).end());
    auto new_edges = eliminate_node(g, v);

    if (bucket.empty()) {
      if (task.marginal == MarginalOp::Sum) {
        constants.push_back(Factor::constant(static_cast<double>(domains[static_cast<std::size_t>(v)])));
      }
      continue;
    }
    Factor lambda = marginalize_out(combine_all(bucket, task.combine), v, task.marginal);
    stats.max_created_arity = std::max(stats.max_created_arity, lambda.arity());
    if (lambda.is_constant()) {
      constants.push_back(std::move(lambda));
      continue;
    }

    if (width(g, task.query) <= cfg.i_bound) {
      current.push_back(std::move(lambda));
      continue;
    }

    auto deleted = prune_new_edges(g, new_edges, cfg.i_bound, task.query);
    stats.deleted_edges += static_cast<int>(deleted.size());
    auto cliques = maximal_cliques(g, neighbors);
    {
      auto scope = lambda.scope();
      std::sort(scope.begin(), scope.end());
      if (scope != neighbors) throw InternalError("eliminated function's scope disagrees with the graph");
    }
    if (cliques.size() < 2) throw InternalError("width exceeded without any deletable new edge");

    DecompositionRequest req{std::move(lambda), std::move(cliques), cfg.direction, task.combine};
    Decomposition dec = decompose(req, cfg.decompose);
    ++stats.decompositions;
    stats.lp_iterations += dec.lp_iterations;
    for (auto& piece : dec.factors) {
      stats.max_created_arity = std::max(stats.max_created_arity, piece.arity());
      current.push_back(std::move(piece));
    }
  }

  current.insert(current.end(), constants.begin(), constants.end());
  out.values = combine_onto_query(current, task, domains).values();
  return out;
}

std::optional<ConditionalBounds> bound_conditional(std::span<const double> uppers, std::span<const double> lowers) {
  if (uppers.size() != lowers.size()) throw InputError("upper and lower bound lists differ in length");
  double sum_u = 0.0;
  for (std::size_t q = 0; q < uppers.size(); ++q) {
    if (lowers[q] < 0.0 || uppers[q] < lowers[q]) throw InputError("bounds must satisfy 0 <= lower <= upper");
    sum_u += uppers[q];
  }
  if (sum_u <= 0.0) return std::nullopt;
  ConditionalBounds out;
  for (std::size_t q = 0; q < uppers.size(); ++q) {
    double other_l = 0.0, other_u = 0.0;
    for (std::size_t r = 0; r < uppers.size(); ++r) {
      if (r == q) continue;
      other_l += lowers[r];
      other_u += uppers[r];
    }
    double hi_den = uppers[q] + other_l;
    double lo_den = lowers[q] + other_u;
    double hi = hi_den > 0.0 ? uppers[q] / hi_den : 1.0;
    double lo = lo_den > 0.0 ? lowers[q] / lo_den : 0.0;
    hi = std::clamp(hi, 0.0, 1.0);
    lo = std::clamp(lo, 0.0, hi);
    out.low.push_back(lo);
    out.high.push_back(hi);
  }
  return out;
}

double estimate(double upper, double lower, const Task& task) {
  if (task.combine == CombineOp::Sum) return 0.5 * (upper + lower);
  if (upper <= 0.0 || lower <= 0.0) return 0.0;
  return std::sqrt(upper * lower);
}

}  // namespace adbound
