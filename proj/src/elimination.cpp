#include "adbound/elimination.hpp"

#include <algorithm>
#include <set>

#include "adbound/error.hpp"
#include "adbound/graph.hpp"

namespace adbound {

std::vector<Factor> eliminate_variable(std::span<const Factor> factors, VariableId v, const Task& task,
                                       const Domains& domains, const EliminationOptions& opts) {
  if (v == task.query) throw InputError("cannot eliminate the query variable");
  if (task.evidence.count(v)) throw InputError("cannot eliminate an evidenced variable");
  std::vector<Factor> rest;
  std::vector<Factor> bucket;
  std::set<VariableId> scope;
  for (const auto& f : factors) {
    if (f.mentions(v)) {
      bucket.push_back(f);
      scope.insert(f.scope().begin(), f.scope().end());
    } else {
      rest.push_back(f);
    }
  }
  if (bucket.empty()) {
    if (task.marginal == MarginalOp::Sum) {
      rest.push_back(Factor::constant(static_cast<double>(domains.at(static_cast<std::size_t>(v)))));
    }
    return rest;
  }
  std::size_t cells = 1;
  for (VariableId u : scope) cells *= static_cast<std::size_t>(domains.at(static_cast<std::size_t>(u)));
  if (cells > opts.max_factor_cells) {
    throw ResourceError("eliminating variable " + std::to_string(v) + " needs a table of " + std::to_string(cells) +
                        " cells");
  }
  rest.push_back(marginalize_out(combine_all(bucket, task.combine), v, task.marginal));
  return rest;
}

Factor combine_onto_query(std::span<const Factor> factors, const Task& task, const Domains& domains) {
  const int card = domains.at(static_cast<std::size_t>(task.query));
  Factor acc = Factor::filled({task.query}, {card}, combine_identity(task.combine));
  for (const auto& f : factors) {
    for (VariableId u : f.scope()) {
      if (u != task.query) throw InternalError("leftover factor mentions non-query variable " + std::to_string(u));
    }
    acc = combine(acc, f, task.combine);
  }
  return acc;
}

std::vector<VariableId> greedy_order(std::span<const Factor> factors, const Domains& domains, const Task& task) {
  InteractionGraph g = interaction_graph(factors, static_cast<int>(domains.size()));
  for (const auto& [var, val] : task.evidence) {
    if (g.present(var)) g.remove_vertex(var);
  }
  std::vector<VariableId> order;
  while (auto v = choose_elim_var(g, task.query)) {
    order.push_back(*v);
    eliminate_node(g, *v);
  }
  return order;
}

Factor variable_elimination(std::span<const Factor> factors, const Domains& domains, const Task& task,
                            std::optional<std::vector<VariableId>> order, const EliminationOptions& opts) {
  task.validate(domains);
  for (const auto& f : factors) {
    check_factor_domains(f, domains);
    for (VariableId u : f.scope()) {
      if (task.evidence.count(u)) throw InputError("evidence must be restricted before elimination");
    }
  }
  std::vector<VariableId> ord = order ? *order : greedy_order(factors, domains, task);
  {
    std::vector<VariableId> want;
    for (VariableId v = 0; v < static_cast<VariableId>(domains.size()); ++v)
      if (v != task.query && !task.evidence.count(v)) want.push_back(v);
    std::vector<VariableId> have = ord;
    std::sort(have.begin(), have.end());
    if (have != want) throw InputError("elimination order must cover every non-query, non-evidence variable once");
  }
  std::vector<Factor> current(factors.begin(), factors.end());
  for (VariableId v : ord) current = eliminate_variable(current, v, task, domains, opts);
  return combine_onto_query(current, task, domains);
}

}  // namespace adbound
