#include "adbound/minibuckets.hpp"

#include <set>

#include "adbound/elimination.hpp"
#include "adbound/error.hpp"

namespace adbound {

std::string to_string(MbMode mode) {
  switch (mode) {
    case MbMode::Upper: return "upper";
    case MbMode::Lower: return "lower";
    case MbMode::Estimate: return "estimate";
  }
  return "?";
}

std::vector<std::vector<Factor>> mb_partition(std::span<const Factor> bucket, int i_bound) {
  std::vector<std::vector<Factor>> parts;
  std::vector<std::set<VariableId>> scopes;
  for (const auto& f : bucket) {
    if (f.arity() > i_bound) {
      throw ConfigError("factor of arity " + std::to_string(f.arity()) + " exceeds mini-bucket i-bound " +
                        std::to_string(i_bound));
    }
    bool placed = false;
    for (std::size_t p = 0; p < parts.size() && !placed; ++p) {
      std::set<VariableId> joined = scopes[p];
      joined.insert(f.scope().begin(), f.scope().end());
      if (static_cast<int>(joined.size()) <= i_bound) {
        parts[p].push_back(f);
        scopes[p] = std::move(joined);
        placed = true;
      }
    }
    if (!placed) {
      parts.push_back({f});
      scopes.emplace_back(f.scope().begin(), f.scope().end());
    }
  }
  return parts;
}

MbResult mb_run(std::span<const Factor> factors, const Domains& domains, const Task& task, const MbConfig& cfg) {
  task.validate(domains);
  if (cfg.i_bound < 1) throw ConfigError("mini-bucket i-bound must be at least 1");
  std::vector<Factor> current, constants;
  for (const auto& f : factors) {
    check_factor_domains(f, domains);
    if (f.arity() > cfg.i_bound) throw ConfigError("input factor wider than the mini-bucket i-bound");
    for (VariableId u : f.scope()) {
      if (task.evidence.count(u)) throw InputError("evidence must be restricted before running mini-buckets");
    }
    (f.is_constant() ? constants : current).push_back(f);
  }

  MarginalOp aux = MarginalOp::Max;
  if (cfg.mode == MbMode::Lower) aux = MarginalOp::Min;
  if (cfg.mode == MbMode::Estimate) aux = MarginalOp::Mean;

  MbResult out;
  out.mode = cfg.mode;
  out.order = greedy_order(current, domains, task);
  for (VariableId v : out.order) {
    std::vector<Factor> bucket, rest;
    for (auto& f : current) (f.mentions(v) ? bucket : rest).push_back(std::move(f));
    current = std::move(rest);
    if (bucket.empty()) {
      if (task.marginal == MarginalOp::Sum) {
        constants.push_back(Factor::constant(static_cast<double>(domains[static_cast<std::size_t>(v)])));
      }
      continue;
    }
    auto parts = mb_partition(bucket, cfg.i_bound);
    if (parts.size() > 1) ++out.split_buckets;
    for (std::size_t p = 0; p < parts.size(); ++p) {
      Factor lam = marginalize_out(combine_all(parts[p], task.combine), v, p == 0 ? task.marginal : aux);
      (lam.is_constant() ? constants : current).push_back(std::move(lam));
    }
  }
  current.insert(current.end(), constants.begin(), constants.end());
  out.values = combine_onto_query(current, task, domains).values();
  return out;
}

}  // namespace adbound
