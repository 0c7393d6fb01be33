#include "adbound/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "adbound/error.hpp"

namespace adbound {

Factor brute_force(std::span<const Factor> factors, const Domains& domains, const Task& task,
                   const OracleOptions& opts) {
  task.validate(domains);
  const auto n = domains.size();
  std::vector<VariableId> free_vars;
  std::size_t total = 1;
  for (std::size_t v = 0; v < n; ++v) {
    if (task.evidence.count(static_cast<VariableId>(v))) continue;
    free_vars.push_back(static_cast<VariableId>(v));
    total *= static_cast<std::size_t>(domains[v]);
    if (total > opts.max_assignments) throw ResourceError("brute force enumeration exceeds the assignment cap");
  }
  for (const auto& f : factors) check_factor_domains(f, domains);

  std::vector<int> x(n, 0);
  for (const auto& [var, val] : task.evidence) x[static_cast<std::size_t>(var)] = val;

  const int qcard = domains[static_cast<std::size_t>(task.query)];
  std::vector<double> result(static_cast<std::size_t>(qcard), 0.0);
  std::vector<bool> touched(static_cast<std::size_t>(qcard), false);
  std::vector<int> sub;
  for (std::size_t it = 0; it < total; ++it) {
    double value = combine_identity(task.combine);
    for (const auto& f : factors) {
      sub.clear();
      for (VariableId u : f.scope()) sub.push_back(x[static_cast<std::size_t>(u)]);
      double fv = f.at(sub);
      value = task.combine == CombineOp::Product ? value * fv : value + fv;
    }
    auto q = static_cast<std::size_t>(x[static_cast<std::size_t>(task.query)]);
    if (!touched[q]) {
      result[q] = value;
      touched[q] = true;
    } else {
      switch (task.marginal) {
        case MarginalOp::Sum: result[q] += value; break;
        case MarginalOp::Max: result[q] = std::max(result[q], value); break;
        case MarginalOp::Min: result[q] = std::min(result[q], value); break;
        case MarginalOp::Mean: throw ConfigError("mean is not a query operator");
      }
    }
    for (std::size_t k = free_vars.size(); k-- > 0;) {
      auto v = static_cast<std::size_t>(free_vars[k]);
      if (++x[v] < domains[v]) break;
      x[v] = 0;
    }
  }
  return Factor({task.query}, {qcard}, std::move(result));
}

void CostModelParams::validate() const {
  if (levels < 2) throw ConfigError("cost model needs at least 2 levels");
  if (!(max_value > 0.0)) throw ConfigError("cost model maximum must be positive");
  if (samples < 1) throw ConfigError("cost model needs at least one sample");
}

double CostModelParams::mean_level() const {
  return max_value * static_cast<double>(levels + 1) / (2.0 * static_cast<double>(levels));
}

CostEstimate empirical_cost(const Factor& lambda, const Factor& lambda_prime, MarginalOp op,
                            const CostModelParams& params) {
  params.validate();
  if (op != MarginalOp::Sum && op != MarginalOp::Max) throw ConfigError("cost model supports sum and max only");
  if (lambda.scope() != lambda_prime.scope() || lambda.cards() != lambda_prime.cards()) {
    throw InputError("lambda and its bound must share a scope");
  }
  std::mt19937_64 rng(params.seed);
  std::uniform_int_distribution<int> level(1, params.levels);
  const double step = params.max_value / static_cast<double>(params.levels);
  const std::size_t cells = lambda.size();
  std::vector<double> f(cells);

  double sum = 0.0, sum_sq = 0.0;
  for (std::size_t s = 0; s < params.samples; ++s) {
    for (double& v : f) v = step * level(rng);
    double a = 0.0, b = 0.0;
    for (std::size_t x = 0; x < cells; ++x) {
      double pa = f[x] * lambda_prime[x];
      double pb = f[x] * lambda[x];
      if (op == MarginalOp::Sum) {
        a += pa;
        b += pb;
      } else {
        a = x == 0 ? pa : std::max(a, pa);
        b = x == 0 ? pb : std::max(b, pb);
      }
    }
    double c = std::abs(a - b);
    sum += c;
    sum_sq += c * c;
  }
  const auto n = static_cast<double>(params.samples);
  CostEstimate out;
  out.mean = sum / n;
  double var = n > 1 ? std::max(0.0, (sum_sq - n * out.mean * out.mean) / (n - 1)) : 0.0;
  out.std_err = std::sqrt(var / n);
  return out;
}

}  // namespace adbound
