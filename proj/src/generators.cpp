#include "adbound/generators.hpp"

#include <algorithm>
#include <numeric>
#include <random>

#include "adbound/error.hpp"

namespace adbound {

BeliefNetwork gen_random_network(int n_roots, int n_children, int n_parents, int cardinality, std::uint64_t seed) {
  if (n_roots < 1 || n_children < 0 || n_parents < 0 || cardinality < 2) {
    throw ConfigError("network generator needs roots >= 1, children >= 0, parents >= 0, cardinality >= 2");
  }
  if (n_children > 0 && n_parents > n_roots) {
    throw ConfigError("cannot draw " + std::to_string(n_parents) + " parents for the first child from " +
                      std::to_string(n_roots) + " roots");
  }
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const int n = n_roots + n_children;
  Domains domains(static_cast<std::size_t>(n), cardinality);
  std::vector<std::vector<VariableId>> parents(static_cast<std::size_t>(n));
  std::vector<Factor> cpts;
  for (VariableId v = 0; v < n; ++v) {
    auto& pa = parents[static_cast<std::size_t>(v)];
    if (v >= n_roots) {
      std::vector<VariableId> pool(static_cast<std::size_t>(v));
      std::iota(pool.begin(), pool.end(), 0);
      // Partial Fisher-Yates: the first n_parents entries are a uniform draw.
      for (int k = 0; k < n_parents; ++k) {
        std::uniform_int_distribution<std::size_t> pick(static_cast<std::size_t>(k), pool.size() - 1);
        std::swap(pool[static_cast<std::size_t>(k)], pool[pick(rng)]);
      }
      pa.assign(pool.begin(), pool.begin() + n_parents);
      std::sort(pa.begin(), pa.end());
    }
    std::vector<VariableId> scope = pa;
    scope.push_back(v);
    std::vector<int> cards(scope.size(), cardinality);
    std::size_t rows = 1;
    for (std::size_t k = 0; k < pa.size(); ++k) rows *= static_cast<std::size_t>(cardinality);
    std::vector<double> vals;
    vals.reserve(rows * static_cast<std::size_t>(cardinality));
    for (std::size_t r = 0; r < rows; ++r) {
      std::vector<double> col(static_cast<std::size_t>(cardinality));
      double total = 0.0;
      for (double& x : col) {
        x = 1.0 - unit(rng);  // (0, 1]
        total += x;
      }
      for (double x : col) vals.push_back(x / total);
    }
    cpts.emplace_back(std::move(scope), std::move(cards), std::move(vals));
  }
  return BeliefNetwork(std::move(domains), std::move(parents), std::move(cpts));
}

CspProblem gen_random_maxcsp(int n_vars, int cardinality, int n_constraints, std::uint64_t seed) {
  if (n_vars < 2) throw ConfigError("MAX-CSP generator needs at least 2 variables");
  if (cardinality < 2) throw ConfigError("MAX-CSP generator needs cardinality >= 2");
  if (n_constraints < 1) throw ConfigError("MAX-CSP generator needs at least one constraint");
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> var(0, n_vars - 1);
  std::bernoulli_distribution coin(0.5);
  const auto cells = static_cast<std::size_t>(cardinality * cardinality);
  std::vector<Factor> constraints;
  for (int c = 0; c < n_constraints; ++c) {
    int a = var(rng);
    int b = var(rng);
    while (b == a) b = var(rng);
    if (a > b) std::swap(a, b);
    std::size_t ones = cells / 2;
    if (cells % 2 == 1 && coin(rng)) ++ones;
    std::vector<std::size_t> idx(cells);
    std::iota(idx.begin(), idx.end(), 0);
    std::shuffle(idx.begin(), idx.end(), rng);
    std::vector<double> vals(cells, 0.0);
    for (std::size_t k = 0; k < ones; ++k) vals[idx[k]] = 1.0;
    constraints.emplace_back(std::vector<VariableId>{a, b}, std::vector<int>{cardinality, cardinality}, std::move(vals));
  }
  return CspProblem(Domains(static_cast<std::size_t>(n_vars), cardinality), std::move(constraints));
}

}  // namespace adbound
