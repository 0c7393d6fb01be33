#pragma once

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace adbound {

/// Index of a variable in its owning problem.
using VariableId = int;

/// Cardinality of every variable, indexed by VariableId.
using Domains = std::vector<int>;

/// Observed value index per evidenced variable.
using Evidence = std::map<VariableId, int>;

enum class CombineOp { Product, Sum };

/// Projection operators. Mean is only used by the mini-bucket estimate mode.
enum class MarginalOp { Sum, Max, Min, Mean };

std::string to_string(CombineOp op);
std::string to_string(MarginalOp op);

/// Row-major offset of `assignment` in a table whose dimensions are `cards`
/// (last dimension varies fastest). Throws InputError on a bad value index.
std::size_t linear_index(std::span<const int> cards, std::span<const int> assignment);

/// Dense table over an ordered scope of distinct variables.
///
/// Values are stored row-major with the last scope variable varying fastest.
/// An empty scope holds a single constant.
class Factor {
 public:
  Factor() : values_{1.0} {}
  Factor(std::vector<VariableId> scope, std::vector<int> cards, std::vector<double> values);

  static Factor constant(double value);
  static Factor filled(std::vector<VariableId> scope, std::vector<int> cards, double value);

  const std::vector<VariableId>& scope() const { return scope_; }
  const std::vector<int>& cards() const { return cards_; }
  const std::vector<double>& values() const { return values_; }

  std::size_t size() const { return values_.size(); }
  int arity() const { return static_cast<int>(scope_.size()); }
  bool is_constant() const { return scope_.empty(); }

  /// Position of `v` in the scope, or -1.
  int position(VariableId v) const;
  bool mentions(VariableId v) const { return position(v) >= 0; }

  double operator[](std::size_t i) const { return values_[i]; }
  double at(std::span<const int> assignment) const;

  /// Assignment (value index per scope variable) of cell `offset`.
  std::vector<int> assignment_of(std::size_t offset) const;

  /// Cardinality of `v` inside this factor; v must be in scope.
  int card_of(VariableId v) const;

  bool operator==(const Factor& other) const = default;

 private:
  std::vector<VariableId> scope_;
  std::vector<int> cards_;
  std::vector<double> values_;
};

/// Keeps the consistent slice of `f`; evidenced variables leave the scope.
Factor restrict_evidence(const Factor& f, const Evidence& evidence);

/// Pointwise combination. Result scope is f's scope followed by g's new variables.
Factor combine(const Factor& f, const Factor& g, CombineOp op);

/// Combination of a list of factors; the empty list yields the identity constant.
Factor combine_all(std::span<const Factor> factors, CombineOp op);

/// Projects `v` out of `f` with `op`. Throws InputError if v is not in scope.
Factor marginalize_out(const Factor& f, VariableId v, MarginalOp op);

/// Reorders the scope of `f` to `order` (a permutation of its scope).
Factor reorder(const Factor& f, std::span<const VariableId> order);

/// Identity constant of a combination operator (1 for product, 0 for sum).
double combine_identity(CombineOp op);

/// Belief network: each variable owns one conditional probability table whose
/// scope is its parents followed by the variable itself.
class BeliefNetwork {
 public:
  BeliefNetwork() = default;
  /// Validates acyclicity, CPT scopes and normalization (tolerance 1e-9).
  BeliefNetwork(Domains domains, std::vector<std::vector<VariableId>> parents, std::vector<Factor> cpts);

  int num_vars() const { return static_cast<int>(domains_.size()); }
  const Domains& domains() const { return domains_; }
  const std::vector<std::vector<VariableId>>& parents() const { return parents_; }
  const std::vector<Factor>& cpts() const { return cpts_; }

  bool operator==(const BeliefNetwork& other) const = default;

 private:
  Domains domains_;
  std::vector<std::vector<VariableId>> parents_;
  std::vector<Factor> cpts_;
};

/// Constraint problem with 0/1 tables: 1 marks a violating assignment.
class CspProblem {
 public:
  CspProblem() = default;
  CspProblem(Domains domains, std::vector<Factor> constraints);

  int num_vars() const { return static_cast<int>(domains_.size()); }
  const Domains& domains() const { return domains_; }
  const std::vector<Factor>& constraints() const { return constraints_; }

  bool operator==(const CspProblem& other) const = default;

 private:
  Domains domains_;
  std::vector<Factor> constraints_;
};

enum class TaskKind { Belief, Mpe, MaxCsp };

/// Query semiring plus query variable and evidence.
struct Task {
  MarginalOp marginal = MarginalOp::Sum;
  CombineOp combine = CombineOp::Product;
  VariableId query = 0;
  Evidence evidence;

  static Task belief(VariableId query, Evidence evidence = {});
  static Task mpe(VariableId query, Evidence evidence = {});
  static Task max_csp(VariableId query, Evidence evidence = {});

  TaskKind kind() const;
  /// Throws ConfigError for an unsupported operator pair or an evidenced query,
  /// InputError for out-of-range indices.
  void validate(const Domains& domains) const;
};

std::string to_string(TaskKind kind);

/// Checks that every scope variable is within `domains` with matching cardinality.
void check_factor_domains(const Factor& f, const Domains& domains);

/// Applies restrict_evidence to every factor.
std::vector<Factor> restrict_all(std::span<const Factor> factors, const Evidence& evidence);

}  // namespace adbound
