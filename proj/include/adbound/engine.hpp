#pragma once

#include <optional>
#include <span>
#include <vector>

#include "adbound/decompose.hpp"
#include "adbound/model.hpp"

namespace adbound {

struct AdConfig {
  /// Most neighbors an eliminated variable may have.
  int i_bound = 2;
  Direction direction = Direction::Upper;
  DecomposeOptions decompose;
};

/// Bookkeeping of one run; used by tests and the benchmark report.
struct AdStats {
  std::vector<VariableId> order;
  int decompositions = 0;
  int deleted_edges = 0;
  int lp_iterations = 0;
  /// Largest scope of any factor created during the run.
  int max_created_arity = 0;
};

/// Per-query-value bound produced by one directional run.
struct BoundValue {
  std::vector<double> values;
  Direction direction = Direction::Upper;
  AdStats stats;
};

/// Width-bounded elimination that replaces oversized intermediate functions
/// by LP-fitted bounding decompositions. `factors` must already have the
/// evidence sliced out. Throws ConfigError if the initial interaction graph
/// is wider than cfg.i_bound or a factor has more than i_bound + 1 variables.
BoundValue ad_run(std::span<const Factor> factors, const Domains& domains, const Task& task, const AdConfig& cfg);

struct ConditionalBounds {
  std::vector<double> low;
  std::vector<double> high;
};

/// Bounds on P(q | e) from per-value bounds on the joint P(q, e).
/// Returns nullopt when every upper bound is zero (conditional undefined).
std::optional<ConditionalBounds> bound_conditional(std::span<const double> uppers, std::span<const double> lowers);

/// Point estimate from a bound pair: geometric mean for product tasks,
/// arithmetic mean for the sum (MAX-CSP) task.
double estimate(double upper, double lower, const Task& task);

}  // namespace adbound
