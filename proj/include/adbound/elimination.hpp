#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "adbound/model.hpp"

namespace adbound {

struct EliminationOptions {
  /// Largest intermediate table (in cells) exact elimination may build.
  std::size_t max_factor_cells = std::size_t{1} << 25;
};

/// Replaces the factors mentioning `v` by lambda = marginal_v(combine(those)).
///
/// A variable mentioned by no factor contributes a constant |D_v| under SUM
/// and nothing under MAX or MIN.
std::vector<Factor> eliminate_variable(std::span<const Factor> factors, VariableId v, const Task& task,
                                       const Domains& domains, const EliminationOptions& opts = {});

/// Combines the leftover factors (query-only or constant) into a unary factor on the query.
Factor combine_onto_query(std::span<const Factor> factors, const Task& task, const Domains& domains);

/// Greedy fewest-fill order over all non-query, non-evidence variables.
std::vector<VariableId> greedy_order(std::span<const Factor> factors, const Domains& domains, const Task& task);

/// Exact variable elimination. `factors` must already have the evidence
/// sliced out; the result is a unary factor on the query.
Factor variable_elimination(std::span<const Factor> factors, const Domains& domains, const Task& task,
                            std::optional<std::vector<VariableId>> order = std::nullopt,
                            const EliminationOptions& opts = {});

}  // namespace adbound
