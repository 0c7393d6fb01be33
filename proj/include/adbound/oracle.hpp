#pragma once

#include <cstddef>
#include <cstdint>
#include <span>

#include "adbound/model.hpp"

namespace adbound {

struct OracleOptions {
  /// Largest number of full assignments brute_force will enumerate.
  std::size_t max_assignments = 10'000'000;
};

/// Exact query answer by enumerating every assignment of the non-evidence
/// variables. Evidence is honored by fixing the evidenced variables, so the
/// factors may be given with or without the evidence sliced out.
Factor brute_force(std::span<const Factor> factors, const Domains& domains, const Task& task,
                   const OracleOptions& opts = {});

/// Random-remainder model for the expected-cost measure: every F(x) is drawn
/// i.i.d. from the levels {M/N, 2M/N, ..., M}.
struct CostModelParams {
  int levels = 10;
  double max_value = 1.0;
  std::size_t samples = 100'000;
  std::uint64_t seed = 1;

  void validate() const;
  /// E[F] = M (N + 1) / (2 N).
  double mean_level() const;
};

struct CostEstimate {
  double mean = 0.0;
  double std_err = 0.0;
};

/// Monte Carlo estimate of E_F |reduce_x F(x) lambda'(x) - reduce_x F(x) lambda(x)|
/// with reduce = sum or max.
CostEstimate empirical_cost(const Factor& lambda, const Factor& lambda_prime, MarginalOp op,
                            const CostModelParams& params);

}  // namespace adbound
