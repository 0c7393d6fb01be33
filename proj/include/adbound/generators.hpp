#pragma once

#include <cstdint>

#include "adbound/model.hpp"

namespace adbound {

/// Random network: `n_roots` parentless variables followed by `n_children`
/// variables, each with `n_parents` parents drawn without replacement from
/// the variables before it. CPT columns are uniform draws normalized to 1.
BeliefNetwork gen_random_network(int n_roots, int n_children, int n_parents, int cardinality, std::uint64_t seed);

/// Random binary constraints over uniformly drawn variable pairs; each marks
/// half of its value pairs as violated. With an odd number of cells a coin
/// flip picks the floor or the ceiling of the half.
CspProblem gen_random_maxcsp(int n_vars, int cardinality, int n_constraints, std::uint64_t seed);

}  // namespace adbound
