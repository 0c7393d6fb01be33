#pragma once

#include "adbound/model.hpp"

namespace fixtures {

using namespace adbound;

// Six binary variables A..F (ids 0..5) with edges A->B, A->C, B->D, E->D,
// C->E, C->F, D->F. Its moral graph has width 2; eliminating F is exact and
// eliminating A next would join B and C into a four-clique.
inline constexpr VariableId A = 0, B = 1, C = 2, D = 3, E = 4, F = 5;

inline BeliefNetwork six_node_network() {
  Domains dom(6, 2);
  std::vector<std::vector<VariableId>> parents{{}, {A}, {A}, {B, E}, {C}, {C, D}};
  std::vector<Factor> cpts{
      Factor({A}, {2}, {0.6, 0.4}),
      Factor({A, B}, {2, 2}, {0.3, 0.7, 0.5, 0.5}),
      Factor({A, C}, {2, 2}, {0.4, 0.6, 0.8, 0.2}),
      Factor({B, E, D}, {2, 2, 2}, {0.9, 0.1, 0.35, 0.65, 0.2, 0.8, 0.05, 0.95}),
      Factor({C, E}, {2, 2}, {0.25, 0.75, 0.7, 0.3}),
      Factor({C, D, F}, {2, 2, 2}, {0.5, 0.5, 0.1, 0.9, 0.6, 0.4, 0.85, 0.15}),
  };
  return BeliefNetwork(dom, parents, cpts);
}

// The two-variable table used in the worked decomposition example, scope (B, C).
inline Factor worked_lambda() { return Factor({1, 2}, {2, 2}, {0.29, 0.15, 0.33, 0.23}); }

}  // namespace fixtures
