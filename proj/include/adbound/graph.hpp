#pragma once

#include <optional>
#include <set>
#include <span>
#include <utility>
#include <vector>

#include "adbound/model.hpp"

namespace adbound {

using Edge = std::pair<VariableId, VariableId>;

/// Undirected simple graph over variables [0, n). Vertices can be removed;
/// removed vertices keep their id but have no edges and are skipped everywhere.
class InteractionGraph {
 public:
  InteractionGraph() = default;
  explicit InteractionGraph(int n);

  int num_slots() const { return static_cast<int>(adj_.size()); }
  int num_present() const { return present_count_; }
  bool present(VariableId v) const;
  std::vector<VariableId> vertices() const;

  const std::set<VariableId>& neighbors(VariableId v) const { return adj_.at(static_cast<std::size_t>(v)); }
  int degree(VariableId v) const { return static_cast<int>(neighbors(v).size()); }
  bool has_edge(VariableId u, VariableId v) const;
  std::vector<Edge> edges() const;
  std::size_t num_edges() const;

  /// Returns false if the edge already existed.
  bool add_edge(VariableId u, VariableId v);
  void remove_edge(VariableId u, VariableId v);
  /// Deletes `v` and its incident edges without connecting its neighbors.
  void remove_vertex(VariableId v);

  /// Number of neighbor pairs of `v` that are not adjacent.
  int fill_count(VariableId v) const;

  bool operator==(const InteractionGraph& other) const = default;

 private:
  void check(VariableId v) const;

  std::vector<std::set<VariableId>> adj_;
  std::vector<bool> present_;
  int present_count_ = 0;
};

/// Edge (u, v) iff some factor scope contains both.
InteractionGraph interaction_graph(std::span<const Factor> factors, int n);

/// Moralized DAG of a belief network.
InteractionGraph moral_graph(const BeliefNetwork& net);

/// Greedy width: repeatedly delete a minimum-degree vertex (smallest id on
/// ties) without adding edges; the largest degree seen at deletion.
/// A `held_back` vertex is only deleted once it is the last one left, so a
/// result <= i promises a vertex other than it with at most i neighbors.
int width(const InteractionGraph& g, std::optional<VariableId> held_back = std::nullopt);

/// Non-query vertex with the fewest unconnected neighbor pairs, ties broken by
/// degree then id. Vertices with more than `max_degree` neighbors are skipped
/// when a limit is given. Returns nullopt when no candidate exists.
std::optional<VariableId> choose_elim_var(const InteractionGraph& g, VariableId query,
                                          std::optional<int> max_degree = std::nullopt);

/// Removes `v`, pairwise-connects its former neighbors and returns the edges
/// that were added (sorted, u < v).
std::vector<Edge> eliminate_node(InteractionGraph& g, VariableId v);

/// Deletes edges from `new_edges` (highest endpoint-degree sum first, smallest
/// pair on ties, degrees refreshed after each deletion) until width(g) <= i.
/// Returns the deleted edges in deletion order. `held_back` is passed to width().
std::vector<Edge> prune_new_edges(InteractionGraph& g, std::span<const Edge> new_edges, int i,
                                  std::optional<VariableId> held_back = std::nullopt);

/// Maximal cliques of the subgraph induced by `nodes`, each sorted, list sorted.
std::vector<std::vector<VariableId>> maximal_cliques(const InteractionGraph& g, std::span<const VariableId> nodes);

}  // namespace adbound
