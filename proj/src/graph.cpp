#include "adbound/graph.hpp"

#include <algorithm>
#include <limits>

#include "adbound/error.hpp"

namespace adbound {

InteractionGraph::InteractionGraph(int n)
    : adj_(static_cast<std::size_t>(n)), present_(static_cast<std::size_t>(n), true), present_count_(n) {}

void InteractionGraph::check(VariableId v) const {
  if (!present(v)) throw InputError("vertex " + std::to_string(v) + " not present in graph");
}

bool InteractionGraph::present(VariableId v) const {
  return v >= 0 && static_cast<std::size_t>(v) < present_.size() && present_[static_cast<std::size_t>(v)];
}

std::vector<VariableId> InteractionGraph::vertices() const {
  std::vector<VariableId> out;
  for (std::size_t v = 0; v < present_.size(); ++v)
    if (present_[v]) out.push_back(static_cast<VariableId>(v));
  return out;
}

bool InteractionGraph::has_edge(VariableId u, VariableId v) const {
  return present(u) && adj_[static_cast<std::size_t>(u)].count(v) > 0;
}

std::vector<Edge> InteractionGraph::edges() const {
  std::vector<Edge> out;
  for (std::size_t u = 0; u < adj_.size(); ++u)
    for (VariableId v : adj_[u])
      if (static_cast<VariableId>(u) < v) out.emplace_back(static_cast<VariableId>(u), v);
  return out;
}

std::size_t InteractionGraph::num_edges() const {
  std::size_t deg = 0;
  for (const auto& s : adj_) deg += s.size();
  return deg / 2;
}

bool InteractionGraph::add_edge(VariableId u, VariableId v) {
  check(u);
  check(v);
  if (u == v) throw InputError("self-loops are not allowed");
  bool fresh = adj_[static_cast<std::size_t>(u)].insert(v).second;
  adj_[static_cast<std::size_t>(v)].insert(u);
  return fresh;
}

void InteractionGraph::remove_edge(VariableId u, VariableId v) {
  check(u);
  check(v);
  adj_[static_cast<std::size_t>(u)].erase(v);
  adj_[static_cast<std::size_t>(v)].erase(u);
}

void InteractionGraph::remove_vertex(VariableId v) {
  check(v);
  for (VariableId u : adj_[static_cast<std::size_t>(v)]) adj_[static_cast<std::size_t>(u)].erase(v);
  adj_[static_cast<std::size_t>(v)].clear();
  present_[static_cast<std::size_t>(v)] = false;
  --present_count_;
}

int InteractionGraph::fill_count(VariableId v) const {
  check(v);
  const auto& nb = adj_[static_cast<std::size_t>(v)];
  int missing = 0;
  for (auto a = nb.begin(); a != nb.end(); ++a) {
    for (auto b = std::next(a); b != nb.end(); ++b) {
      if (!adj_[static_cast<std::size_t>(*a)].count(*b)) ++missing;
    }
  }
  return missing;
}

InteractionGraph interaction_graph(std::span<const Factor> factors, int n) {
  InteractionGraph g(n);
  for (const auto& f : factors) {
    const auto& s = f.scope();
    for (VariableId v : s) {
      if (v < 0 || v >= n) throw InputError("factor scope outside [0, n)");
    }
    for (std::size_t a = 0; a < s.size(); ++a)
      for (std::size_t b = a + 1; b < s.size(); ++b) g.add_edge(s[a], s[b]);
  }
  return g;
}

InteractionGraph moral_graph(const BeliefNetwork& net) { return interaction_graph(net.cpts(), net.num_vars()); }

int width(const InteractionGraph& g, std::optional<VariableId> held_back) {
  const int n = g.num_slots();
  std::vector<int> deg(static_cast<std::size_t>(n), -1);
  for (VariableId v : g.vertices()) deg[static_cast<std::size_t>(v)] = g.degree(v);
  int result = 0;
  for (int left = g.num_present(); left > 0; --left) {
    VariableId best = -1;
    for (int v = 0; v < n; ++v) {
      if (deg[static_cast<std::size_t>(v)] < 0) continue;
      if (held_back && v == *held_back && left > 1) continue;
      if (best < 0 || deg[static_cast<std::size_t>(v)] < deg[static_cast<std::size_t>(best)]) best = v;
    }
    result = std::max(result, deg[static_cast<std::size_t>(best)]);
    deg[static_cast<std::size_t>(best)] = -1;
    for (VariableId u : g.neighbors(best)) {
      if (deg[static_cast<std::size_t>(u)] >= 0) --deg[static_cast<std::size_t>(u)];
    }
  }
  return result;
}

std::optional<VariableId> choose_elim_var(const InteractionGraph& g, VariableId query, std::optional<int> max_degree) {
  std::optional<VariableId> best;
  int best_fill = std::numeric_limits<int>::max();
  int best_deg = std::numeric_limits<int>::max();
  for (VariableId v : g.vertices()) {
    if (v == query) continue;
    int d = g.degree(v);
    if (max_degree && d > *max_degree) continue;
    int fill = g.fill_count(v);
    if (fill < best_fill || (fill == best_fill && d < best_deg)) {
      best = v;
      best_fill = fill;
      best_deg = d;
    }
  }
  return best;
}

std::vector<Edge> eliminate_node(InteractionGraph& g, VariableId v) {
  if (!g.present(v)) throw InputError("cannot eliminate absent vertex " + std::to_string(v));
  std::vector<VariableId> nb(g.neighbors(v).begin(), g.neighbors(v).end());
  g.remove_vertex(v);
  std::vector<Edge> added;
  for (std::size_t a = 0; a < nb.size(); ++a)
    for (std::size_t b = a + 1; b < nb.size(); ++b)
      if (g.add_edge(nb[a], nb[b])) added.emplace_back(nb[a], nb[b]);
  return added;
}

std::vector<Edge> prune_new_edges(InteractionGraph& g, std::span<const Edge> new_edges, int i,
                                  std::optional<VariableId> held_back) {
  std::vector<Edge> remaining;
  for (auto [u, v] : new_edges) {
    if (!g.has_edge(u, v)) throw InputError("prune_new_edges: edge not in graph");
    remaining.emplace_back(std::min(u, v), std::max(u, v));
  }
  std::sort(remaining.begin(), remaining.end());
  std::vector<Edge> deleted;
  while (width(g, held_back) > i) {
    if (remaining.empty()) {
      throw InternalError("width still exceeds the bound after deleting every new edge");
    }
    auto best = remaining.begin();
    int best_sum = -1;
    for (auto it = remaining.begin(); it != remaining.end(); ++it) {
      int s = g.degree(it->first) + g.degree(it->second);
      if (s > best_sum) {
        best_sum = s;
        best = it;
      }
    }
    g.remove_edge(best->first, best->second);
    deleted.push_back(*best);
    remaining.erase(best);
  }
  return deleted;
}

namespace {

// Bron-Kerbosch with pivoting over the induced subgraph.
void bron_kerbosch(const InteractionGraph& g, std::vector<VariableId>& r, std::vector<VariableId> p,
                   std::vector<VariableId> x, std::vector<std::vector<VariableId>>& out) {
  if (p.empty() && x.empty()) {
    auto c = r;
    std::sort(c.begin(), c.end());
    out.push_back(std::move(c));
    return;
  }
  VariableId pivot = -1;
  std::size_t pivot_hits = 0;
  for (const auto* set : {&p, &x}) {
    for (VariableId u : *set) {
      std::size_t hits = 0;
      for (VariableId w : p) hits += g.has_edge(u, w) ? 1 : 0;
      if (pivot < 0 || hits > pivot_hits) {
        pivot = u;
        pivot_hits = hits;
      }
    }
  }
  std::vector<VariableId> candidates;
  for (VariableId v : p)
    if (!g.has_edge(pivot, v)) candidates.push_back(v);
  for (VariableId v : candidates) {
    std::vector<VariableId> np, nx;
    for (VariableId w : p)
      if (g.has_edge(v, w)) np.push_back(w);
    for (VariableId w : x)
      if (g.has_edge(v, w)) nx.push_back(w);
    r.push_back(v);
    bron_kerbosch(g, r, std::move(np), std::move(nx), out);
    r.pop_back();
    p.erase(std::find(p.begin(), p.end(), v));
    x.push_back(v);
  }
}

}  // namespace

std::vector<std::vector<VariableId>> maximal_cliques(const InteractionGraph& g, std::span<const VariableId> nodes) {
  std::vector<VariableId> p(nodes.begin(), nodes.end());
  std::sort(p.begin(), p.end());
  p.erase(std::unique(p.begin(), p.end()), p.end());
  for (VariableId v : p) {
    if (!g.present(v)) throw InputError("maximal_cliques: vertex " + std::to_string(v) + " not present");
  }
  std::vector<std::vector<VariableId>> out;
  if (p.empty()) return out;
  std::vector<VariableId> r;
  bron_kerbosch(g, r, p, {}, out);
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace adbound
