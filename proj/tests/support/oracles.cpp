#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <stdexcept>

namespace oracle {

double value_at(const Factor& f, const std::vector<int>& full) {
  std::size_t offset = 0;
  for (std::size_t k = 0; k < f.scope().size(); ++k) {
    offset = offset * static_cast<std::size_t>(f.cards()[k]) + static_cast<std::size_t>(full[static_cast<std::size_t>(f.scope()[k])]);
  }
  return f.values()[offset];
}

std::vector<double> enumerate_query(const std::vector<Factor>& factors, const Domains& domains, const Task& task) {
  const std::size_t n = domains.size();
  const int qcard = domains[static_cast<std::size_t>(task.query)];
  std::vector<double> out(static_cast<std::size_t>(qcard));
  std::vector<bool> seen(out.size(), false);
  std::vector<int> full(n, 0);
  for (;;) {
    bool consistent = true;
    for (const auto& [v, x] : task.evidence) consistent = consistent && full[static_cast<std::size_t>(v)] == x;
    if (consistent) {
      double val = task.combine == CombineOp::Product ? 1.0 : 0.0;
      for (const auto& f : factors) {
        double c = value_at(f, full);
        val = task.combine == CombineOp::Product ? val * c : val + c;
      }
      auto q = static_cast<std::size_t>(full[static_cast<std::size_t>(task.query)]);
      if (!seen[q]) {
        out[q] = val;
        seen[q] = true;
      } else if (task.marginal == MarginalOp::Sum) {
        out[q] += val;
      } else if (task.marginal == MarginalOp::Max) {
        out[q] = std::max(out[q], val);
      } else {
        out[q] = std::min(out[q], val);
      }
    }
    std::size_t k = n;
    while (k > 0) {
      --k;
      if (++full[k] < domains[k]) break;
      full[k] = 0;
      if (k == 0) return out;
    }
    if (n == 0) return out;
  }
}

Factor zero_extend(const Factor& f, const Evidence& evidence) {
  std::vector<double> vals(f.values());
  for (std::size_t x = 0; x < vals.size(); ++x) {
    auto a = f.assignment_of(x);
    for (std::size_t k = 0; k < a.size(); ++k) {
      auto it = evidence.find(f.scope()[k]);
      if (it != evidence.end() && it->second != a[k]) vals[x] = 0.0;
    }
  }
  return Factor(f.scope(), f.cards(), vals);
}

namespace {

// Solves A x = b in place (square); false if numerically singular.
bool solve_square(std::vector<std::vector<double>> a, std::vector<double> b, std::vector<double>& x) {
  const std::size_t n = b.size();
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < n; ++r)
      if (std::abs(a[r][col]) > std::abs(a[piv][col])) piv = r;
    if (std::abs(a[piv][col]) < 1e-10) return false;
    std::swap(a[piv], a[col]);
    std::swap(b[piv], b[col]);
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col) continue;
      double f = a[r][col] / a[col][col];
      if (f == 0.0) continue;
      for (std::size_t c = col; c < n; ++c) a[r][c] -= f * a[col][c];
      b[r] -= f * b[col];
    }
  }
  x.assign(n, 0.0);
  for (std::size_t r = 0; r < n; ++r) x[r] = b[r] / a[r][r];
  return true;
}

struct Row {
  std::vector<double> a;
  double b;
  bool eq;
};

// Minimum of the objective over basic feasible points; nullopt if none.
std::optional<double> best_vertex(const std::vector<Row>& rows, const std::vector<double>& c, std::size_t n) {
  std::optional<double> best;
  const std::size_t total = rows.size();
  std::vector<std::size_t> pick(n);
  // Iterate over all n-subsets of the rows.
  std::vector<bool> mask(total, false);
  std::fill(mask.begin(), mask.begin() + static_cast<std::ptrdiff_t>(std::min(n, total)), true);
  if (n > total) return best;
  do {
    std::vector<std::vector<double>> a;
    std::vector<double> b;
    for (std::size_t r = 0; r < total; ++r) {
      if (!mask[r]) continue;
      a.push_back(rows[r].a);
      b.push_back(rows[r].b);
    }
    std::vector<double> x;
    if (!solve_square(a, b, x)) continue;
    bool ok = true;
    for (const auto& row : rows) {
      double lhs = 0.0;
      for (std::size_t j = 0; j < n; ++j) lhs += row.a[j] * x[j];
      double tol = 1e-8 * (1.0 + std::abs(row.b));
      if (row.eq ? std::abs(lhs - row.b) > tol : lhs > row.b + tol) ok = false;
    }
    if (!ok) continue;
    double obj = 0.0;
    for (std::size_t j = 0; j < n; ++j) obj += c[j] * x[j];
    if (!best || obj < *best) best = obj;
  } while (std::prev_permutation(mask.begin(), mask.end()));
  return best;
}

}  // namespace

VertexResult vertex_enumeration(const LinearProgram& lp) {
  const auto n = static_cast<std::size_t>(lp.num_vars);
  for (bool nonneg : lp.var_lower_bounded)
    if (!nonneg) throw std::invalid_argument("vertex_enumeration needs nonnegative variables");
  std::vector<double> c(n, 0.0);
  for (const auto& [j, v] : lp.objective) c[static_cast<std::size_t>(j)] = v;
  std::vector<Row> rows;
  for (const auto& con : lp.constraints) {
    Row r{std::vector<double>(n, 0.0), con.rhs, con.relation == Relation::Eq};
    for (const auto& [j, v] : con.coeffs) r.a[static_cast<std::size_t>(j)] += v;
    rows.push_back(r);
  }
  for (std::size_t j = 0; j < n; ++j) {
    Row r{std::vector<double>(n, 0.0), 0.0, false};
    r.a[j] = -1.0;
    rows.push_back(r);
  }
  VertexResult res;
  auto plain = best_vertex(rows, c, n);
  if (!plain) return res;
  const double box = 1e7;
  for (std::size_t j = 0; j < n; ++j) {
    Row r{std::vector<double>(n, 0.0), box, false};
    r.a[j] = 1.0;
    rows.push_back(r);
  }
  auto boxed = best_vertex(rows, c, n);
  if (boxed && *boxed < *plain - 1e-6 * (1.0 + std::abs(*plain))) {
    res.status = LpStatus::Unbounded;
    return res;
  }
  res.status = LpStatus::Optimal;
  res.objective = *plain;
  return res;
}

int fill_count_scan(const InteractionGraph& g, VariableId v) {
  std::set<std::pair<VariableId, VariableId>> edge_set;
  for (auto [a, b] : g.edges()) {
    edge_set.insert({a, b});
    edge_set.insert({b, a});
  }
  std::vector<VariableId> nb;
  for (auto [a, b] : edge_set)
    if (a == v) nb.push_back(b);
  int missing = 0;
  for (std::size_t i = 0; i < nb.size(); ++i)
    for (std::size_t j = i + 1; j < nb.size(); ++j)
      if (!edge_set.count({nb[i], nb[j]})) ++missing;
  return missing;
}

std::vector<std::vector<VariableId>> cliques_by_subsets(const InteractionGraph& g, const std::vector<VariableId>& nodes) {
  const std::size_t k = nodes.size();
  auto is_clique = [&](unsigned mask) {
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = i + 1; j < k; ++j)
        if ((mask >> i & 1u) && (mask >> j & 1u) && !g.has_edge(nodes[i], nodes[j])) return false;
    return true;
  };
  std::vector<std::vector<VariableId>> out;
  for (unsigned mask = 1; mask < (1u << k); ++mask) {
    if (!is_clique(mask)) continue;
    bool maximal = true;
    for (std::size_t i = 0; i < k && maximal; ++i)
      if (!(mask >> i & 1u) && is_clique(mask | (1u << i))) maximal = false;
    if (!maximal) continue;
    std::vector<VariableId> c;
    for (std::size_t i = 0; i < k; ++i)
      if (mask >> i & 1u) c.push_back(nodes[i]);
    std::sort(c.begin(), c.end());
    out.push_back(c);
  }
  std::sort(out.begin(), out.end());
  return out;
}

namespace {

// Visits every grid point of `dims` coordinates in [-range, range].
template <typename F>
void for_grid(std::size_t dims, double step, double range, F&& f) {
  const int steps = static_cast<int>(std::lround(2.0 * range / step));
  std::vector<int> idx(dims, 0);
  std::vector<double> point(dims);
  for (;;) {
    for (std::size_t d = 0; d < dims; ++d) point[d] = -range + step * idx[d];
    f(point);
    std::size_t d = 0;
    while (d < dims && ++idx[d] > steps) idx[d++] = 0;
    if (d == dims) return;
  }
}

// Best objective over a grid for the first unary table (entry 0 pinned), the
// second one set to its tightest value per cell. `target` is the table to
// bound and `weight` the per-cell cost.
double grid_two_unary(const Factor& lambda, const std::vector<double>& target, const std::vector<double>& weight,
                      bool upper, double step, double range) {
  if (lambda.arity() != 2) throw std::invalid_argument("grid oracle needs a two-variable table");
  const int kb = lambda.cards()[0], kc = lambda.cards()[1];
  double best = std::numeric_limits<double>::infinity();
  for_grid(static_cast<std::size_t>(kb - 1), step, range, [&](const std::vector<double>& p) {
    std::vector<double> a(static_cast<std::size_t>(kb), 0.0);
    for (int b = 1; b < kb; ++b) a[static_cast<std::size_t>(b)] = p[static_cast<std::size_t>(b - 1)];
    double obj = 0.0;
    for (int c = 0; c < kc; ++c) {
      double h = upper ? -std::numeric_limits<double>::infinity() : std::numeric_limits<double>::infinity();
      for (int b = 0; b < kb; ++b) {
        double t = target[static_cast<std::size_t>(b * kc + c)] - a[static_cast<std::size_t>(b)];
        h = upper ? std::max(h, t) : std::min(h, t);
      }
      for (int b = 0; b < kb; ++b) {
        auto x = static_cast<std::size_t>(b * kc + c);
        obj += weight[x] * std::abs(a[static_cast<std::size_t>(b)] + h - target[x]);
      }
    }
    best = std::min(best, obj);
  });
  return best;
}

}  // namespace

double grid_product_objective(const Factor& lambda, bool upper, double coeff_floor, double step, double range) {
  double total = 0.0;
  for (double v : lambda.values()) {
    if (v <= 0.0) throw std::invalid_argument("grid product oracle needs a positive table");
    total += v;
  }
  std::vector<double> target, weight;
  for (double v : lambda.values()) {
    target.push_back(std::log10(v));
    weight.push_back(std::max(coeff_floor, v / total));
  }
  return grid_two_unary(lambda, target, weight, upper, step, range);
}

double grid_sum_objective(const Factor& lambda, bool upper, double step, double range) {
  std::vector<double> weight(lambda.size(), 1.0);
  return grid_two_unary(lambda, lambda.values(), weight, upper, step, range);
}

Factor random_factor(std::mt19937_64& rng, std::vector<VariableId> scope, const Domains& domains, double zero_fraction) {
  std::vector<int> cards;
  std::size_t size = 1;
  for (VariableId v : scope) {
    cards.push_back(domains[static_cast<std::size_t>(v)]);
    size *= static_cast<std::size_t>(cards.back());
  }
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> vals(size);
  for (double& x : vals) x = u(rng) < zero_fraction ? 0.0 : u(rng);
  return Factor(std::move(scope), std::move(cards), std::move(vals));
}

BeliefNetwork random_network(std::mt19937_64& rng, int n, int max_parents, int max_card) {
  std::uniform_int_distribution<int> card(2, max_card);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Domains domains(static_cast<std::size_t>(n));
  for (int& d : domains) d = card(rng);
  std::vector<std::vector<VariableId>> parents(static_cast<std::size_t>(n));
  std::vector<Factor> cpts;
  for (int v = 0; v < n; ++v) {
    std::vector<VariableId> earlier(static_cast<std::size_t>(v));
    for (int k = 0; k < v; ++k) earlier[static_cast<std::size_t>(k)] = k;
    std::shuffle(earlier.begin(), earlier.end(), rng);
    int np = std::uniform_int_distribution<int>(0, std::min(max_parents, v))(rng);
    std::vector<VariableId> pa(earlier.begin(), earlier.begin() + np);
    std::sort(pa.begin(), pa.end());
    std::vector<VariableId> scope = pa;
    scope.push_back(v);
    std::vector<int> cards;
    std::size_t cols = 1;
    for (VariableId p : pa) {
      cards.push_back(domains[static_cast<std::size_t>(p)]);
      cols *= static_cast<std::size_t>(domains[static_cast<std::size_t>(p)]);
    }
    const int k = domains[static_cast<std::size_t>(v)];
    cards.push_back(k);
    std::vector<double> vals;
    for (std::size_t c = 0; c < cols; ++c) {
      std::vector<double> col(static_cast<std::size_t>(k));
      double s = 0.0;
      for (double& x : col) {
        x = u(rng) < 0.1 ? 0.0 : u(rng) + 0.01;
        s += x;
      }
      if (s == 0.0) {
        col[0] = 1.0;
        s = 1.0;
      }
      for (double x : col) vals.push_back(x / s);
    }
    parents[static_cast<std::size_t>(v)] = pa;
    cpts.emplace_back(scope, cards, vals);
  }
  return BeliefNetwork(domains, parents, cpts);
}

CspProblem random_csp(std::mt19937_64& rng, int n, int n_constraints, int max_card) {
  std::uniform_int_distribution<int> card(2, max_card), var(0, n - 1);
  Domains domains(static_cast<std::size_t>(n));
  for (int& d : domains) d = card(rng);
  std::vector<Factor> cons;
  for (int c = 0; c < n_constraints; ++c) {
    std::vector<VariableId> scope{var(rng)};
    if (std::bernoulli_distribution(0.8)(rng)) {
      VariableId w = var(rng);
      if (w != scope[0]) scope.push_back(w);
    }
    Factor f = random_factor(rng, scope, domains);
    std::vector<double> bits;
    for (double x : f.values()) bits.push_back(x < 0.5 ? 0.0 : 1.0);
    cons.emplace_back(f.scope(), f.cards(), bits);
  }
  return CspProblem(domains, cons);
}

InteractionGraph random_graph(std::mt19937_64& rng, int n, double edge_probability) {
  InteractionGraph g(n);
  std::bernoulli_distribution coin(edge_probability);
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v)
      if (coin(rng)) g.add_edge(u, v);
  return g;
}

bool rel_close(double a, double b, double rel) {
  if (a == b) return true;
  return std::abs(a - b) <= rel * std::max(std::abs(a), std::abs(b));
}

}  // namespace oracle
