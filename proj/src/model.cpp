#include "adbound/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "adbound/error.hpp"

namespace adbound {

namespace {

std::size_t table_size(std::span<const int> cards) {
  std::size_t n = 1;
  for (int c : cards) n *= static_cast<std::size_t>(c);
  return n;
}

// Product of the cardinalities after position p.
std::size_t inner_stride(const std::vector<int>& cards, std::size_t p) {
  std::size_t s = 1;
  for (std::size_t k = p + 1; k < cards.size(); ++k) s *= static_cast<std::size_t>(cards[k]);
  return s;
}

// Strides of `f` expressed for the variables of `scope` (0 where f does not mention them).
std::vector<std::size_t> strides_for(const Factor& f, std::span<const VariableId> scope) {
  std::vector<std::size_t> own(f.scope().size());
  std::size_t s = 1;
  for (std::size_t k = f.scope().size(); k-- > 0;) {
    own[k] = s;
    s *= static_cast<std::size_t>(f.cards()[k]);
  }
  std::vector<std::size_t> out(scope.size(), 0);
  for (std::size_t k = 0; k < scope.size(); ++k) {
    int p = f.position(scope[k]);
    if (p >= 0) out[k] = own[static_cast<std::size_t>(p)];
  }
  return out;
}

}  // namespace

std::string to_string(CombineOp op) { return op == CombineOp::Product ? "product" : "sum"; }

std::string to_string(MarginalOp op) {
  switch (op) {
    case MarginalOp::Sum: return "sum";
    case MarginalOp::Max: return "max";
    case MarginalOp::Min: return "min";
    case MarginalOp::Mean: return "mean";
  }
  return "?";
}

std::size_t linear_index(std::span<const int> cards, std::span<const int> assignment) {
  if (cards.size() != assignment.size()) {
    throw InputError("assignment length does not match scope length");
  }
  std::size_t idx = 0;
  for (std::size_t k = 0; k < cards.size(); ++k) {
    if (assignment[k] < 0 || assignment[k] >= cards[k]) {
      std::ostringstream os;
      os << "value index " << assignment[k] << " out of range for cardinality " << cards[k];
      throw InputError(os.str());
    }
    idx = idx * static_cast<std::size_t>(cards[k]) + static_cast<std::size_t>(assignment[k]);
  }
  return idx;
}

Factor::Factor(std::vector<VariableId> scope, std::vector<int> cards, std::vector<double> values)
    : scope_(std::move(scope)), cards_(std::move(cards)), values_(std::move(values)) {
  if (scope_.size() != cards_.size()) throw InputError("factor scope and cardinality lists differ in length");
  for (std::size_t k = 0; k < scope_.size(); ++k) {
    if (scope_[k] < 0) throw InputError("negative variable id in factor scope");
    if (cards_[k] < 1) throw InputError("cardinality must be positive");
    for (std::size_t j = 0; j < k; ++j) {
      if (scope_[j] == scope_[k]) throw InputError("duplicate variable in factor scope");
    }
  }
  if (values_.size() != table_size(cards_)) {
    std::ostringstream os;
    os << "factor has " << values_.size() << " values, expected " << table_size(cards_);
    throw InputError(os.str());
  }
  for (double v : values_) {
    if (!std::isfinite(v)) throw InputError("factor values must be finite");
  }
}

Factor Factor::constant(double value) { return Factor({}, {}, {value}); }

Factor Factor::filled(std::vector<VariableId> scope, std::vector<int> cards, double value) {
  std::size_t n = table_size(cards);
  return Factor(std::move(scope), std::move(cards), std::vector<double>(n, value));
}

int Factor::position(VariableId v) const {
  auto it = std::find(scope_.begin(), scope_.end(), v);
  return it == scope_.end() ? -1 : static_cast<int>(it - scope_.begin());
}

double Factor::at(std::span<const int> assignment) const { return values_[linear_index(cards_, assignment)]; }

std::vector<int> Factor::assignment_of(std::size_t offset) const {
  std::vector<int> a(scope_.size());
  for (std::size_t k = scope_.size(); k-- > 0;) {
    a[k] = static_cast<int>(offset % static_cast<std::size_t>(cards_[k]));
    offset /= static_cast<std::size_t>(cards_[k]);
  }
  return a;
}

int Factor::card_of(VariableId v) const {
  int p = position(v);
  if (p < 0) throw InputError("variable " + std::to_string(v) + " not in factor scope");
  return cards_[static_cast<std::size_t>(p)];
}

Factor restrict_evidence(const Factor& f, const Evidence& evidence) {
  Factor cur = f;
  for (const auto& [var, val] : evidence) {
    int p = cur.position(var);
    if (p < 0) continue;
    auto pos = static_cast<std::size_t>(p);
    int card = cur.cards()[pos];
    if (val < 0 || val >= card) {
      throw InputError("evidence value " + std::to_string(val) + " out of range for variable " + std::to_string(var));
    }
    std::size_t inner = inner_stride(cur.cards(), pos);
    std::size_t outer = cur.size() / (inner * static_cast<std::size_t>(card));
    std::vector<double> vals(outer * inner);
    for (std::size_t o = 0; o < outer; ++o) {
      const double* src = cur.values().data() + (o * static_cast<std::size_t>(card) + static_cast<std::size_t>(val)) * inner;
      std::copy(src, src + inner, vals.begin() + static_cast<std::ptrdiff_t>(o * inner));
    }
    auto scope = cur.scope();
    auto cards = cur.cards();
    scope.erase(scope.begin() + p);
    cards.erase(cards.begin() + p);
    cur = Factor(std::move(scope), std::move(cards), std::move(vals));
  }
  return cur;
}

Factor combine(const Factor& f, const Factor& g, CombineOp op) {
  std::vector<VariableId> scope = f.scope();
  std::vector<int> cards = f.cards();
  for (std::size_t k = 0; k < g.scope().size(); ++k) {
    int p = f.position(g.scope()[k]);
    if (p < 0) {
      scope.push_back(g.scope()[k]);
      cards.push_back(g.cards()[k]);
    } else if (f.cards()[static_cast<std::size_t>(p)] != g.cards()[k]) {
      throw InputError("cardinality mismatch for variable " + std::to_string(g.scope()[k]));
    }
  }
  auto fs = strides_for(f, scope);
  auto gs = strides_for(g, scope);
  std::size_t n = table_size(cards);
  std::vector<double> out(n);
  std::vector<int> a(scope.size(), 0);
  std::size_t fi = 0, gi = 0;
  for (std::size_t idx = 0; idx < n; ++idx) {
    out[idx] = op == CombineOp::Product ? f[fi] * g[gi] : f[fi] + g[gi];
    // Odometer step, last variable fastest.
    for (std::size_t k = scope.size(); k-- > 0;) {
      if (++a[k] < cards[k]) {
        fi += fs[k];
        gi += gs[k];
        break;
      }
      a[k] = 0;
      fi -= fs[k] * static_cast<std::size_t>(cards[k] - 1);
      gi -= gs[k] * static_cast<std::size_t>(cards[k] - 1);
    }
  }
  return Factor(std::move(scope), std::move(cards), std::move(out));
}

double combine_identity(CombineOp op) { return op == CombineOp::Product ? 1.0 : 0.0; }

Factor combine_all(std::span<const Factor> factors, CombineOp op) {
  if (factors.empty()) return Factor::constant(combine_identity(op));
  Factor acc = factors[0];
  for (std::size_t k = 1; k < factors.size(); ++k) acc = combine(acc, factors[k], op);
  return acc;
}

Factor marginalize_out(const Factor& f, VariableId v, MarginalOp op) {
  int p = f.position(v);
  if (p < 0) throw InputError("cannot marginalize variable " + std::to_string(v) + ": not in scope");
  auto pos = static_cast<std::size_t>(p);
  auto card = static_cast<std::size_t>(f.cards()[pos]);
  std::size_t inner = inner_stride(f.cards(), pos);
  std::size_t outer = f.size() / (inner * card);
  std::vector<double> out(outer * inner);
  for (std::size_t o = 0; o < outer; ++o) {
    for (std::size_t i = 0; i < inner; ++i) {
      const double* base = f.values().data() + o * card * inner + i;
      double acc = base[0];
      for (std::size_t k = 1; k < card; ++k) {
        double x = base[k * inner];
        switch (op) {
          case MarginalOp::Sum:
          case MarginalOp::Mean: acc += x; break;
          case MarginalOp::Max: acc = std::max(acc, x); break;
          case MarginalOp::Min: acc = std::min(acc, x); break;
        }
      }
      if (op == MarginalOp::Mean) acc /= static_cast<double>(card);
      out[o * inner + i] = acc;
    }
  }
  auto scope = f.scope();
  auto cards = f.cards();
  scope.erase(scope.begin() + p);
  cards.erase(cards.begin() + p);
  return Factor(std::move(scope), std::move(cards), std::move(out));
}

Factor reorder(const Factor& f, std::span<const VariableId> order) {
  if (order.size() != f.scope().size()) throw InputError("reorder: not a permutation of the scope");
  std::vector<int> cards;
  for (VariableId v : order) cards.push_back(f.card_of(v));
  auto strides = strides_for(f, order);
  std::vector<double> out(f.size());
  std::vector<int> a(order.size(), 0);
  std::size_t src = 0;
  for (std::size_t idx = 0; idx < out.size(); ++idx) {
    out[idx] = f[src];
    for (std::size_t k = order.size(); k-- > 0;) {
      if (++a[k] < cards[k]) {
        src += strides[k];
        break;
      }
      a[k] = 0;
      src -= strides[k] * static_cast<std::size_t>(cards[k] - 1);
    }
  }
  return Factor(std::vector<VariableId>(order.begin(), order.end()), std::move(cards), std::move(out));
}

void check_factor_domains(const Factor& f, const Domains& domains) {
  for (std::size_t k = 0; k < f.scope().size(); ++k) {
    VariableId v = f.scope()[k];
    if (v < 0 || static_cast<std::size_t>(v) >= domains.size()) {
      throw InputError("variable " + std::to_string(v) + " outside the problem's variable set");
    }
    if (domains[static_cast<std::size_t>(v)] != f.cards()[k]) {
      throw InputError("factor cardinality disagrees with domain of variable " + std::to_string(v));
    }
  }
}

std::vector<Factor> restrict_all(std::span<const Factor> factors, const Evidence& evidence) {
  std::vector<Factor> out;
  out.reserve(factors.size());
  for (const auto& f : factors) out.push_back(restrict_evidence(f, evidence));
  return out;
}

BeliefNetwork::BeliefNetwork(Domains domains, std::vector<std::vector<VariableId>> parents, std::vector<Factor> cpts)
    : domains_(std::move(domains)), parents_(std::move(parents)), cpts_(std::move(cpts)) {
  const std::size_t n = domains_.size();
  if (parents_.size() != n || cpts_.size() != n) {
    throw InputError("belief network needs one parent list and one CPT per variable");
  }
  for (int c : domains_) {
    if (c < 1) throw InputError("cardinality must be positive");
  }
  for (std::size_t v = 0; v < n; ++v) {
    for (VariableId p : parents_[v]) {
      if (p < 0 || static_cast<std::size_t>(p) >= n || static_cast<std::size_t>(p) == v) {
        throw InputError("invalid parent " + std::to_string(p) + " of variable " + std::to_string(v));
      }
    }
  }
  // Kahn's algorithm for acyclicity.
  std::vector<int> indeg(n, 0);
  std::vector<std::vector<VariableId>> children(n);
  for (std::size_t v = 0; v < n; ++v) {
    for (VariableId p : parents_[v]) {
      children[static_cast<std::size_t>(p)].push_back(static_cast<VariableId>(v));
      ++indeg[v];
    }
  }
  std::vector<VariableId> ready;
  for (std::size_t v = 0; v < n; ++v)
    if (indeg[v] == 0) ready.push_back(static_cast<VariableId>(v));
  std::size_t seen = 0;
  while (!ready.empty()) {
    VariableId v = ready.back();
    ready.pop_back();
    ++seen;
    for (VariableId c : children[static_cast<std::size_t>(v)]) {
      if (--indeg[static_cast<std::size_t>(c)] == 0) ready.push_back(c);
    }
  }
  if (seen != n) throw InputError("parent relation contains a cycle");

  for (std::size_t v = 0; v < n; ++v) {
    const Factor& cpt = cpts_[v];
    check_factor_domains(cpt, domains_);
    std::vector<VariableId> want = parents_[v];
    want.push_back(static_cast<VariableId>(v));
    std::vector<VariableId> have = cpt.scope();
    std::sort(want.begin(), want.end());
    std::sort(have.begin(), have.end());
    if (want != have || (want.size() != parents_[v].size() + 1)) {
      throw InputError("CPT of variable " + std::to_string(v) + " must have scope parents + child");
    }
    for (double x : cpt.values()) {
      if (x < 0.0) throw InputError("negative probability in CPT of variable " + std::to_string(v));
    }
    // Canonical layout: parents in declared order, child last.
    std::vector<VariableId> layout = parents_[v];
    layout.push_back(static_cast<VariableId>(v));
    if (layout != cpt.scope()) cpts_[v] = reorder(cpt, layout);
    Factor col = marginalize_out(cpts_[v], static_cast<VariableId>(v), MarginalOp::Sum);
    for (double s : col.values()) {
      if (std::abs(s - 1.0) > 1e-9) {
        throw InputError("CPT of variable " + std::to_string(v) + " is not normalized");
      }
    }
  }
}

CspProblem::CspProblem(Domains domains, std::vector<Factor> constraints)
    : domains_(std::move(domains)), constraints_(std::move(constraints)) {
  for (int c : domains_) {
    if (c < 1) throw InputError("cardinality must be positive");
  }
  for (const auto& c : constraints_) {
    if (c.scope().empty()) throw InputError("constraint with empty scope");
    check_factor_domains(c, domains_);
    for (double x : c.values()) {
      if (x != 0.0 && x != 1.0) throw InputError("constraint tables must hold 0/1 values");
    }
  }
}

Task Task::belief(VariableId query, Evidence evidence) {
  return Task{MarginalOp::Sum, CombineOp::Product, query, std::move(evidence)};
}

Task Task::mpe(VariableId query, Evidence evidence) {
  return Task{MarginalOp::Max, CombineOp::Product, query, std::move(evidence)};
}

Task Task::max_csp(VariableId query, Evidence evidence) {
  return Task{MarginalOp::Min, CombineOp::Sum, query, std::move(evidence)};
}

TaskKind Task::kind() const {
  if (marginal == MarginalOp::Sum && combine == CombineOp::Product) return TaskKind::Belief;
  if (marginal == MarginalOp::Max && combine == CombineOp::Product) return TaskKind::Mpe;
  if (marginal == MarginalOp::Min && combine == CombineOp::Sum) return TaskKind::MaxCsp;
  throw ConfigError("unsupported operator pair (" + to_string(marginal) + ", " + to_string(combine) + ")");
}

void Task::validate(const Domains& domains) const {
  (void)kind();
  if (query < 0 || static_cast<std::size_t>(query) >= domains.size()) {
    throw InputError("query variable " + std::to_string(query) + " out of range");
  }
  if (evidence.count(query)) throw ConfigError("query variable is also evidenced");
  for (const auto& [var, val] : evidence) {
    if (var < 0 || static_cast<std::size_t>(var) >= domains.size()) {
      throw InputError("evidence variable " + std::to_string(var) + " out of range");
    }
    if (val < 0 || val >= domains[static_cast<std::size_t>(var)]) {
      throw InputError("evidence value out of range for variable " + std::to_string(var));
    }
  }
}

std::string to_string(TaskKind kind) {
  switch (kind) {
    case TaskKind::Belief: return "pr";
    case TaskKind::Mpe: return "mpe";
    case TaskKind::MaxCsp: return "maxcsp";
  }
  return "?";
}

}  // namespace adbound
