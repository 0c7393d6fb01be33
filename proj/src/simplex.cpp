#include "adbound/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "adbound/error.hpp"

namespace adbound {

int LinearProgram::add_var(bool nonnegative) {
  var_lower_bounded.push_back(nonnegative);
  return num_vars++;
}

void LinearProgram::add_constraint(std::map<int, double> coeffs, Relation relation, double rhs) {
  constraints.push_back(LpConstraint{std::move(coeffs), relation, rhs});
}

void LinearProgram::validate() const {
  if (num_vars < 0 || var_lower_bounded.size() != static_cast<std::size_t>(num_vars)) {
    throw InputError("LP variable bound flags do not match num_vars");
  }
  auto check_map = [&](const std::map<int, double>& m) {
    for (const auto& [j, a] : m) {
      if (j < 0 || j >= num_vars) throw InputError("LP coefficient references unknown variable " + std::to_string(j));
      if (!std::isfinite(a)) throw InputError("LP coefficient is not finite");
    }
  };
  check_map(objective);
  for (const auto& c : constraints) {
    check_map(c.coeffs);
    if (!std::isfinite(c.rhs)) throw InputError("LP right-hand side is not finite");
  }
}

std::string to_string(LpStatus status) {
  switch (status) {
    case LpStatus::Optimal: return "optimal";
    case LpStatus::Infeasible: return "infeasible";
    case LpStatus::Unbounded: return "unbounded";
  }
  return "?";
}

std::string to_text(const LinearProgram& lp) {
  std::ostringstream os;
  os << std::setprecision(10);
  auto term_list = [&](const std::map<int, double>& m) {
    bool first = true;
    for (const auto& [j, a] : m) {
      if (!first) os << (a < 0 ? " - " : " + ");
      else if (a < 0) os << "-";
      os << std::abs(a) << " x" << j;
      first = false;
    }
    if (first) os << "0";
  };
  os << "minimize ";
  term_list(lp.objective);
  os << "\nsubject to\n";
  for (std::size_t r = 0; r < lp.constraints.size(); ++r) {
    const auto& c = lp.constraints[r];
    os << "  r" << r << ": ";
    term_list(c.coeffs);
    os << (c.relation == Relation::Eq ? " = " : " <= ") << c.rhs << "\n";
  }
  os << "bounds\n";
  for (int j = 0; j < lp.num_vars; ++j) {
    os << "  x" << j << (lp.var_lower_bounded[static_cast<std::size_t>(j)] ? " >= 0" : " free") << "\n";
  }
  return os.str();
}

namespace {

enum class ColKind { Plus, Minus, Slack, Artificial };

struct Column {
  ColKind kind;
  int ref;  // original variable for Plus/Minus, row for Slack/Artificial
};

class Tableau {
 public:
  Tableau(const LinearProgram& lp, const SimplexOptions& opts) : lp_(lp), opts_(opts) {
    m_ = lp.constraints.size();
    for (int j = 0; j < lp.num_vars; ++j) {
      cols_.push_back({ColKind::Plus, j});
      if (!lp.var_lower_bounded[static_cast<std::size_t>(j)]) cols_.push_back({ColKind::Minus, j});
    }
    std::vector<int> plus_col(static_cast<std::size_t>(lp.num_vars)), minus_col(static_cast<std::size_t>(lp.num_vars), -1);
    for (std::size_t c = 0; c < cols_.size(); ++c) {
      auto ref = static_cast<std::size_t>(cols_[c].ref);
      (cols_[c].kind == ColKind::Plus ? plus_col[ref] : minus_col[ref]) = static_cast<int>(c);
    }
    std::vector<int> slack_col(m_, -1);
    for (std::size_t r = 0; r < m_; ++r) {
      if (lp.constraints[r].relation == Relation::Le) {
        slack_col[r] = static_cast<int>(cols_.size());
        cols_.push_back({ColKind::Slack, static_cast<int>(r)});
      }
    }
    flip_.assign(m_, false);
    init_col_.assign(m_, -1);
    for (std::size_t r = 0; r < m_; ++r) {
      flip_[r] = lp.constraints[r].rhs < 0;
      if (slack_col[r] >= 0 && !flip_[r]) {
        init_col_[r] = slack_col[r];
      } else {
        init_col_[r] = static_cast<int>(cols_.size());
        cols_.push_back({ColKind::Artificial, static_cast<int>(r)});
      }
    }
    n_ = cols_.size();
    if (m_ * (n_ + 1) > opts.max_tableau_cells) {
      throw ResourceError("LP tableau of " + std::to_string(m_) + " x " + std::to_string(n_ + 1) +
                          " exceeds the configured cap");
    }
    w_ = n_ + 1;
    t_.assign(m_ * w_, 0.0);
    basis_.assign(m_, -1);
    for (std::size_t r = 0; r < m_; ++r) {
      const auto& con = lp.constraints[r];
      double s = flip_[r] ? -1.0 : 1.0;
      for (const auto& [j, a] : con.coeffs) {
        at(r, static_cast<std::size_t>(plus_col[static_cast<std::size_t>(j)])) += s * a;
        int mc = minus_col[static_cast<std::size_t>(j)];
        if (mc >= 0) at(r, static_cast<std::size_t>(mc)) -= s * a;
      }
      if (slack_col[r] >= 0) at(r, static_cast<std::size_t>(slack_col[r])) = s;
      at(r, static_cast<std::size_t>(init_col_[r])) = 1.0;
      at(r, n_) = s * con.rhs;
      basis_[r] = init_col_[r];
    }
  }

  LpSolution run() {
    LpSolution sol;
    if (opts_.dump) dump("initial tableau");

    bool has_artificial = std::any_of(cols_.begin(), cols_.end(), [](const Column& c) { return c.kind == ColKind::Artificial; });
    if (has_artificial) {
      std::vector<double> cost(n_, 0.0);
      for (std::size_t c = 0; c < n_; ++c)
        if (cols_[c].kind == ColKind::Artificial) cost[c] = 1.0;
      set_costs(cost);
      if (iterate(true, sol.iterations) != LpStatus::Optimal) {
        throw InternalError("phase one of the simplex reported an unbounded auxiliary program");
      }
      double infeas = 0.0;
      for (std::size_t r = 0; r < m_; ++r)
        if (cols_[static_cast<std::size_t>(basis_[r])].kind == ColKind::Artificial) infeas += at(r, n_);
      if (infeas > opts_.feasibility_tol) {
        sol.status = LpStatus::Infeasible;
        if (opts_.dump) dump("infeasible after phase one");
        return sol;
      }
      drive_out_artificials();
    }

    std::vector<double> cost(n_, 0.0);
    for (std::size_t c = 0; c < n_; ++c) {
      if (cols_[c].kind == ColKind::Plus || cols_[c].kind == ColKind::Minus) {
        auto it = lp_.objective.find(cols_[c].ref);
        double cj = it == lp_.objective.end() ? 0.0 : it->second;
        cost[c] = cols_[c].kind == ColKind::Plus ? cj : -cj;
      }
    }
    set_costs(cost);
    LpStatus st = iterate(false, sol.iterations);
    if (opts_.dump) dump("final tableau");
    sol.status = st;
    if (st != LpStatus::Optimal) return sol;

    sol.values.assign(static_cast<std::size_t>(lp_.num_vars), 0.0);
    for (std::size_t r = 0; r < m_; ++r) {
      const Column& c = cols_[static_cast<std::size_t>(basis_[r])];
      double v = at(r, n_);
      if (c.kind == ColKind::Plus) sol.values[static_cast<std::size_t>(c.ref)] += v;
      if (c.kind == ColKind::Minus) sol.values[static_cast<std::size_t>(c.ref)] -= v;
    }
    sol.objective_value = 0.0;
    for (const auto& [j, a] : lp_.objective) sol.objective_value += a * sol.values[static_cast<std::size_t>(j)];
    sol.duals.assign(m_, 0.0);
    for (std::size_t r = 0; r < m_; ++r) {
      // Initial basic columns were unit vectors with zero phase-two cost: y_r = -d_init.
      double y = -d_[static_cast<std::size_t>(init_col_[r])];
      sol.duals[r] = flip_[r] ? -y : y;
    }
    return sol;
  }

 private:
  double& at(std::size_t r, std::size_t c) { return t_[r * w_ + c]; }
  double at(std::size_t r, std::size_t c) const { return t_[r * w_ + c]; }

  void set_costs(const std::vector<double>& cost) {
    cost_ = cost;
    d_.assign(w_, 0.0);
    for (std::size_t c = 0; c < n_; ++c) d_[c] = cost[c];
    for (std::size_t r = 0; r < m_; ++r) {
      double cb = cost[static_cast<std::size_t>(basis_[r])];
      if (cb == 0.0) continue;
      const double* row = &t_[r * w_];
      for (std::size_t c = 0; c < w_; ++c) d_[c] -= cb * row[c];
    }
  }

  void pivot(std::size_t pr, std::size_t pc) {
    double* prow = &t_[pr * w_];
    double inv = 1.0 / prow[pc];
    nz_.clear();
    for (std::size_t c = 0; c < w_; ++c) {
      if (prow[c] == 0.0) continue;
      prow[c] *= inv;
      nz_.push_back(c);
    }
    prow[pc] = 1.0;
    for (std::size_t r = 0; r < m_; ++r) {
      if (r == pr) continue;
      double* row = &t_[r * w_];
      double f = row[pc];
      if (f == 0.0) continue;
      for (std::size_t c : nz_) row[c] -= f * prow[c];
      row[pc] = 0.0;
    }
    double f = d_[pc];
    if (f != 0.0) {
      for (std::size_t c : nz_) d_[c] -= f * prow[c];
      d_[pc] = 0.0;
    }
    basis_[pr] = static_cast<int>(pc);
  }

  // Devex pricing (reference weights refreshed from the pivot row). After a
  // run of degenerate pivots Bland's rule takes over until the objective
  // moves again, which rules out cycling.
  LpStatus iterate(bool phase_one, int& iterations) {
    constexpr int kDegenerateLimit = 50;
    int degenerate_run = 0;
    std::vector<double> weight(n_, 1.0);
    for (;;) {
      const bool bland = degenerate_run >= kDegenerateLimit;
      std::size_t q = n_;
      double best_score = 0.0;
      for (std::size_t c = 0; c < n_; ++c) {
        if (!phase_one && cols_[c].kind == ColKind::Artificial) continue;
        double dc = d_[c];
        if (dc >= -opts_.optimality_tol) continue;
        if (bland) {
          q = c;
          break;
        }
        double score = dc * dc / weight[c];
        if (score > best_score) {
          best_score = score;
          q = c;
        }
      }
      if (q == n_) return LpStatus::Optimal;
      std::size_t leave = m_;
      double best = 0.0;
      for (std::size_t r = 0; r < m_; ++r) {
        double a = at(r, q);
        if (a <= opts_.pivot_tol) continue;
        double ratio = std::max(0.0, at(r, n_)) / a;
        if (leave == m_ || ratio < best - 1e-12) {
          leave = r;
          best = ratio;
        } else if (ratio <= best + 1e-12 && basis_[r] < basis_[leave]) {
          leave = r;
          best = std::min(best, ratio);
        }
      }
      if (leave == m_) return LpStatus::Unbounded;
      degenerate_run = best * std::abs(d_[q]) <= 1e-12 ? degenerate_run + 1 : 0;

      const double alpha = at(leave, q);
      const double wq = weight[q];
      const auto out = static_cast<std::size_t>(basis_[leave]);
      const double* prow = &t_[leave * w_];
      for (std::size_t c = 0; c < n_; ++c) {
        if (prow[c] == 0.0 || c == q) continue;
        double ratio = prow[c] / alpha;
        weight[c] = std::max(weight[c], ratio * ratio * wq);
      }
      weight[out] = std::max(wq / (alpha * alpha), 1.0);

      pivot(leave, q);
      ++iterations;
    }
  }

  void drive_out_artificials() {
    for (std::size_t r = 0; r < m_; ++r) {
      if (cols_[static_cast<std::size_t>(basis_[r])].kind != ColKind::Artificial) continue;
      std::size_t best = n_;
      double mag = opts_.pivot_tol;
      for (std::size_t c = 0; c < n_; ++c) {
        if (cols_[c].kind == ColKind::Artificial) continue;
        if (std::abs(at(r, c)) > mag) {
          mag = std::abs(at(r, c));
          best = c;
        }
      }
      // No candidate: the row is redundant and its artificial stays basic at zero.
      if (best != n_) pivot(r, best);
    }
  }

  void dump(const char* title) const {
    std::ostream& os = *opts_.dump;
    os << "# " << title << " (" << m_ << " rows, " << n_ << " columns)\n";
    for (std::size_t r = 0; r < m_; ++r) {
      os << "b" << basis_[r] << ":";
      for (std::size_t c = 0; c < w_; ++c) os << ' ' << at(r, c);
      os << '\n';
    }
    if (d_.empty()) return;
    os << "d:";
    for (std::size_t c = 0; c < w_; ++c) os << ' ' << d_[c];
    os << '\n';
  }

  const LinearProgram& lp_;
  const SimplexOptions& opts_;
  std::size_t m_ = 0, n_ = 0, w_ = 0;
  std::vector<Column> cols_;
  std::vector<bool> flip_;
  std::vector<int> init_col_;
  std::vector<int> basis_;
  std::vector<double> t_;
  std::vector<double> cost_;
  std::vector<double> d_;
  std::vector<std::size_t> nz_;
};

}  // namespace

LpSolution solve(const LinearProgram& lp, const SimplexOptions& opts) {
  lp.validate();
  Tableau tab(lp, opts);
  return tab.run();
}

LpSolution solve_via_dual(const LinearProgram& lp, const SimplexOptions& opts) {
  lp.validate();
  const std::size_t m = lp.constraints.size();
  const auto n = static_cast<std::size_t>(lp.num_vars);

  // Column occurrence counts.
  std::vector<int> occurrences(n, 0), only_row(n, -1);
  for (std::size_t r = 0; r < m; ++r) {
    for (const auto& [j, a] : lp.constraints[r].coeffs) {
      if (a == 0.0) continue;
      ++occurrences[static_cast<std::size_t>(j)];
      only_row[static_cast<std::size_t>(j)] = static_cast<int>(r);
    }
  }

  // Singleton substitution: x_j = (b_r - sum_{k != j} a_rk x_k) / a_rj, and x_j >= 0 turns row r into an inequality.
  struct Substitution {
    int var;
    std::size_t row;
    double coef;
    double sign;
  };
  std::vector<Substitution> subs;
  std::vector<bool> row_used(m, false), var_removed(n, false);
  for (std::size_t j = 0; j < n; ++j) {
    if (!lp.var_lower_bounded[j] || occurrences[j] != 1) continue;
    auto r = static_cast<std::size_t>(only_row[j]);
    if (lp.constraints[r].relation != Relation::Eq || row_used[r]) continue;
    double a = lp.constraints[r].coeffs.at(static_cast<int>(j));
    row_used[r] = true;
    var_removed[j] = true;
    subs.push_back({static_cast<int>(j), r, a, a > 0 ? 1.0 : -1.0});
  }

  // Reduced program over the kept variables.
  std::vector<int> new_index(n, -1), old_index;
  for (std::size_t j = 0; j < n; ++j) {
    if (!var_removed[j]) {
      new_index[j] = static_cast<int>(old_index.size());
      old_index.push_back(static_cast<int>(j));
    }
  }
  std::vector<double> cost(old_index.size(), 0.0);
  for (const auto& [j, c] : lp.objective)
    if (!var_removed[static_cast<std::size_t>(j)]) cost[static_cast<std::size_t>(new_index[static_cast<std::size_t>(j)])] += c;
  std::vector<int> sub_of_row(m, -1);
  for (std::size_t s = 0; s < subs.size(); ++s) {
    const auto& sb = subs[s];
    sub_of_row[sb.row] = static_cast<int>(s);
    auto it = lp.objective.find(sb.var);
    double cj = it == lp.objective.end() ? 0.0 : it->second;
    if (cj == 0.0) continue;
    for (const auto& [k, a] : lp.constraints[sb.row].coeffs) {
      if (k == sb.var) continue;
      cost[static_cast<std::size_t>(new_index[static_cast<std::size_t>(k)])] -= cj * a / sb.coef;
    }
  }

  // Reduced rows: (coeffs over new indices, relation, rhs).
  struct Row {
    std::vector<std::pair<int, double>> coeffs;
    Relation rel;
    double rhs;
  };
  std::vector<Row> rows(m);
  for (std::size_t r = 0; r < m; ++r) {
    const auto& con = lp.constraints[r];
    int s = sub_of_row[r];
    double sign = s >= 0 ? subs[static_cast<std::size_t>(s)].sign : 1.0;
    for (const auto& [k, a] : con.coeffs) {
      if (s >= 0 && k == subs[static_cast<std::size_t>(s)].var) continue;
      if (a == 0.0) continue;
      rows[r].coeffs.emplace_back(new_index[static_cast<std::size_t>(k)], sign * a);
    }
    rows[r].rel = s >= 0 ? Relation::Le : con.relation;
    rows[r].rhs = sign * con.rhs;
  }

  // Dual: one variable per reduced row (free for EQ, v = -y >= 0 for LE), one row per kept column.
  LinearProgram dual;
  std::vector<std::map<int, double>> dual_rows(old_index.size());
  for (std::size_t r = 0; r < m; ++r) {
    bool eq = rows[r].rel == Relation::Eq;
    int u = dual.add_var(!eq);
    double s = eq ? 1.0 : -1.0;
    if (rows[r].rhs != 0.0) dual.objective[u] = -s * rows[r].rhs;
    for (const auto& [k, a] : rows[r].coeffs) dual_rows[static_cast<std::size_t>(k)][u] += s * a;
  }
  for (std::size_t k = 0; k < old_index.size(); ++k) {
    bool free_var = !lp.var_lower_bounded[static_cast<std::size_t>(old_index[k])];
    dual.add_constraint(std::move(dual_rows[k]), free_var ? Relation::Eq : Relation::Le, cost[k]);
  }

  LpSolution dsol = solve(dual, opts);
  LpSolution sol;
  sol.iterations = dsol.iterations;
  if (dsol.status == LpStatus::Unbounded) {
    sol.status = LpStatus::Infeasible;
    return sol;
  }
  if (dsol.status == LpStatus::Infeasible) {
    // Primal is unbounded or infeasible; the primal route tells which.
    LpSolution p = solve(lp, opts);
    p.iterations += sol.iterations;
    return p;
  }

  sol.status = LpStatus::Optimal;
  sol.values.assign(n, 0.0);
  for (std::size_t k = 0; k < old_index.size(); ++k)
    sol.values[static_cast<std::size_t>(old_index[k])] = -dsol.duals[k];
  for (const auto& sb : subs) {
    double acc = lp.constraints[sb.row].rhs;
    for (const auto& [k, a] : lp.constraints[sb.row].coeffs)
      if (k != sb.var) acc -= a * sol.values[static_cast<std::size_t>(k)];
    sol.values[static_cast<std::size_t>(sb.var)] = std::max(0.0, acc / sb.coef);
  }
  sol.objective_value = 0.0;
  for (const auto& [j, a] : lp.objective) sol.objective_value += a * sol.values[static_cast<std::size_t>(j)];

  sol.duals.assign(m, 0.0);
  for (std::size_t r = 0; r < m; ++r) {
    double dv = dsol.values[r];
    double y = rows[r].rel == Relation::Eq ? dv : -dv;
    int s = sub_of_row[r];
    if (s >= 0) {
      const auto& sb = subs[static_cast<std::size_t>(s)];
      auto it = lp.objective.find(sb.var);
      double cj = it == lp.objective.end() ? 0.0 : it->second;
      y = sb.sign * y + cj / sb.coef;
    }
    sol.duals[r] = y;
  }
  return sol;
}

}  // namespace adbound
