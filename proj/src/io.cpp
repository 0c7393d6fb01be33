#include "adbound/io.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

#include "adbound/error.hpp"

namespace adbound {

namespace {

struct Token {
  std::string text;
  int line;
};

class TokenStream {
 public:
  explicit TokenStream(std::istream& in) {
    std::string line;
    int no = 0;
    while (std::getline(in, line)) {
      ++no;
      auto hash = line.find('#');
      if (hash != std::string::npos) line.resize(hash);
      std::istringstream ls(line);
      std::string tok;
      while (ls >> tok) tokens_.push_back({tok, no});
    }
    last_line_ = no;
  }

  bool done() const { return pos_ >= tokens_.size(); }
  int line() const { return done() ? last_line_ : tokens_[pos_].line; }

  // Reports the line of the most recently read token.
  [[noreturn]] void fail(const std::string& what) const {
    int at = pos_ > 0 ? tokens_[pos_ - 1].line : line();
    throw InputError("line " + std::to_string(at) + ": " + what);
  }

  // Reports the line of the next unread token.
  [[noreturn]] void fail_here(const std::string& what) const {
    throw InputError("line " + std::to_string(line()) + ": " + what);
  }

  std::string word() {
    if (done()) fail_here("unexpected end of file");
    return tokens_[pos_++].text;
  }

  long integer(const char* what) {
    int at = line();
    std::string t = word();
    std::size_t used = 0;
    long v = 0;
    try {
      v = std::stol(t, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != t.size()) throw InputError("line " + std::to_string(at) + ": expected integer " + what + ", got '" + t + "'");
    return v;
  }

  double real() {
    int at = line();
    std::string t = word();
    std::size_t used = 0;
    double v = 0;
    try {
      v = std::stod(t, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != t.size() || !std::isfinite(v)) {
      throw InputError("line " + std::to_string(at) + ": expected number, got '" + t + "'");
    }
    return v;
  }

 private:
  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
  int last_line_ = 0;
};

}  // namespace

const Domains& model_domains(const Model& m) {
  return std::visit([](const auto& x) -> const Domains& { return x.domains(); }, m);
}

const std::vector<Factor>& model_factors(const Model& m) {
  if (const auto* net = std::get_if<BeliefNetwork>(&m)) return net->cpts();
  return std::get<CspProblem>(m).constraints();
}

Model read_model(std::istream& in) {
  TokenStream ts(in);
  std::string kind = ts.word();
  if (kind != "BAYES" && kind != "MARKOV") ts.fail("unknown preamble '" + kind + "', expected BAYES or MARKOV");
  long n = ts.integer("variable count");
  if (n < 1) ts.fail("variable count must be positive");
  Domains domains;
  for (long v = 0; v < n; ++v) {
    long c = ts.integer("cardinality");
    if (c < 1) ts.fail("cardinality must be positive");
    domains.push_back(static_cast<int>(c));
  }
  long m = ts.integer("factor count");
  if (m < 0) ts.fail("negative factor count");
  std::vector<std::vector<VariableId>> scopes;
  for (long f = 0; f < m; ++f) {
    long k = ts.integer("scope size");
    if (k < 0 || k > n) ts.fail("bad scope size");
    std::vector<VariableId> scope;
    for (long j = 0; j < k; ++j) {
      long v = ts.integer("variable index");
      if (v < 0 || v >= n) ts.fail("variable index " + std::to_string(v) + " out of range");
      scope.push_back(static_cast<VariableId>(v));
    }
    scopes.push_back(std::move(scope));
  }
  std::vector<Factor> factors;
  std::vector<int> table_lines;
  for (long f = 0; f < m; ++f) {
    table_lines.push_back(ts.line());
    long count = ts.integer("table size");
    std::vector<int> cards;
    std::size_t want = 1;
    for (VariableId v : scopes[static_cast<std::size_t>(f)]) {
      cards.push_back(domains[static_cast<std::size_t>(v)]);
      want *= static_cast<std::size_t>(domains[static_cast<std::size_t>(v)]);
    }
    if (count < 0 || static_cast<std::size_t>(count) != want) {
      ts.fail("table of factor " + std::to_string(f) + " has " + std::to_string(count) + " entries, expected " +
              std::to_string(want));
    }
    std::vector<double> vals;
    for (long j = 0; j < count; ++j) vals.push_back(ts.real());
    try {
      factors.emplace_back(scopes[static_cast<std::size_t>(f)], std::move(cards), std::move(vals));
    } catch (const InputError& e) {
      throw InputError("line " + std::to_string(table_lines.back()) + ": " + e.what());
    }
  }
  if (!ts.done()) ts.fail_here("trailing content after the last table");

  if (kind == "MARKOV") {
    for (std::size_t f = 0; f < factors.size(); ++f) {
      for (double x : factors[f].values()) {
        if (x != 0.0 && x != 1.0) {
          throw InputError("line " + std::to_string(table_lines[f]) + ": MARKOV tables must be 0/1 constraints");
        }
      }
      if (factors[f].scope().empty()) throw InputError("line " + std::to_string(table_lines[f]) + ": empty constraint scope");
    }
    return CspProblem(std::move(domains), std::move(factors));
  }

  // BAYES: the last scope variable of each table is its child.
  std::vector<std::vector<VariableId>> parents(static_cast<std::size_t>(n));
  std::vector<Factor> cpts(static_cast<std::size_t>(n));
  std::vector<int> owner(static_cast<std::size_t>(n), -1);
  for (std::size_t f = 0; f < factors.size(); ++f) {
    const auto& scope = factors[f].scope();
    if (scope.empty()) throw InputError("line " + std::to_string(table_lines[f]) + ": CPT with empty scope");
    auto child = static_cast<std::size_t>(scope.back());
    if (owner[child] >= 0) {
      throw InputError("line " + std::to_string(table_lines[f]) + ": second CPT for variable " + std::to_string(child));
    }
    owner[child] = static_cast<int>(f);
    parents[child].assign(scope.begin(), scope.end() - 1);
    for (double x : factors[f].values()) {
      if (x < 0.0) throw InputError("line " + std::to_string(table_lines[f]) + ": negative probability");
    }
    Factor col = marginalize_out(factors[f], static_cast<VariableId>(child), MarginalOp::Sum);
    for (double s : col.values()) {
      if (std::abs(s - 1.0) > 1e-9) {
        throw InputError("line " + std::to_string(table_lines[f]) + ": CPT of variable " + std::to_string(child) +
                         " is not normalized");
      }
    }
    cpts[child] = factors[f];
  }
  for (std::size_t v = 0; v < owner.size(); ++v) {
    if (owner[v] < 0) throw InputError("line " + std::to_string(ts.line()) + ": no CPT for variable " + std::to_string(v));
  }
  try {
    return BeliefNetwork(std::move(domains), std::move(parents), std::move(cpts));
  } catch (const InputError& e) {
    throw InputError("line " + std::to_string(ts.line()) + ": " + e.what());
  }
}

Model parse_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open model file '" + path + "'");
  return read_model(in);
}

void write_model(std::ostream& out, const Model& m) {
  const bool bayes = std::holds_alternative<BeliefNetwork>(m);
  const Domains& domains = model_domains(m);
  const auto& factors = model_factors(m);
  out << (bayes ? "BAYES" : "MARKOV") << "\n" << domains.size() << "\n";
  for (std::size_t v = 0; v < domains.size(); ++v) out << (v ? " " : "") << domains[v];
  out << "\n" << factors.size() << "\n";
  for (const auto& f : factors) {
    out << f.scope().size();
    for (VariableId v : f.scope()) out << ' ' << v;
    out << "\n";
  }
  out << std::setprecision(std::numeric_limits<double>::max_digits10);
  for (const auto& f : factors) {
    out << "\n" << f.size() << "\n";
    const std::size_t row = f.scope().empty() ? 1 : static_cast<std::size_t>(f.cards().back());
    for (std::size_t k = 0; k < f.size(); ++k) {
      out << ' ' << f[k];
      if ((k + 1) % row == 0) out << '\n';
    }
  }
}

void write_model(const Model& m, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write model file '" + path + "'");
  write_model(out, m);
}

Evidence read_evidence(std::istream& in) {
  TokenStream ts(in);
  if (ts.done()) return {};
  long count = ts.integer("evidence count");
  if (count < 0) ts.fail("negative evidence count");
  Evidence ev;
  for (long k = 0; k < count; ++k) {
    long var = ts.integer("evidence variable");
    long val = ts.integer("evidence value");
    if (var < 0 || val < 0) ts.fail("negative evidence index");
    if (!ev.emplace(static_cast<VariableId>(var), static_cast<int>(val)).second) {
      ts.fail("variable " + std::to_string(var) + " observed twice");
    }
  }
  if (!ts.done()) ts.fail_here("trailing content after evidence pairs");
  return ev;
}

Evidence parse_evidence(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open evidence file '" + path + "'");
  return read_evidence(in);
}

void write_evidence(std::ostream& out, const Evidence& ev) {
  out << ev.size();
  for (const auto& [var, val] : ev) out << ' ' << var << ' ' << val;
  out << "\n";
}

}  // namespace adbound
