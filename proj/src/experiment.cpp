#include "adbound/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <limits>
#include <map>
#include <numeric>
#include <random>
#include <sstream>

#include <json.hpp>

#include "adbound/elimination.hpp"
#include "adbound/engine.hpp"
#include "adbound/error.hpp"
#include "adbound/generators.hpp"
#include "adbound/graph.hpp"
#include "adbound/minibuckets.hpp"

namespace adbound {

namespace {

const double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

bool parse_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw InputError("config key '" + key + "' expects a boolean, got '" + v + "'");
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// Order-independent mean: sums in sorted order.
double stable_mean(std::vector<double> xs) {
  if (xs.empty()) return kNaN;
  std::sort(xs.begin(), xs.end());
  double s = 0.0;
  for (double x : xs) s += x;
  return s / static_cast<double>(xs.size());
}

double mean_of(const std::vector<double>& xs, bool log_scale) {
  std::vector<double> t;
  for (double x : xs) t.push_back(log_scale ? safe_log10(x) : x);
  return stable_mean(std::move(t));
}

struct Instance {
  Model model;
  VariableId query = 0;
  Evidence evidence;
};

Task make_task(TaskKind kind, VariableId q, Evidence ev) {
  switch (kind) {
    case TaskKind::Belief: return Task::belief(q, std::move(ev));
    case TaskKind::Mpe: return Task::mpe(q, std::move(ev));
    case TaskKind::MaxCsp: return Task::max_csp(q, std::move(ev));
  }
  throw InternalError("unknown task kind");
}

// True when the evidence is certainly or possibly consistent (probability > 0).
bool evidence_possible(const std::vector<Factor>& factors, const Domains& domains, const Evidence& ev,
                       const ExperimentConfig& cfg) {
  bool all_positive = true;
  for (const auto& f : factors)
    for (double x : f.values()) all_positive = all_positive && x > 0.0;
  if (all_positive || ev.empty()) return true;
  // Evidence probability = sum over every other variable; query on any free variable.
  VariableId q = 0;
  while (ev.count(q)) ++q;
  Task t = Task::belief(q, ev);
  auto restricted = restrict_all(factors, ev);
  try {
    EliminationOptions eo;
    eo.max_factor_cells = cfg.exact_max_cells;
    Factor r = variable_elimination(restricted, domains, t, std::nullopt, eo);
    double total = 0.0;
    for (double x : r.values()) total += x;
    return total > 0.0;
  } catch (const ResourceError&) {
    int arity = 1;
    for (const auto& f : restricted) arity = std::max(arity, f.arity());
    MbResult ub = mb_run(restricted, domains, t, MbConfig{arity, MbMode::Upper});
    double total = 0.0;
    for (double x : ub.values) total += x;
    return total > 0.0;
  }
}

Model make_model(const ExperimentConfig& cfg, std::uint64_t seed) {
  switch (cfg.source) {
    case SourceKind::File: return parse_model(cfg.model_path);
    case SourceKind::RandomNetwork:
      return gen_random_network(cfg.roots, cfg.children, cfg.parents, cfg.cardinality, seed);
    case SourceKind::RandomMaxCsp: return gen_random_maxcsp(cfg.vars, cfg.cardinality, cfg.constraints, seed);
  }
  throw InternalError("unknown source kind");
}

Instance draw_instance(const ExperimentConfig& cfg, int trial) {
  const bool product = cfg.task != TaskKind::MaxCsp;
  for (int attempt = 0; attempt < 1000; ++attempt) {
    std::seed_seq seq{static_cast<std::uint32_t>(cfg.seed), static_cast<std::uint32_t>(cfg.seed >> 32),
                      static_cast<std::uint32_t>(trial), static_cast<std::uint32_t>(attempt)};
    std::mt19937_64 rng(seq);
    Instance inst{make_model(cfg, rng()), 0, {}};
    const Domains& domains = model_domains(inst.model);
    const auto& factors = model_factors(inst.model);
    const int n = static_cast<int>(domains.size());
    if (cfg.evidence_count >= n) throw ConfigError("evidence count must be below the variable count");

    bool found = false;
    for (int tries = 0; tries < 100 && !found; ++tries) {
      std::vector<VariableId> vars(static_cast<std::size_t>(n));
      std::iota(vars.begin(), vars.end(), 0);
      std::shuffle(vars.begin(), vars.end(), rng);
      Evidence ev;
      for (int k = 0; k < cfg.evidence_count; ++k) {
        VariableId v = vars[static_cast<std::size_t>(k)];
        std::uniform_int_distribution<int> val(0, domains[static_cast<std::size_t>(v)] - 1);
        ev[v] = val(rng);
      }
      std::uniform_int_distribution<int> pick(cfg.evidence_count, n - 1);
      inst.query = vars[static_cast<std::size_t>(pick(rng))];
      inst.evidence = std::move(ev);
      found = !product || evidence_possible(factors, domains, inst.evidence, cfg);
    }
    if (!found) throw ConfigError("could not draw evidence with positive probability in 100 attempts");

    if (cfg.resample_wide && cfg.source != SourceKind::File) {
      auto restricted = restrict_all(factors, inst.evidence);
      InteractionGraph g = interaction_graph(restricted, n);
      for (const auto& [v, x] : inst.evidence) g.remove_vertex(v);
      if (width(g, inst.query) > cfg.ad_ibound) continue;
    }
    return inst;
  }
  throw ConfigError("no generated instance within the AD i-bound after 1000 attempts");
}

struct MethodOutput {
  std::vector<double> low, est, high;
  double seconds = 0.0;
};

void push_reports(std::vector<BoundReport>& out, const ExperimentConfig& cfg, int trial, const Instance& inst,
                  const std::string& method, int ibound, const MethodOutput& m, const std::optional<std::vector<double>>& exact,
                  bool est_is_joint_estimate) {
  auto base = [&](const std::string& quantity) {
    BoundReport r;
    r.trial = trial;
    r.method = method;
    r.ibound = ibound;
    r.quantity = quantity;
    r.elapsed_seconds = m.seconds;
    r.query = inst.query;
    r.evidence = inst.evidence;
    return r;
  };
  if (cfg.task == TaskKind::Belief) {
    auto cond = bound_conditional(m.high, m.low);
    if (!cond) throw InternalError("upper bounds on the joint are all zero");
    BoundReport q = base("query");
    q.low = cond->low;
    q.high = cond->high;
    double est_total = 0.0;
    for (double e : m.est) est_total += e;
    for (std::size_t v = 0; v < m.low.size(); ++v) {
      if (est_is_joint_estimate) q.est.push_back(est_total > 0.0 ? m.est[v] / est_total : 0.0);
      else q.est.push_back(std::sqrt(cond->low[v] * cond->high[v]));
    }
    BoundReport e = base("evidence");
    double lo = 0.0, hi = 0.0;
    for (std::size_t v = 0; v < m.low.size(); ++v) {
      lo += m.low[v];
      hi += m.high[v];
    }
    e.low = {lo};
    e.high = {hi};
    e.est = {est_is_joint_estimate ? est_total : (lo > 0.0 ? std::sqrt(lo * hi) : 0.0)};
    if (exact) {
      double pe = 0.0;
      for (double x : *exact) pe += x;
      std::vector<double> c;
      for (double x : *exact) c.push_back(pe > 0.0 ? x / pe : 0.0);
      q.exact = c;
      e.exact = std::vector<double>{pe};
    }
    fill_metrics(q, true);
    fill_metrics(e, true);
    out.push_back(std::move(q));
    out.push_back(std::move(e));
    return;
  }
  BoundReport r = base(cfg.task == TaskKind::Mpe ? "mpe" : "maxcsp");
  r.low = m.low;
  r.high = m.high;
  r.est = m.est;
  r.exact = exact;
  fill_metrics(r, cfg.task == TaskKind::Mpe);
  out.push_back(std::move(r));
}

}  // namespace

double safe_log10(double x) { return std::log10(std::max(x, 1e-300)); }

void ExperimentConfig::validate() const {
  if (trials < 1) throw ConfigError("trial count must be at least 1");
  if (evidence_count < 0) throw ConfigError("evidence count must be non-negative");
  if (run_ad && ad_ibound < 1) throw ConfigError("AD i-bound must be at least 1");
  if (run_mb && mb_ibound < 1) throw ConfigError("MB i-bound must be at least 1");
  if (source == SourceKind::File && model_path.empty()) throw ConfigError("file source needs a model path");
  if (source == SourceKind::RandomMaxCsp && task != TaskKind::MaxCsp) {
    throw ConfigError("MAX-CSP instances need task maxcsp");
  }
  if (source == SourceKind::RandomNetwork && task == TaskKind::MaxCsp) {
    throw ConfigError("task maxcsp needs a MAX-CSP source");
  }
  constants.validate();
}

ExperimentConfig parse_experiment_config(std::istream& in) {
  ExperimentConfig cfg;
  std::string line;
  int no = 0;
  while (std::getline(in, line)) {
    ++no;
    if (auto h = line.find('#'); h != std::string::npos) line.resize(h);
    line = trim(line);
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos) throw InputError("config line " + std::to_string(no) + ": expected key=value");
    std::string key = trim(line.substr(0, eq));
    std::string val = trim(line.substr(eq + 1));
    auto as_int = [&]() {
      try {
        std::size_t used = 0;
        long v = std::stol(val, &used);
        if (used != val.size()) throw std::invalid_argument(val);
        return static_cast<int>(v);
      } catch (const std::exception&) {
        throw InputError("config line " + std::to_string(no) + ": '" + key + "' expects an integer");
      }
    };
    auto as_double = [&]() {
      try {
        std::size_t used = 0;
        double v = std::stod(val, &used);
        if (used != val.size()) throw std::invalid_argument(val);
        return v;
      } catch (const std::exception&) {
        throw InputError("config line " + std::to_string(no) + ": '" + key + "' expects a number");
      }
    };
    if (key == "task") {
      if (val == "pr") cfg.task = TaskKind::Belief;
      else if (val == "mpe") cfg.task = TaskKind::Mpe;
      else if (val == "maxcsp") cfg.task = TaskKind::MaxCsp;
      else throw InputError("config line " + std::to_string(no) + ": unknown task '" + val + "'");
    } else if (key == "source") {
      if (val == "file") cfg.source = SourceKind::File;
      else if (val == "net") cfg.source = SourceKind::RandomNetwork;
      else if (val == "maxcsp") cfg.source = SourceKind::RandomMaxCsp;
      else throw InputError("config line " + std::to_string(no) + ": unknown source '" + val + "'");
    } else if (key == "model") {
      cfg.model_path = val;
      cfg.source = SourceKind::File;
    } else if (key == "roots") cfg.roots = as_int();
    else if (key == "children") cfg.children = as_int();
    else if (key == "parents") cfg.parents = as_int();
    else if (key == "cardinality") cfg.cardinality = as_int();
    else if (key == "vars") cfg.vars = as_int();
    else if (key == "constraints") cfg.constraints = as_int();
    else if (key == "ad_ibound") cfg.ad_ibound = as_int();
    else if (key == "mb_ibound") cfg.mb_ibound = as_int();
    else if (key == "methods") {
      cfg.run_ad = val.find("ad") != std::string::npos;
      cfg.run_mb = val.find("mb") != std::string::npos;
    } else if (key == "evidence") cfg.evidence_count = as_int();
    else if (key == "trials") cfg.trials = as_int();
    else if (key == "seed") cfg.seed = static_cast<std::uint64_t>(as_int());
    else if (key == "exact") cfg.exact = parse_bool(key, val);
    else if (key == "exact_max_cells") cfg.exact_max_cells = static_cast<std::size_t>(as_double());
    else if (key == "resample_wide") cfg.resample_wide = parse_bool(key, val);
    else if (key == "z") cfg.constants.z = as_double();
    else if (key == "coeff_floor") cfg.constants.coeff_floor = as_double();
    else if (key == "records") cfg.records_path = val;
    else throw InputError("config line " + std::to_string(no) + ": unknown key '" + key + "'");
  }
  cfg.validate();
  return cfg;
}

ExperimentConfig load_experiment_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open config file '" + path + "'");
  return parse_experiment_config(in);
}

void fill_metrics(BoundReport& r, bool log_scale) {
  auto f = [&](double x) { return log_scale ? safe_log10(x) : x; };
  std::vector<double> gaps, errs;
  for (std::size_t v = 0; v < r.low.size(); ++v) {
    gaps.push_back(f(r.high[v]) - f(r.low[v]));
    if (r.exact) errs.push_back(std::abs(f(r.est[v]) - f((*r.exact)[v])));
  }
  r.hi_lo = stable_mean(gaps);
  r.est_eps = r.exact ? stable_mean(errs) : kNaN;
}

std::vector<BoundReport> aggregate_reports(const std::vector<BoundReport>& trials, bool log_scale) {
  std::vector<std::string> keys;
  std::map<std::string, std::vector<const BoundReport*>> groups;
  for (const auto& r : trials) {
    std::string key = r.method + "/" + std::to_string(r.ibound) + "/" + r.quantity;
    if (!groups.count(key)) keys.push_back(key);
    groups[key].push_back(&r);
  }
  std::vector<BoundReport> out;
  for (const auto& key : keys) {
    const auto& rs = groups[key];
    BoundReport a;
    a.aggregate = true;
    a.method = rs.front()->method;
    a.ibound = rs.front()->ibound;
    a.quantity = rs.front()->quantity;
    std::vector<double> lo, es, hi, ex, eps, gap, secs;
    bool all_exact = true;
    for (const auto* r : rs) {
      lo.push_back(mean_of(r->low, log_scale));
      es.push_back(mean_of(r->est, log_scale));
      hi.push_back(mean_of(r->high, log_scale));
      if (r->exact) {
        ex.push_back(mean_of(*r->exact, log_scale));
        eps.push_back(r->est_eps);
      } else {
        all_exact = false;
      }
      gap.push_back(r->hi_lo);
      secs.push_back(r->elapsed_seconds);
    }
    a.low = {stable_mean(lo)};
    a.est = {stable_mean(es)};
    a.high = {stable_mean(hi)};
    if (all_exact) a.exact = std::vector<double>{stable_mean(ex)};
    a.est_eps = all_exact ? stable_mean(eps) : kNaN;
    a.hi_lo = stable_mean(gap);
    a.elapsed_seconds = stable_mean(secs);
    out.push_back(std::move(a));
  }
  return out;
}

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  ExperimentResult result;
  const bool log_scale = cfg.task != TaskKind::MaxCsp;
  for (int t = 0; t < cfg.trials; ++t) {
    try {
      Instance inst = draw_instance(cfg, t);
      const Domains& domains = model_domains(inst.model);
      if (cfg.task == TaskKind::MaxCsp && !std::holds_alternative<CspProblem>(inst.model)) {
        throw ConfigError("task maxcsp needs a MARKOV constraint model");
      }
      if (cfg.task != TaskKind::MaxCsp && !std::holds_alternative<BeliefNetwork>(inst.model)) {
        throw ConfigError("probabilistic tasks need a BAYES model");
      }
      Task task = make_task(cfg.task, inst.query, inst.evidence);
      auto factors = restrict_all(model_factors(inst.model), inst.evidence);

      std::optional<std::vector<double>> exact;
      if (cfg.exact) {
        try {
          EliminationOptions eo;
          eo.max_factor_cells = cfg.exact_max_cells;
          exact = variable_elimination(factors, domains, task, std::nullopt, eo).values();
        } catch (const ResourceError&) {
          exact.reset();
        }
      }

      if (cfg.run_ad) {
        MethodOutput m;
        auto t0 = std::chrono::steady_clock::now();
        AdConfig ac;
        ac.i_bound = cfg.ad_ibound;
        ac.decompose.constants = cfg.constants;
        ac.direction = Direction::Upper;
        m.high = ad_run(factors, domains, task, ac).values;
        ac.direction = Direction::Lower;
        m.low = ad_run(factors, domains, task, ac).values;
        m.seconds = seconds_since(t0);
        for (std::size_t v = 0; v < m.low.size(); ++v) m.est.push_back(estimate(m.high[v], m.low[v], task));
        push_reports(result.trials, cfg, t, inst, "AD", cfg.ad_ibound, m, exact, false);
      }
      if (cfg.run_mb) {
        MethodOutput m;
        auto t0 = std::chrono::steady_clock::now();
        m.high = mb_run(factors, domains, task, MbConfig{cfg.mb_ibound, MbMode::Upper}).values;
        m.low = mb_run(factors, domains, task, MbConfig{cfg.mb_ibound, MbMode::Lower}).values;
        m.est = mb_run(factors, domains, task, MbConfig{cfg.mb_ibound, MbMode::Estimate}).values;
        m.seconds = seconds_since(t0);
        push_reports(result.trials, cfg, t, inst, "MB", cfg.mb_ibound, m, exact, true);
      }
    } catch (const Error& e) {
      std::string msg = "trial " + std::to_string(t) + ": " + e.what();
      switch (e.kind()) {
        case ErrorKind::Input: throw InputError(msg);
        case ErrorKind::Config: throw ConfigError(msg);
        case ErrorKind::Resource: throw ResourceError(msg);
        case ErrorKind::Internal: throw InternalError(msg);
      }
    }
  }
  result.aggregate = aggregate_reports(result.trials, log_scale);
  if (!cfg.records_path.empty()) {
    std::ofstream out(cfg.records_path);
    if (!out) throw InputError("cannot write records file '" + cfg.records_path + "'");
    write_records(out, result);
  }
  return result;
}

std::string format_table(const std::vector<BoundReport>& aggregate) {
  auto cell = [](double x) {
    if (std::isnan(x)) return std::string("-");
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", x);
    return std::string(buf);
  };
  const int w = 16;
  std::ostringstream os;
  os << std::left << std::setw(10) << "";
  for (const auto& a : aggregate) os << std::setw(w) << (a.method + "(i=" + std::to_string(a.ibound) + ")");
  os << "\n" << std::setw(10) << "";
  for (const auto& a : aggregate) os << std::setw(w) << a.quantity;
  os << "\n";
  auto row = [&](const char* name, auto get) {
    os << std::setw(10) << name;
    for (const auto& a : aggregate) os << std::setw(w) << get(a);
    os << "\n";
  };
  row("Low", [&](const BoundReport& a) { return cell(a.low.front()); });
  row("Est.", [&](const BoundReport& a) { return cell(a.est.front()); });
  row("High", [&](const BoundReport& a) { return cell(a.high.front()); });
  row("Exact", [&](const BoundReport& a) { return a.exact ? cell(a.exact->front()) : std::string("-"); });
  row("Est. eps", [&](const BoundReport& a) { return cell(a.est_eps); });
  row("Hi-Lo", [&](const BoundReport& a) { return cell(a.hi_lo); });
  row("Time", [&](const BoundReport& a) { return cell(a.elapsed_seconds) + "s"; });
  return os.str();
}

void write_records(std::ostream& out, const ExperimentResult& result) {
  auto num = [](double x) { return std::isnan(x) ? nlohmann::json(nullptr) : nlohmann::json(x); };
  auto emit = [&](const BoundReport& r) {
    nlohmann::json j;
    j["aggregate"] = r.aggregate;
    j["trial"] = r.trial;
    j["method"] = r.method;
    j["ibound"] = r.ibound;
    j["quantity"] = r.quantity;
    j["low"] = r.low;
    j["est"] = r.est;
    j["high"] = r.high;
    j["exact"] = r.exact ? nlohmann::json(*r.exact) : nlohmann::json(nullptr);
    j["est_eps"] = num(r.est_eps);
    j["hi_lo"] = num(r.hi_lo);
    j["elapsed_seconds"] = r.elapsed_seconds;
    if (!r.aggregate) {
      j["query"] = r.query;
      nlohmann::json ev = nlohmann::json::object();
      for (const auto& [v, x] : r.evidence) ev[std::to_string(v)] = x;
      j["evidence"] = ev;
    }
    out << j.dump() << "\n";
  };
  for (const auto& r : result.trials) emit(r);
  for (const auto& r : result.aggregate) emit(r);
}

}  // namespace adbound
