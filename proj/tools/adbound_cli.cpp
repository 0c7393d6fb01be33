// Command-line front end: solve a model file, generate random instances, run benchmarks.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "adbound/elimination.hpp"
#include "adbound/engine.hpp"
#include "adbound/error.hpp"
#include "adbound/experiment.hpp"
#include "adbound/generators.hpp"
#include "adbound/io.hpp"
#include "adbound/minibuckets.hpp"

namespace {

using namespace adbound;

struct SolveArgs {
  std::string model, evidence, task = "pr", method = "ad", direction = "both";
  int ibound = 2;
  int query = 0;
  double z = -40.0;
  double coeff_floor = 1e-5;
};

struct GenArgs {
  std::string kind = "net", out;
  int roots = 5, children = 20, parents = 2, cardinality = 2;
  int vars = 15, constraints = 60;
  std::uint64_t seed = 1;
};

Task make_task(const std::string& name, VariableId q, Evidence ev) {
  if (name == "pr") return Task::belief(q, std::move(ev));
  if (name == "mpe") return Task::mpe(q, std::move(ev));
  return Task::max_csp(q, std::move(ev));
}

void print_row(int value, std::optional<double> low, std::optional<double> est, std::optional<double> high) {
  auto cell = [](std::optional<double> x) {
    if (!x) return std::string("-");
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.10g", *x);
    return std::string(buf);
  };
  std::cout << value << "\t" << cell(low) << "\t" << cell(est) << "\t" << cell(high) << "\n";
}

int run_solve(const SolveArgs& a) {
  Model model = parse_model(a.model);
  Evidence ev = a.evidence.empty() ? Evidence{} : parse_evidence(a.evidence);
  const Domains& domains = model_domains(model);
  Task task = make_task(a.task, a.query, ev);
  task.validate(domains);
  if ((task.kind() == TaskKind::MaxCsp) != std::holds_alternative<CspProblem>(model)) {
    throw ConfigError("task " + a.task + " does not match the model kind");
  }
  auto factors = restrict_all(model_factors(model), ev);
  const bool want_upper = a.direction != "lower";
  const bool want_lower = a.direction != "upper";

  std::vector<std::optional<double>> low(static_cast<std::size_t>(domains[static_cast<std::size_t>(a.query)]));
  auto high = low, est = low;
  if (a.method == "exact") {
    Factor r = variable_elimination(factors, domains, task);
    for (std::size_t v = 0; v < r.size(); ++v) est[v] = r[v];
  } else if (a.method == "ad") {
    AdConfig cfg;
    cfg.i_bound = a.ibound;
    cfg.decompose.constants.z = a.z;
    cfg.decompose.constants.coeff_floor = a.coeff_floor;
    cfg.decompose.constants.validate();
    if (want_upper) {
      cfg.direction = Direction::Upper;
      auto r = ad_run(factors, domains, task, cfg).values;
      for (std::size_t v = 0; v < r.size(); ++v) high[v] = r[v];
    }
    if (want_lower) {
      cfg.direction = Direction::Lower;
      auto r = ad_run(factors, domains, task, cfg).values;
      for (std::size_t v = 0; v < r.size(); ++v) low[v] = r[v];
    }
    if (want_upper && want_lower) {
      for (std::size_t v = 0; v < low.size(); ++v) est[v] = estimate(*high[v], *low[v], task);
    }
  } else {
    auto run = [&](MbMode mode) { return mb_run(factors, domains, task, MbConfig{a.ibound, mode}).values; };
    if (want_upper) {
      auto r = run(MbMode::Upper);
      for (std::size_t v = 0; v < r.size(); ++v) high[v] = r[v];
    }
    if (want_lower) {
      auto r = run(MbMode::Lower);
      for (std::size_t v = 0; v < r.size(); ++v) low[v] = r[v];
    }
    auto r = run(MbMode::Estimate);
    for (std::size_t v = 0; v < r.size(); ++v) est[v] = r[v];
  }
  std::cout << "value\tlow\test\thigh\n";
  for (std::size_t v = 0; v < low.size(); ++v) print_row(static_cast<int>(v), low[v], est[v], high[v]);
  return 0;
}

int run_gen(const GenArgs& a) {
  Model m = a.kind == "net" ? Model{gen_random_network(a.roots, a.children, a.parents, a.cardinality, a.seed)}
                            : Model{gen_random_maxcsp(a.vars, a.cardinality, a.constraints, a.seed)};
  if (a.out.empty() || a.out == "-") write_model(std::cout, m);
  else write_model(m, a.out);
  return 0;
}

int run_bench(const std::string& path) {
  ExperimentConfig cfg = load_experiment_config(path);
  ExperimentResult res = run_experiment(cfg);
  std::cout << format_table(res.aggregate);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bounded approximate inference for belief networks and MAX-CSP"};
  app.require_subcommand(1);

  SolveArgs sa;
  auto* solve = app.add_subcommand("solve", "Bound or compute a query value on a model file");
  solve->add_option("--model", sa.model, "Model file (BAYES or MARKOV text format)")->required();
  solve->add_option("--evidence", sa.evidence, "Evidence file: count then variable/value pairs");
  solve->add_option("--task", sa.task)->check(CLI::IsMember({"pr", "mpe", "maxcsp"}));
  solve->add_option("--method", sa.method)->check(CLI::IsMember({"ad", "mb", "exact"}));
  solve->add_option("--direction", sa.direction)->check(CLI::IsMember({"upper", "lower", "both"}));
  solve->add_option("--ibound", sa.ibound, "Neighbor bound (AD) or mini-bucket size (MB)");
  solve->add_option("--query", sa.query)->required();
  solve->add_option("--z", sa.z, "Stand-in for log10(0)");
  solve->add_option("--coeff-floor", sa.coeff_floor, "Smallest objective weight");

  GenArgs ga;
  auto* gen = app.add_subcommand("gen", "Write a random model");
  gen->add_option("--kind", ga.kind)->check(CLI::IsMember({"net", "maxcsp"}));
  gen->add_option("--roots", ga.roots);
  gen->add_option("--children", ga.children);
  gen->add_option("--parents", ga.parents);
  gen->add_option("--cardinality", ga.cardinality);
  gen->add_option("--vars", ga.vars);
  gen->add_option("--constraints", ga.constraints);
  gen->add_option("--seed", ga.seed);
  gen->add_option("--out", ga.out, "Output path; standard output when omitted");

  std::string config;
  auto* bench = app.add_subcommand("bench", "Run a benchmark described by a key=value file");
  bench->add_option("--config", config)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 3;
  }

  try {
    if (*solve) return run_solve(sa);
    if (*gen) return run_gen(ga);
    return run_bench(config);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code(e.kind());
  } catch (const std::bad_alloc&) {
    std::cerr << "error: out of memory\n";
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 1;
  }
}
