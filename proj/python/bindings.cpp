#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <map>
#include <optional>
#include <sstream>

#include "adbound/elimination.hpp"
#include "adbound/engine.hpp"
#include "adbound/error.hpp"
#include "adbound/experiment.hpp"
#include "adbound/generators.hpp"
#include "adbound/io.hpp"
#include "adbound/minibuckets.hpp"
#include "adbound/oracle.hpp"

namespace py = pybind11;
using namespace adbound;

namespace {

// Holder so the model variant is exposed as one opaque class.
struct PyModel {
  Model m;
};

Task make_task(const std::string& name, VariableId q, const std::map<int, int>& ev) {
  Evidence e(ev.begin(), ev.end());
  if (name == "pr") return Task::belief(q, e);
  if (name == "mpe") return Task::mpe(q, e);
  if (name == "maxcsp") return Task::max_csp(q, e);
  throw ConfigError("unknown task '" + name + "', expected pr, mpe or maxcsp");
}

struct Prepared {
  Task task;
  std::vector<Factor> factors;
};

Prepared prepare(const Model& m, VariableId q, const std::string& task_name, const std::map<int, int>& ev) {
  Task task = make_task(task_name, q, ev);
  task.validate(model_domains(m));
  if ((task.kind() == TaskKind::MaxCsp) != std::holds_alternative<CspProblem>(m)) {
    throw ConfigError("task " + task_name + " does not match the model kind");
  }
  return {task, restrict_all(model_factors(m), task.evidence)};
}

Direction parse_direction(const std::string& d) {
  if (d == "upper") return Direction::Upper;
  if (d == "lower") return Direction::Lower;
  throw ConfigError("direction must be upper or lower");
}

MbMode parse_mode(const std::string& d) {
  if (d == "upper") return MbMode::Upper;
  if (d == "lower") return MbMode::Lower;
  if (d == "estimate") return MbMode::Estimate;
  throw ConfigError("mode must be upper, lower or estimate");
}

}  // namespace

PYBIND11_MODULE(_adbound, m) {
  m.doc() = "Bounds on belief, MPE and MAX-CSP queries by width-limited elimination";

  auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<InputError>(m, "InputError", base.ptr());
  py::register_exception<ConfigError>(m, "ConfigError", base.ptr());
  py::register_exception<ResourceError>(m, "ResourceError", base.ptr());
  py::register_exception<InternalError>(m, "InternalError", base.ptr());

  py::class_<PyModel>(m, "Model")
      .def_static(
          "load", [](const std::string& path) { return PyModel{parse_model(path)}; }, py::arg("path"),
          "Read a BAYES or MARKOV model file.")
      .def_static(
          "from_text",
          [](const std::string& text) {
            std::istringstream in(text);
            return PyModel{read_model(in)};
          },
          py::arg("text"))
      .def_static(
          "random_network",
          [](int roots, int children, int parents, int cardinality, std::uint64_t seed) {
            return PyModel{gen_random_network(roots, children, parents, cardinality, seed)};
          },
          py::arg("roots"), py::arg("children"), py::arg("parents"), py::arg("cardinality") = 2, py::arg("seed") = 1)
      .def_static(
          "random_maxcsp",
          [](int vars, int cardinality, int constraints, std::uint64_t seed) {
            return PyModel{gen_random_maxcsp(vars, cardinality, constraints, seed)};
          },
          py::arg("vars"), py::arg("cardinality"), py::arg("constraints"), py::arg("seed") = 1)
      .def_property_readonly("domains", [](const PyModel& x) { return model_domains(x.m); })
      .def_property_readonly("num_factors", [](const PyModel& x) { return model_factors(x.m).size(); })
      .def_property_readonly("is_network", [](const PyModel& x) { return std::holds_alternative<BeliefNetwork>(x.m); })
      .def("to_text",
           [](const PyModel& x) {
             std::ostringstream out;
             write_model(out, x.m);
             return out.str();
           })
      .def(
          "save", [](const PyModel& x, const std::string& path) { write_model(x.m, path); }, py::arg("path"));

  m.def(
      "exact",
      [](const PyModel& pm, int query, const std::string& task, const std::map<int, int>& evidence) {
        const Model& model = pm.m;
        auto p = prepare(model, query, task, evidence);
        return variable_elimination(p.factors, model_domains(model), p.task).values();
      },
      py::arg("model"), py::arg("query"), py::arg("task") = "pr", py::arg("evidence") = std::map<int, int>{},
      "Exact query values by variable elimination.");

  m.def(
      "brute_force",
      [](const PyModel& pm, int query, const std::string& task, const std::map<int, int>& evidence) {
        const Model& model = pm.m;
        auto p = prepare(model, query, task, evidence);
        return brute_force(model_factors(model), model_domains(model), p.task).values();
      },
      py::arg("model"), py::arg("query"), py::arg("task") = "pr", py::arg("evidence") = std::map<int, int>{},
      "Exact query values by enumerating every assignment.");

  m.def(
      "ad_bound",
      [](const PyModel& pm, int query, const std::string& task, const std::string& direction, int ibound,
         const std::map<int, int>& evidence, double z, double coeff_floor) {
        const Model& model = pm.m;
        auto p = prepare(model, query, task, evidence);
        AdConfig cfg;
        cfg.i_bound = ibound;
        cfg.direction = parse_direction(direction);
        cfg.decompose.constants.z = z;
        cfg.decompose.constants.coeff_floor = coeff_floor;
        BoundValue r = ad_run(p.factors, model_domains(model), p.task, cfg);
        py::dict out;
        out["values"] = r.values;
        out["order"] = r.stats.order;
        out["decompositions"] = r.stats.decompositions;
        out["deleted_edges"] = r.stats.deleted_edges;
        out["lp_iterations"] = r.stats.lp_iterations;
        out["max_created_arity"] = r.stats.max_created_arity;
        return out;
      },
      py::arg("model"), py::arg("query"), py::arg("task") = "pr", py::arg("direction") = "upper", py::arg("ibound") = 2,
      py::arg("evidence") = std::map<int, int>{}, py::arg("z") = -40.0, py::arg("coeff_floor") = 1e-5,
      "One-sided bound per query value from approximate decomposition.");

  m.def(
      "mb_bound",
      [](const PyModel& pm, int query, const std::string& task, const std::string& mode, int ibound,
         const std::map<int, int>& evidence) {
        const Model& model = pm.m;
        auto p = prepare(model, query, task, evidence);
        return mb_run(p.factors, model_domains(model), p.task, MbConfig{ibound, parse_mode(mode)}).values;
      },
      py::arg("model"), py::arg("query"), py::arg("task") = "pr", py::arg("mode") = "upper", py::arg("ibound") = 3,
      py::arg("evidence") = std::map<int, int>{}, "Mini-bucket bound or estimate per query value.");

  m.def(
      "conditional_bounds",
      [](const std::vector<double>& uppers, const std::vector<double>& lowers) -> py::object {
        auto c = bound_conditional(uppers, lowers);
        if (!c) return py::none();
        return py::make_tuple(c->low, c->high);
      },
      py::arg("uppers"), py::arg("lowers"), "(low, high) bounds on P(q | e) from bounds on P(q, e).");

  m.def(
      "_run_benchmark",
      [](const std::string& text) {
        std::istringstream in(text);
        ExperimentConfig cfg = parse_experiment_config(in);
        ExperimentResult res = run_experiment(cfg);
        std::ostringstream rec;
        write_records(rec, res);
        return py::make_tuple(format_table(res.aggregate), rec.str());
      },
      py::arg("config_text"));
}
