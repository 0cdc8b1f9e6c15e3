#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <stdexcept>

#include "bddcls/bdd.hpp"
#include "bddcls/bench.hpp"
#include "bddcls/engine.hpp"
#include "bddcls/formula.hpp"
#include "bddcls/selfcheck.hpp"
#include "bddcls/solver.hpp"

namespace py = pybind11;
using namespace bddcls;

namespace {

Assignment to_assignment(const std::vector<int> &values, int n) {
  if (static_cast<int>(values.size()) != n)
    throw std::invalid_argument("assignment length must equal the variable count");
  Assignment b(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (values[i] != 1 && values[i] != -1)
      throw std::invalid_argument("assignment entries must be -1 (True) or +1 (False)");
    b[i] = static_cast<std::int8_t>(values[i]);
  }
  return b;
}

std::vector<int> from_assignment(const Assignment &b) { return {b.begin(), b.end()}; }

void check_point(const std::vector<double> &a, int n) {
  if (static_cast<int>(a.size()) != n)
    throw std::invalid_argument("point length must equal the variable count");
}

WeightMap weights_or_ones(const std::optional<std::vector<double>> &w, std::size_t m) {
  return WeightMap(w ? *w : std::vector<double>(m, 1.0));
}

} // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Continuous local search for hybrid SAT/MaxSAT over shared BDDs.";

  py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);

  py::class_<Formula>(m, "Formula")
      .def_readonly("num_vars", &Formula::num_vars)
      .def_property_readonly("num_constraints", &Formula::size)
      .def_property_readonly("has_soft", &Formula::has_soft)
      .def_property_readonly("kinds",
                             [](const Formula &f) {
                               std::vector<std::string> out;
                               for (const auto &c : f.constraints)
                                 out.emplace_back(to_string(c.kind));
                               return out;
                             })
      .def("to_hbf", &to_hybrid)
      .def("__len__", &Formula::size);

  m.def("parse_hybrid", [](const std::string &s) { return parse_hybrid(s); });
  m.def("parse_dimacs_cnf", [](const std::string &s) { return parse_dimacs_cnf(s); });
  m.def("parse_wcnf", [](const std::string &s) { return parse_wcnf(s); });

  m.def(
      "check_formula",
      [](const Formula &f, const std::vector<int> &b, std::optional<std::vector<double>> w) {
        auto weights = w ? *w : std::vector<double>(f.size(), 1.0);
        auto r = check_formula(f, to_assignment(b, f.num_vars), weights);
        return py::make_tuple(r.satisfied_weight, r.unsatisfied);
      },
      py::arg("formula"), py::arg("assignment"), py::arg("weights") = py::none());

  py::class_<MrBdd>(m, "MrBdd")
      .def_property_readonly("node_count", &MrBdd::node_count)
      .def_property_readonly("num_vars", &MrBdd::num_vars)
      .def("stats",
           [](const MrBdd &b) {
             auto s = stats(b);
             py::dict d;
             d["shared_nodes"] = s.shared_nodes;
             d["sum_individual_nodes"] = s.sum_individual_nodes;
             d["reduction_ratio"] = s.reduction_ratio;
             return d;
           })
      .def(
          "top_down",
          [](const MrBdd &b, const std::vector<double> &a, std::optional<std::vector<double>> w) {
            check_point(a, b.num_vars());
            MessageBuffers buf;
            return top_down(b, a, weights_or_ones(w, b.entries().size()), buf);
          },
          py::arg("point"), py::arg("weights") = py::none())
      .def(
          "bottom_up",
          [](const MrBdd &b, const std::vector<double> &a, std::optional<std::vector<double>> w) {
            check_point(a, b.num_vars());
            MessageBuffers buf;
            return bottom_up(b, a, weights_or_ones(w, b.entries().size()), buf);
          },
          py::arg("point"), py::arg("weights") = py::none())
      .def(
          "gradient",
          [](const MrBdd &b, const std::vector<double> &a, std::optional<std::vector<double>> w) {
            check_point(a, b.num_vars());
            MessageBuffers buf;
            std::vector<double> g(a.size());
            double v = discrete_gradient(b, a, weights_or_ones(w, b.entries().size()), buf, g);
            return py::make_tuple(v, g);
          },
          py::arg("point"), py::arg("weights") = py::none())
      .def("cop",
           [](const MrBdd &b, int constraint_id, const std::vector<double> &p) {
             check_point(p, b.num_vars());
             if (constraint_id < 0 || constraint_id >= static_cast<int>(b.entries().size()))
               throw py::index_error("constraint id out of range");
             return cop(b, b.entry(constraint_id), p);
           })
      .def("to_dot", &MrBdd::to_dot);

  m.def("build_formula", &build_formula);

  m.def(
      "solve",
      [](const Formula &f, const std::string &mode, std::uint64_t seed, int restarts, int trials,
         double weight_factor, int roundings, double timeout, int threads) {
        SolverConfig cfg;
        cfg.mode = mode == "maxsat" ? Mode::MaxSat : Mode::Sat;
        cfg.seed = seed;
        cfg.restarts = restarts;
        cfg.trials_per_restart = trials;
        cfg.weight_factor = weight_factor;
        cfg.roundings = roundings;
        cfg.timeout = timeout;
        cfg.threads = threads;
        Solution s;
        {
          py::gil_scoped_release release;
          s = solve(f, cfg);
        }
        py::dict d;
        d["status"] = to_string(s.status);
        d["assignment"] = s.assignment ? py::cast(from_assignment(*s.assignment)) : py::none();
        d["best_objective"] = s.best_objective;
        d["best_cost"] = s.best_cost;
        d["trials"] = s.trials_used;
        d["restarts"] = s.restarts_used;
        d["wall_time"] = s.wall_time;
        d["gradient_calls"] = s.gradient_calls;
        return d;
      },
      py::arg("formula"), py::arg("mode") = "sat", py::arg("seed") = 0, py::arg("restarts") = 100,
      py::arg("trials") = 8, py::arg("weight_factor") = 2.0, py::arg("roundings") = 10,
      py::arg("timeout") = std::numeric_limits<double>::infinity(), py::arg("threads") = 1);

  m.def(
      "generate",
      [](const std::string &family, int n, double r_c, double r_x, double r_p, double delta,
         double r_v, int coef_type, bool plant, std::uint64_t seed, int index) {
        GenSpec spec;
        spec.family = parse_family(family);
        spec.n = n;
        spec.r_c = r_c;
        spec.r_x = r_x;
        spec.r_p = r_p;
        spec.delta = delta;
        spec.r_v = r_v;
        spec.coef_mode = coef_type == 2 ? CoefMode::PerVariable : CoefMode::PerOccurrence;
        spec.plant = plant;
        spec.seed = seed;
        Instance inst = generate(spec, index);
        py::object hidden = inst.hidden ? py::cast(from_assignment(*inst.hidden)) : py::none();
        return py::make_tuple(inst.formula, hidden);
      },
      py::arg("family"), py::arg("n") = 50, py::arg("r_c") = 0.0, py::arg("r_x") = 0.0,
      py::arg("r_p") = 0.0, py::arg("delta") = 0.2, py::arg("r_v") = 0.2, py::arg("coef_type") = 1,
      py::arg("plant") = false, py::arg("seed") = 0, py::arg("index") = 0);

  m.def(
      "selfcheck",
      [](std::uint64_t seed, int cases) {
        py::list out;
        for (const auto &s : run_selfcheck({seed, cases, false})) {
          py::dict d;
          d["name"] = s.name;
          d["cases"] = s.cases;
          d["failures"] = s.failures;
          d["max_error"] = s.max_error;
          out.append(d);
        }
        return out;
      },
      py::arg("seed") = 0, py::arg("cases") = 50);

  m.def("incomplete_score", &incomplete_score);
}
