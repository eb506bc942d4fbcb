#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "scflp/bnc.hpp"
#include "scflp/combinatorics.hpp"
#include "scflp/oracle.hpp"
#include "scflp/verify.hpp"

namespace py = pybind11;
using namespace scflp;

namespace {

// Leader and follower choices cross the boundary as lists of open sites.
BinaryChoice choice(const Instance& inst, const std::vector<int>& sites) {
  for (int j : sites)
    if (j < 0 || j >= inst.n) throw py::index_error("site index out of range");
  return BinaryChoice::from_sites(inst.n, sites);
}

Instance from_lists(std::vector<double> w, const std::vector<std::vector<double>>& v, int p, int r) {
  const int m = static_cast<int>(v.size());
  const int n = m ? static_cast<int>(v.front().size()) : 0;
  Matrix mat(m, n);
  for (int i = 0; i < m; ++i) {
    if (static_cast<int>(v[static_cast<std::size_t>(i)].size()) != n) throw py::value_error("ragged attractiveness rows");
    for (int j = 0; j < n; ++j) mat(i, j) = v[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
  }
  return make_instance(std::move(w), std::move(mat), p, r);
}

std::vector<std::vector<double>> to_lists(const Matrix& mat) {
  std::vector<std::vector<double>> out(static_cast<std::size_t>(mat.rows()));
  for (int i = 0; i < mat.rows(); ++i) out[static_cast<std::size_t>(i)].assign(mat.row(i).begin(), mat.row(i).end());
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, mod) {
  mod.doc() = "Branch-and-cut solver, enumeration oracle and relaxation checks";

  py::register_exception<CapExceeded>(mod, "CapExceeded", PyExc_RuntimeError);

  py::class_<Instance>(mod, "Instance")
      .def(py::init(&from_lists), py::arg("w"), py::arg("v"), py::arg("p"), py::arg("r"))
      .def_readonly("m", &Instance::m)
      .def_readonly("n", &Instance::n)
      .def_readonly("p", &Instance::p)
      .def_readonly("r", &Instance::r)
      .def_property_readonly("w", [](const Instance& inst) { return inst.w; })
      .def_property_readonly("v", [](const Instance& inst) { return to_lists(inst.v); })
      .def("total_weight", &Instance::total_weight)
      .def("__repr__", [](const Instance& inst) {
        return "Instance(m=" + std::to_string(inst.m) + ", n=" + std::to_string(inst.n) + ", p=" +
               std::to_string(inst.p) + ", r=" + std::to_string(inst.r) + ")";
      });

  mod.def("load_instance", &load_instance_file, py::arg("path"));
  mod.def("save_instance", &save_instance_file, py::arg("instance"), py::arg("path"));
  mod.def("appendix_example", &appendix_example);
  mod.def(
      "generate_instance",
      [](const std::string& style, int m, int n, int p, int r, std::uint64_t seed) {
        return generate_instance({parse_generator_style(style), m, n, p, r, seed});
      },
      py::arg("style"), py::arg("m"), py::arg("n"), py::arg("p"), py::arg("r"), py::arg("seed") = 0);

  mod.def(
      "leader_share",
      [](const Instance& inst, const std::vector<int>& x, const std::vector<int>& y) {
        return leader_share(inst, choice(inst, x), choice(inst, y));
      },
      py::arg("instance"), py::arg("x"), py::arg("y"));
  mod.def(
      "follower_best_response",
      [](const Instance& inst, const std::vector<int>& x) {
        const auto best = follower_best_response(inst, choice(inst, x));
        return py::make_tuple(best.value, best.y.open_sites());
      },
      py::arg("instance"), py::arg("x"));

  py::class_<SolveReport>(mod, "SolveReport")
      .def_property_readonly("status", [](const SolveReport& r) { return to_string(r.status); })
      .def_property_readonly("x", [](const SolveReport& r) { return r.incumbent.open_sites(); })
      .def_readonly("objective", &SolveReport::objective)
      .def_readonly("upper_bound", &SolveReport::upper_bound)
      .def_readonly("gap_pct", &SolveReport::gap_pct)
      .def_readonly("nodes", &SolveReport::nodes)
      .def_readonly("cuts", &SolveReport::cuts)
      .def_readonly("root_bound", &SolveReport::root_bound)
      .def_readonly("root_gap_pct", &SolveReport::root_gap_pct)
      .def_readonly("separation_time", &SolveReport::separation_time)
      .def_readonly("total_time", &SolveReport::total_time);

  mod.def(
      "solve",
      [](const Instance& inst, const std::string& form, double time_limit, double gap, std::uint64_t seed) {
        BncConfig cfg;
        cfg.formulation = parse_formulation(form);
        cfg.time_limit = time_limit;
        cfg.gap = gap;
        cfg.seed = seed;
        py::gil_scoped_release release;
        return solve(inst, cfg);
      },
      py::arg("instance"), py::arg("form") = "GSF", py::arg("time_limit") = 7200.0, py::arg("gap") = 0.0,
      py::arg("seed") = 0);

  mod.def("root_gap_pct", &root_gap_pct, py::arg("root_bound"), py::arg("optimum"));

  mod.def(
      "brute_force_solve",
      [](const Instance& inst) {
        const auto rep = brute_force_solve(inst);
        std::vector<std::vector<int>> sets;
        for (const auto& x : rep.optimal) sets.push_back(x.open_sites());
        return py::make_tuple(rep.value, sets);
      },
      py::arg("instance"));

  mod.def(
      "full_lp_value", [](const Instance& inst, const std::string& form) { return full_lp_value(inst, parse_formulation(form)); },
      py::arg("instance"), py::arg("form"));

  mod.def(
      "verify_hull",
      [](const Instance& inst, const std::vector<int>& y, int trials, std::uint64_t seed) {
        return verify_hull(inst, choice(inst, y), {trials, seed, false}).max_discrepancy;
      },
      py::arg("instance"), py::arg("y"), py::arg("trials") = 200, py::arg("seed") = 0);
  mod.def(
      "verify_prop61",
      [](const Instance& inst, const std::vector<double>& x, const std::vector<int>& y) {
        const auto rep = verify_prop61(inst, x, choice(inst, y));
        return py::make_tuple(rep.anchor_minimum, rep.median_value, rep.discrepancy);
      },
      py::arg("instance"), py::arg("x"), py::arg("y"));
  mod.def(
      "verify_aggregation",
      [](const Instance& inst, int samples, std::uint64_t seed) {
        const auto rep = verify_aggregation(inst, {samples, seed, 40'000});
        return py::dict(py::arg("shared") = rep.shared_value, py::arg("disaggregated") = rep.disaggregated_value,
                        py::arg("discrepancy") = rep.discrepancy,
                        py::arg("greedy_discrepancy") = rep.max_greedy_discrepancy,
                        py::arg("dual_discrepancy") = rep.max_dual_discrepancy);
      },
      py::arg("instance"), py::arg("samples") = 10, py::arg("seed") = 0);
}
