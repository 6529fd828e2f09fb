#include <switchocp/instancegen.hpp>
#include <switchocp/outerloop.hpp>
#include <switchocp/switchpoly.hpp>

#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <algorithm>
#include <optional>
#include <stdexcept>
#include <string>

namespace py = pybind11;
using namespace switchocp;

namespace {

py::dict log_to_dict(const std::vector<BoundLogRecord>& log) {
    py::list iteration, cpu, bound, violation, cuts, bv, newton;
    for (const auto& r : log) {
        iteration.append(r.iteration);
        cpu.append(r.cpu_seconds);
        bound.append(r.lower_bound);
        violation.append(r.max_violation);
        cuts.append(r.num_cuts);
        bv.append(*std::max_element(r.bv_seminorm.begin(), r.bv_seminorm.end()));
        newton.append(r.newton_iterations);
    }
    py::dict d;
    d["iteration"] = iteration;
    d["cpu_seconds"] = cpu;
    d["lower_bound"] = bound;
    d["max_violation"] = violation;
    d["num_cuts"] = cuts;
    d["bv_seminorm"] = bv;
    d["newton_iterations"] = newton;
    return d;
}

py::object separation_to_py(const std::optional<Separation>& sep) {
    if (!sep) return py::none();
    py::dict d;
    d["coefficients"] = Eigen::VectorXd(sep->cut.coefficients);
    d["rhs"] = sep->cut.rhs;
    d["support"] = sep->cut.support;
    d["violation"] = sep->violation;
    return d;
}

}  // namespace

PYBIND11_MODULE(_switchocp, m) {
    m.doc() = "Outer approximation for parabolic optimal control with switching constraints";

    py::class_<InstanceSpec>(m, "InstanceSpec")
        .def(py::init<>())
        .def_readwrite("seed", &InstanceSpec::seed)
        .def_readwrite("horizon", &InstanceSpec::horizon)
        .def_readwrite("jumps", &InstanceSpec::jumps)
        .def_readwrite("nt_fine", &InstanceSpec::nt_fine)
        .def_readwrite("nx", &InstanceSpec::nx)
        .def_readwrite("alpha", &InstanceSpec::alpha)
        .def_readwrite("form", &InstanceSpec::form)
        .def("__eq__", [](const InstanceSpec& a, const InstanceSpec& b) { return a == b; })
        .def("__repr__", [](const InstanceSpec& s) { return "InstanceSpec(\n" + format_spec(s) + ")"; });

    m.def("format_spec", &format_spec);
    m.def("parse_spec", &parse_spec);
    m.def("read_spec", &read_spec);
    m.def("write_spec", &write_spec);

    m.def("shift_count", [](const std::vector<double>& w) { return shift_count(w); });
    m.def(
        "enumerate_vertices",
        [](int length, int sigma_max) { return enumerate_vertices(length, SwitchingBudget{sigma_max}); },
        py::arg("length"), py::arg("sigma_max"));
    m.def(
        "separate",
        [](const std::vector<double>& w, int sigma_max) { return separation_to_py(separate(w, SwitchingBudget{sigma_max})); },
        py::arg("w"), py::arg("sigma_max"),
        "Most violated alternating inequality as a dict, or None.");
    m.def(
        "separate_bruteforce",
        [](const std::vector<double>& w, int sigma_max) {
            return separation_to_py(separate_bruteforce(w, SwitchingBudget{sigma_max}));
        },
        py::arg("w"), py::arg("sigma_max"));

    m.def(
        "desired_control",
        [](const InstanceSpec& spec, int nt) { return Eigen::VectorXd(restrict_control(build_instance(spec), nt).values()); },
        py::arg("spec"), py::arg("nt"), "u_d averaged over a uniform grid with nt intervals.");

    m.def(
        "objective_and_gradient",
        [](const InstanceSpec& spec, int nt, const Eigen::VectorXd& u, double alpha) {
            const TrackingProblem problem = coarse_problem(build_instance(spec), nt, alpha);
            const auto eval = objective_and_gradient(problem, Control(problem.ops->grid(), 1, u));
            return py::make_tuple(eval.value, Eigen::VectorXd(eval.gradient.values()));
        },
        py::arg("spec"), py::arg("nt"), py::arg("u"), py::arg("alpha"));

    m.def(
        "run",
        [](const InstanceSpec& spec, int nt, double alpha, int sigma_max, int max_cuts, const std::string& projection,
           bool warm_start, bool batch_cuts) {
            OuterConfig config;
            config.alpha = alpha;
            config.budget = SwitchingBudget{sigma_max};
            config.max_cuts = max_cuts;
            if (projection == "grid") config.projection = ProjectionStrategy::grid;
            else if (projection == "dyadic") config.projection = ProjectionStrategy::dyadic;
            else throw std::invalid_argument("projection must be 'grid' or 'dyadic'");
            config.warm_start = warm_start;
            config.batch_cuts = batch_cuts;
            std::optional<OuterResult> outcome;
            {
                py::gil_scoped_release release;
                outcome = run(coarse_problem(build_instance(spec), nt, alpha), config);
            }
            const OuterResult& result = *outcome;
            py::dict d;
            d["status"] = std::string(to_string(result.status));
            d["log"] = log_to_dict(result.log);
            d["u"] = Eigen::VectorXd(result.final.u.values());
            d["lambda"] = Eigen::VectorXd(result.final.lambda);
            d["message"] = result.final.message;
            return d;
        },
        py::arg("spec"), py::arg("nt"), py::arg("alpha") = 1e-2, py::arg("sigma_max") = 2, py::arg("max_cuts") = 200,
        py::arg("projection") = "grid", py::arg("warm_start") = true, py::arg("batch_cuts") = false,
        "Outer approximation on the instance restricted to nt intervals.");
}
