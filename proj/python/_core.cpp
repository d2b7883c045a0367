#include "dpatch/analysis.hpp"
#include "dpatch/cli.hpp"
#include "dpatch/dynamics.hpp"
#include "dpatch/errors.hpp"
#include "dpatch/io.hpp"
#include "dpatch/mesh.hpp"
#include "dpatch/model.hpp"
#include "dpatch/oracle.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <numbers>
#include <sstream>

namespace py = pybind11;
using namespace dpatch;

namespace {

std::vector<std::string> role_names(const std::vector<NodeRole>& roles) {
    std::vector<std::string> out;
    for (auto r : roles) out.emplace_back(to_string(r));
    return out;
}

ProblemSpec make_problem(double x_lo, double x_hi, double eps1, double eps2, const std::string& ic,
                         double ic_param, double bc_left, double bc_right, double t_final) {
    ProblemSpec p;
    p.x_lo = x_lo;
    p.x_hi = x_hi;
    p.diffusivity = Diffusivity(eps1, eps2);
    p.initial = {InitialCondition::parse_family(ic), ic_param};
    p.bc_left = bc_left;
    p.bc_right = bc_right;
    p.final_time = t_final;
    p.validate();
    return p;
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Patch dynamics with a double patch for the modified Burgers equation";

    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
    py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
    py::register_exception<NumericalError>(m, "NumericalError", PyExc_ArithmeticError);

    py::class_<ProblemSpec>(m, "Problem")
        .def(py::init(&make_problem), py::kw_only(), py::arg("x_lo") = -std::numbers::pi,
             py::arg("x_hi") = std::numbers::pi, py::arg("eps1") = 0.001, py::arg("eps2") = 0.0,
             py::arg("ic") = "sine", py::arg("ic_param") = 1.0, py::arg("bc_left") = 0.0,
             py::arg("bc_right") = 0.0, py::arg("t_final") = 3.0)
        .def_readonly("x_lo", &ProblemSpec::x_lo)
        .def_readonly("x_hi", &ProblemSpec::x_hi)
        .def_readonly("bc_left", &ProblemSpec::bc_left)
        .def_readonly("bc_right", &ProblemSpec::bc_right)
        .def_readonly("t_final", &ProblemSpec::final_time)
        .def_property_readonly("eps1", [](const ProblemSpec& p) { return p.diffusivity.eps1(); })
        .def_property_readonly("eps2", [](const ProblemSpec& p) { return p.diffusivity.eps2(); })
        .def_property_readonly("ic", [](const ProblemSpec& p) { return std::string(p.initial.family_name()); })
        .def("initial", [](const ProblemSpec& p, double x) { return p.initial(x); }, py::arg("x"))
        .def("eps", [](const ProblemSpec& p, double u) { return p.diffusivity(u); }, py::arg("u"));

    m.def("archetypes", [] {
        std::vector<std::string> out;
        for (auto id : all_archetypes) out.emplace_back(to_string(id));
        return out;
    });
    m.def("archetype", [](const std::string& name) { return make_archetype(parse_archetype(name)); },
          py::arg("name"));
    m.def("smooth_convergence_problem", &smooth_convergence_problem);

    py::class_<PatchLayout>(m, "Layout")
        .def_property_readonly("x_lo", &PatchLayout::x_lo)
        .def_property_readonly("x_hi", &PatchLayout::x_hi)
        .def_property_readonly("gamma", &PatchLayout::gamma)
        .def_property_readonly("patch_count", [](const PatchLayout& l) { return l.patches().size(); })
        .def_property_readonly("has_double_patch", [](const PatchLayout& l) { return l.double_index().has_value(); })
        .def_property_readonly("total_points", &PatchLayout::total_points)
        .def_property_readonly("simulated_fraction", &PatchLayout::simulated_fraction)
        .def_property_readonly("node_positions",
                               [](const PatchLayout& l) {
                                   std::vector<double> out;
                                   for (const auto& n : l.macro_nodes()) out.push_back(n.position);
                                   return out;
                               })
        .def_property_readonly("node_roles",
                               [](const PatchLayout& l) {
                                   std::vector<std::string> out;
                                   for (const auto& n : l.macro_nodes()) out.emplace_back(to_string(n.role));
                                   return out;
                               })
        .def("without_double_patch", &PatchLayout::without_double_patch)
        .def("with_gamma", &PatchLayout::with_gamma, py::arg("gamma"));

    m.def("archetype_layout", [](const std::string& name) { return archetype_layout(parse_archetype(name)); },
          py::arg("name"));
    m.def("uniform_layout", &uniform_layout, py::arg("x_lo"), py::arg("x_hi"), py::arg("intervals"),
          py::arg("half_points"), py::arg("dx"), py::arg("gamma"));

    py::class_<MacroTrajectory>(m, "MacroTrajectory")
        .def_readonly("times", &MacroTrajectory::times)
        .def_readonly("positions", &MacroTrajectory::positions)
        .def_property_readonly("roles", [](const MacroTrajectory& t) { return role_names(t.roles); })
        .def_readonly("values", &MacroTrajectory::values)
        .def("to_csv", [](const MacroTrajectory& t) {
            std::ostringstream os;
            io::write_macro_csv(os, t);
            return os.str();
        });

    m.def(
        "simulate",
        [](const ProblemSpec& problem, const PatchLayout& layout, std::vector<double> times, int output_count,
           double dt, double safety) {
            StepperConfig cfg;
            cfg.dt = dt;
            cfg.safety = safety;
            cfg.output_times = times.empty() ? uniform_times(problem.final_time, output_count) : std::move(times);
            py::gil_scoped_release release;
            return MacroTrajectory::from(simulate(problem, layout, cfg));
        },
        py::arg("problem"), py::arg("layout"), py::kw_only(), py::arg("times") = std::vector<double>{},
        py::arg("output_count") = 61, py::arg("dt") = 0.0, py::arg("safety") = 0.5);
    m.def("default_dt", &default_dt, py::arg("layout"), py::arg("problem"), py::arg("safety") = 0.5);

    py::class_<TrustedSolution>(m, "TrustedSolution")
        .def("evaluate", &TrustedSolution::evaluate, py::arg("x"), py::arg("t"))
        .def_property_readonly("name", &TrustedSolution::name);

    py::class_<ColeHopfOracle, TrustedSolution>(m, "QuadratureOracle")
        .def(py::init([](const ProblemSpec& p, double rel_tol) {
                 QuadratureConfig cfg;
                 cfg.quad_rel_tol = rel_tol;
                 return ColeHopfOracle(p, cfg);
             }),
             py::arg("problem"), py::arg("rel_tol") = QuadratureConfig{}.quad_rel_tol);

    py::class_<FineGridSolution, TrustedSolution>(m, "FineGridSolution")
        .def_property_readonly("grid", &FineGridSolution::grid)
        .def_property_readonly("times", &FineGridSolution::times)
        .def("snapshot", &FineGridSolution::snapshot, py::arg("k"));

    m.def(
        "brute_force_solve",
        [](const ProblemSpec& problem, std::vector<double> times, int points, double dt) {
            FineGridConfig cfg;
            cfg.points = points;
            cfg.dt = dt;
            cfg.snapshot_times = std::move(times);
            py::gil_scoped_release release;
            return brute_force_solve(problem, cfg);
        },
        py::arg("problem"), py::arg("times"), py::kw_only(), py::arg("points") = 1600, py::arg("dt") = 0.0);

    py::class_<ErrorReport>(m, "ErrorReport")
        .def_readonly("times", &ErrorReport::times)
        .def_readonly("max_per_time", &ErrorReport::max_per_time)
        .def_readonly("positions", &ErrorReport::positions)
        .def_readonly("max_per_node", &ErrorReport::max_per_node)
        .def_readonly("global_max", &ErrorReport::global_max)
        .def_readonly("outside_double_max", &ErrorReport::outside_double_max)
        .def_property_readonly("worst_time", [](const ErrorReport& r) { return r.worst.time; })
        .def_property_readonly("worst_position", [](const ErrorReport& r) { return r.worst.position; });

    m.def(
        "max_error",
        [](const MacroTrajectory& traj, const TrustedSolution& oracle, std::vector<double> times) {
            py::gil_scoped_release release;
            return max_error(traj, oracle, times);
        },
        py::arg("trajectory"), py::arg("oracle"), py::arg("times") = std::vector<double>{});

    py::class_<ConvergenceReport>(m, "ConvergenceReport")
        .def_readonly("gamma", &ConvergenceReport::gamma)
        .def_readonly("spacings", &ConvergenceReport::spacings)
        .def_readonly("errors", &ConvergenceReport::errors)
        .def_readonly("slope", &ConvergenceReport::slope)
        .def_readonly("exact", &ConvergenceReport::exact)
        .def_readonly("monotone", &ConvergenceReport::monotone)
        .def_readonly("micro_dx", &ConvergenceReport::micro_dx);

    m.def(
        "convergence_study",
        [](const ProblemSpec& problem, int gamma, std::vector<double> spacings) {
            ConvergenceConfig cfg;
            cfg.spacings = spacings.empty() ? default_spacings(problem) : std::move(spacings);
            py::gil_scoped_release release;
            return convergence_study(problem, gamma, cfg);
        },
        py::arg("problem"), py::arg("gamma"), py::arg("spacings") = std::vector<double>{});

    m.def(
        "run_cli",
        [](std::vector<std::string> args) {
            args.insert(args.begin(), "dpatch");
            std::ostringstream out, err;
            const int code = run_cli(args, out, err);
            return py::make_tuple(code, out.str(), err.str());
        },
        py::arg("args"), "Run the command-line tool in-process; returns (exit code, stdout, stderr).");
}
