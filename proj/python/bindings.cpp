#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <sstream>

#include "shelab/cli.hpp"
#include "shelab/config.hpp"
#include "shelab/errors.hpp"
#include "shelab/experiments.hpp"
#include "shelab/kernels.hpp"
#include "shelab/noise.hpp"
#include "shelab/simulator.hpp"
#include "shelab/volterra.hpp"
#include "shelab/walk_models.hpp"

namespace py = pybind11;
using namespace shelab;

PYBIND11_MODULE(_shelab, m) {
    m.doc() = "Lattice stochastic heat equation: kernels, noise, simulation and experiments";

    py::register_exception<Error>(m, "Error");
    py::register_exception<InvalidArgument>(m, "InvalidArgument", PyExc_ValueError);
    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
    py::register_exception<SimulationAborted>(m, "SimulationAborted");
    py::register_exception<FitFailure>(m, "FitFailure");
    py::register_exception<PreconditionViolation>(m, "PreconditionViolation");

    py::enum_<TailMode>(m, "TailMode")
        .value("redistribute", TailMode::redistribute)
        .value("alias", TailMode::alias);

    py::class_<WalkModel>(m, "WalkModel")
        .def_readonly("alpha", &WalkModel::alpha)
        .def_readonly("nu", &WalkModel::nu)
        .def_readonly("a", &WalkModel::a)
        .def_readonly("family", &WalkModel::family)
        .def_property_readonly("radius", [](const WalkModel& w) { return w.measure.radius(); })
        .def_property_readonly("removed_tail_mass", [](const WalkModel& w) { return w.measure.removed_tail_mass; })
        .def("mass", [](const WalkModel& w, long j) { return w.measure.mass(j); })
        .def("total_mass", [](const WalkModel& w) { return w.measure.total_mass(); })
        .def("__repr__", [](const WalkModel& w) {
            return "WalkModel(" + w.family + ", alpha=" + std::to_string(w.alpha) + ")";
        });

    m.def("make_simple_walk", &make_simple_walk);
    m.def("make_stable_tail_walk", &make_stable_tail_walk, py::arg("alpha"), py::arg("truncation_radius"),
          py::arg("box_size"), py::arg("mode") = TailMode::redistribute, py::arg("strict") = false);
    m.def("char_fn", &char_fn);
    m.def("one_minus_char_fn", &one_minus_char_fn);
    m.def("generator_apply", [](const WalkModel& w, const std::vector<double>& f) { return generator_apply(w, f); });

    py::class_<AssumptionReport>(m, "AssumptionReport")
        .def_readonly("nu_hat", &AssumptionReport::nu_hat)
        .def_readonly("a_hat", &AssumptionReport::a_hat)
        .def_readonly("max_unit_violation", &AssumptionReport::max_unit_violation)
        .def_readonly("fit_misfit", &AssumptionReport::fit_misfit)
        .def_readonly("truncation_tail_mass", &AssumptionReport::truncation_tail_mass);
    m.def("verify_assumption", [](const WalkModel& w, std::optional<std::vector<double>> grid) {
        const auto z = grid ? *grid : default_assumption_grid();
        return verify_assumption(w, z);
    }, py::arg("model"), py::arg("z_grid") = py::none());

    py::class_<StableKernel>(m, "StableKernel")
        .def(py::init([](double alpha, double nu) { return StableKernel{alpha, nu}; }), py::arg("alpha"),
             py::arg("nu"))
        .def_readonly("alpha", &StableKernel::alpha)
        .def_readonly("nu", &StableKernel::nu);
    m.def("stable_density", &stable_density);
    m.def("stable_density_grid", &stable_density_grid);
    m.def("discrete_transition", [](const WalkModel& w, double eps, double t, std::size_t n) {
        return discrete_transition(w, eps, t, n).values();
    });

    py::class_<KernelIdentityReport>(m, "KernelIdentityReport")
        .def_readonly("normalization_error", &KernelIdentityReport::normalization_error)
        .def_readonly("l2_relative_error", &KernelIdentityReport::l2_relative_error)
        .def_readonly("semigroup_sup_error", &KernelIdentityReport::semigroup_sup_error)
        .def_readonly("gaussian_error", &KernelIdentityReport::gaussian_error);
    m.def("kernel_identity_report", &kernel_identity_report);

    py::class_<LcltErrorReport>(m, "LcltErrorReport")
        .def_readonly("sup_error", &LcltErrorReport::sup_error)
        .def_readonly("bound_value", &LcltErrorReport::bound_value)
        .def_property_readonly("regime", [](const LcltErrorReport& r) { return to_string(r.regime); });
    m.def("lclt_sup_error", [](const WalkModel& w, double eps, double t, std::size_t n) {
        return lclt_sup_error(w, eps, t, n);
    });
    m.def("kernel_l2_difference", &kernel_l2_difference, py::arg("model"), py::arg("eps"), py::arg("T"),
          py::arg("n") = 0);
    m.def("sum_squared_transition", &sum_squared_transition);
    m.def("green_function_bound", &green_function_bound);

    m.def("standard_normal", &standard_normal);

    py::enum_<SigmaKind>(m, "SigmaKind")
        .value("linear", SigmaKind::linear)
        .value("abs_linear", SigmaKind::abs_linear)
        .value("clipped_linear", SigmaKind::clipped_linear)
        .value("affine_bounded", SigmaKind::affine_bounded);
    py::class_<SigmaSpec>(m, "SigmaSpec")
        .def(py::init([](SigmaKind kind, double lambda, double clip) { return SigmaSpec{kind, lambda, clip}; }),
             py::arg("kind") = SigmaKind::linear, py::arg("lam") = 1.0, py::arg("clip") = 1.0)
        .def("__call__", &SigmaSpec::operator())
        .def_readwrite("kind", &SigmaSpec::kind)
        .def_readwrite("lam", &SigmaSpec::lambda)
        .def_readwrite("clip", &SigmaSpec::clip);

    py::enum_<Scheme>(m, "Scheme").value("euler", Scheme::euler).value("splitstep", Scheme::splitstep);
    py::class_<SheConfig>(m, "SheConfig")
        .def(py::init<>())
        .def_readwrite("walk", &SheConfig::walk)
        .def_readwrite("eps", &SheConfig::eps)
        .def_readwrite("dt", &SheConfig::dt)
        .def_readwrite("T", &SheConfig::T)
        .def_readwrite("n", &SheConfig::n)
        .def_readwrite("sigma", &SheConfig::sigma)
        .def_readwrite("scheme", &SheConfig::scheme)
        .def_readwrite("seed", &SheConfig::seed)
        .def_readwrite("replica", &SheConfig::replica)
        .def_readwrite("snapshot_times", &SheConfig::snapshot_times);

    py::class_<SimulationResult>(m, "SimulationResult")
        .def_property_readonly("field", [](const SimulationResult& r) { return r.final_state.values; })
        .def_property_readonly("t", [](const SimulationResult& r) { return r.final_state.t; })
        .def_property_readonly("snapshots", [](const SimulationResult& r) {
            std::vector<std::pair<double, std::vector<double>>> out;
            for (const auto& s : r.snapshots) out.emplace_back(s.t, s.values);
            return out;
        })
        .def_readonly("dt", &SimulationResult::dt)
        .def_readonly("steps", &SimulationResult::steps)
        .def_readonly("negative_fraction", &SimulationResult::negative_fraction);
    m.def("simulate", &simulate, py::call_guard<py::gil_scoped_release>());
    m.def("simulate_coupled", [](const SheConfig& fine, const SheConfig& coarse) {
        py::gil_scoped_release release;
        return simulate_coupled(fine, coarse).sup_difference;
    });

    py::class_<VolterraOracle>(m, "VolterraOracle")
        .def("__call__", &VolterraOracle::operator())
        .def("log_slope", &VolterraOracle::log_slope)
        .def_readonly("h", &VolterraOracle::h);
    m.def("pam_second_moment_oracle", &pam_second_moment_oracle, py::arg("nu"), py::arg("lam"), py::arg("T"),
          py::arg("h") = 1e-3, py::arg("check") = true);

    py::class_<MomentSpec>(m, "MomentSpec")
        .def(py::init([](std::vector<long> points, int power, bool avg) { return MomentSpec{points, power, avg}; }),
             py::arg("points") = std::vector<long>{0}, py::arg("power") = 1, py::arg("translation_average") = false)
        .def("value", [](const MomentSpec& s, std::vector<double> f) { return s.value(f); });
    py::class_<MomentReport>(m, "MomentReport")
        .def_readonly("estimate", &MomentReport::estimate)
        .def_readonly("std_error", &MomentReport::std_error)
        .def_readonly("aborted", &MomentReport::aborted)
        .def_readonly("samples", &MomentReport::samples);
    m.def("estimate_moment", &estimate_moment, py::call_guard<py::gil_scoped_release>());
    py::class_<ComparisonReport>(m, "ComparisonReport")
        .def_readonly("lower", &ComparisonReport::lower)
        .def_readonly("upper", &ComparisonReport::upper)
        .def_readonly("paired_difference", &ComparisonReport::paired_difference)
        .def_readonly("paired_std_error", &ComparisonReport::paired_std_error)
        .def_readonly("ordered", &ComparisonReport::ordered)
        .def_readonly("strict", &ComparisonReport::strict)
        .def_readonly("identical", &ComparisonReport::identical);
    m.def("compare_moments", &compare_moments, py::call_guard<py::gil_scoped_release>());
    m.def("lyapunov_lower_bound", &lyapunov_lower_bound);
    m.def("lyapunov_upper_bound", &lyapunov_upper_bound);

    m.def("parse_config", [](const std::string& text) { return echo_config(parse_config(text)); },
          "Parses a config and returns its fully resolved echo");
    m.def("run", [](const std::string& subcommand, const std::string& config_text) {
        const auto config = parse_config(config_text);
        std::ostringstream log;
        int status;
        {
            py::gil_scoped_release release;
            status = run(subcommand, config, log);
        }
        return std::make_pair(status, log.str());
    }, py::arg("subcommand"), py::arg("config_text"));
    m.attr("subcommands") = subcommands();
}
