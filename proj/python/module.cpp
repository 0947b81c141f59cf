#include "saltlab/advection.hpp"
#include "saltlab/checks.hpp"
#include "saltlab/config.hpp"
#include "saltlab/initial_conditions.hpp"
#include "saltlab/paths.hpp"
#include "saltlab/runner.hpp"
#include "saltlab/salt_euler.hpp"
#include "saltlab/salt_rsw.hpp"
#include "saltlab/stratonovich.hpp"

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

namespace py = pybind11;
using namespace saltlab;

namespace {

using Array = py::array_t<double, py::array::c_style | py::array::forcecast>;

py::array_t<double> to_numpy(const ScalarField& f) {
    py::array_t<double> out({f.grid().nx(), f.grid().ny()});
    std::copy(f.values().begin(), f.values().end(), out.mutable_data());
    return out;
}

ScalarField from_numpy(const Array& a) {
    if (a.ndim() != 2) throw py::value_error("expected a 2-D array indexed [i, j] with x = i * 2pi / nx");
    const Grid2D g(std::size_t(a.shape(0)), std::size_t(a.shape(1)));
    return ScalarField(g, std::vector<double>(a.data(), a.data() + a.size()));
}

py::tuple to_numpy(const VectorField2D& v) { return py::make_tuple(to_numpy(v.u), to_numpy(v.v)); }

VectorField2D from_numpy(const Array& u, const Array& v) { return {from_numpy(u), from_numpy(v)}; }

std::vector<Point2> points(const Array& a) {
    if (a.ndim() != 2 || a.shape(1) != 2) throw py::value_error("expected an (n, 2) array of points");
    std::vector<Point2> out(std::size_t(a.shape(0)));
    for (std::size_t p = 0; p < out.size(); ++p) out[p] = {a.at(p, 0), a.at(p, 1)};
    return out;
}

py::dict outcome_dict(const RunOutcome& o) {
    py::list members;
    for (const auto& m : o.members) {
        py::dict d;
        d["index"] = m.index;
        d["seed"] = m.seed;
        d["ok"] = m.ok;
        d["last_valid_step"] = m.last_valid_step;
        d["message"] = m.message;
        d["summary"] = m.summary;
        members.append(d);
    }
    py::dict d;
    d["exit_code"] = o.exit_code;
    d["out_dir"] = o.out_dir.string();
    d["members"] = members;
    return d;
}

}  // namespace

PYBIND11_MODULE(_saltlab, m) {
    m.doc() = "Stochastic advection by Lie transport (SALT) solvers";
    m.attr("__version__") = SALTLAB_VERSION;

    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
    py::register_exception<SolverAbort>(m, "SolverAbort", PyExc_RuntimeError);

    // paths
    py::class_<TimeGrid>(m, "TimeGrid")
        .def(py::init<double, double, std::size_t>(), py::arg("t0"), py::arg("t1"), py::arg("n_steps"))
        .def_property_readonly("t0", &TimeGrid::t0)
        .def_property_readonly("t1", &TimeGrid::t1)
        .def_property_readonly("n_steps", &TimeGrid::n_steps)
        .def_property_readonly("dt", &TimeGrid::dt)
        .def("time", &TimeGrid::time);

    py::class_<DrivingPath>(m, "DrivingPath")
        .def_property_readonly("grid", &DrivingPath::grid)
        .def_property_readonly("seed", &DrivingPath::seed)
        .def_property_readonly("n_noise", &DrivingPath::n_noise)
        .def_property_readonly("values",
                               [](const DrivingPath& p) {
                                   const std::size_t n = p.grid().n_steps() + 1;
                                   py::array_t<double> out({p.n_components(), n});
                                   for (std::size_t j = 0; j < p.n_components(); ++j)
                                       std::copy_n(p.component(j).data(), n, out.mutable_data(j, 0));
                                   return out;
                               })
        .def("increments", &DrivingPath::increments, py::arg("n"));

    m.def("sample_brownian", &sample_brownian, py::arg("grid"), py::arg("K"), py::arg("seed"));
    m.def("sample_ou", &sample_ou, py::arg("grid"), py::arg("K"), py::arg("theta"), py::arg("sigma"),
          py::arg("seed"));
    m.def("refine", &refine, py::arg("path"), py::arg("factor"), py::arg("seed"));

    // stratonovich
    m.def(
        "strat_integral",
        [](const Array& f, const DrivingPath& path, std::size_t j, double a, double b) {
            return strat_integral(std::span<const double>(f.data(), std::size_t(f.size())), path, j, a, b);
        },
        py::arg("f"), py::arg("path"), py::arg("j"), py::arg("a"), py::arg("b"));
    m.def(
        "fundamental_lemma_check",
        [](const Array& F, const DrivingPath& path, std::size_t j, double a, double b, std::size_t n_smooth) {
            const auto r =
                fundamental_lemma_check(std::span<const double>(F.data(), std::size_t(F.size())), path, j, a, b, n_smooth);
            py::dict d;
            d["widths"] = r.widths;
            d["errors"] = r.errors;
            d["converged"] = r.converged();
            return d;
        },
        py::arg("F"), py::arg("path"), py::arg("j"), py::arg("a"), py::arg("b"), py::arg("n_smooth") = 8);

    // noise basis
    py::class_<NoiseBasis>(m, "NoiseBasis")
        .def("__len__", &NoiseBasis::size)
        .def("field", [](const NoiseBasis& b, std::size_t k) { return to_numpy(b.field(k)); }, py::arg("k"));
    m.def(
        "make_fourier_basis",
        [](std::size_t nx, std::size_t ny, std::size_t K, double gamma, double c, int kmax) {
            return make_fourier_basis(Grid2D(nx, ny), K, gamma, c, kmax);
        },
        py::arg("nx"), py::arg("ny"), py::arg("K"), py::arg("gamma") = 2.0, py::arg("c") = 0.1, py::arg("kmax") = 4);

    // fields and initial data
    m.def("taylor_green_vorticity", [](std::size_t n, double A) { return to_numpy(taylor_green_vorticity(Grid2D(n, n), A)); },
          py::arg("n"), py::arg("amplitude") = 1.0);
    m.def("taylor_green_velocity", [](std::size_t n, double A) { return to_numpy(taylor_green_velocity(Grid2D(n, n), A)); },
          py::arg("n"), py::arg("amplitude") = 1.0);
    m.def("velocity_from_vorticity", [](const Array& w) { return to_numpy(velocity_from_vorticity(from_numpy(w))); },
          py::arg("omega"));

    // SALT Euler
    py::class_<EulerState>(m, "EulerState")
        .def_readonly("time", &EulerState::time)
        .def_readonly("step", &EulerState::step)
        .def_property_readonly("omega", [](const EulerState& s) { return to_numpy(vorticity(s)); })
        .def_property_readonly("velocity", [](const EulerState& s) { return to_numpy(velocity(s)); })
        .def_property_readonly("diagnostics", [](const EulerState& s) {
            py::dict d;
            for (const auto& [k, v] : euler_diagnostics(s).metrics) d[py::str(k)] = v;
            return d;
        });
    m.def("make_vorticity_state", [](const Array& w) { return make_vorticity_state(from_numpy(w)); }, py::arg("omega"));
    m.def("make_velocity_state", [](const Array& u, const Array& v) { return make_velocity_state(from_numpy(u, v)); },
          py::arg("u"), py::arg("v"));
    m.def(
        "step_vorticity",
        [](const EulerState& s, const NoiseBasis& b, const std::vector<double>& dS) {
            EulerOptions o;
            o.store_pressure = false;
            return step_vorticity(s, b, dS, o);
        },
        py::arg("state"), py::arg("basis"), py::arg("dS"));
    m.def(
        "step_velocity",
        [](const EulerState& s, const NoiseBasis& b, const std::vector<double>& dS, bool project) {
            EulerOptions o;
            o.store_pressure = false;
            o.project_noise_channels = project;
            ChannelDivergence cd;
            auto next = step_velocity(s, b, dS, o, &cd);
            return py::make_tuple(std::move(next), cd.rms);
        },
        py::arg("state"), py::arg("basis"), py::arg("dS"), py::arg("project_noise_channels") = true);
    m.def(
        "step_deterministic",
        [](const EulerState& s, double dt) {
            EulerOptions o;
            o.store_pressure = false;
            return step_deterministic(s, dt, o);
        },
        py::arg("state"), py::arg("dt"));
    m.def(
        "pressure_components",
        [](const Array& u, const Array& v, const NoiseBasis* b) {
            const auto vel = from_numpy(u, v);
            const auto pc = pressure_components(vel, b ? *b : NoiseBasis(vel.grid(), {}));
            py::list pk;
            for (const auto& p : pc.pk) pk.append(to_numpy(p));
            return py::make_tuple(to_numpy(pc.p0), pk);
        },
        py::arg("u"), py::arg("v"), py::arg("basis") = nullptr);

    // rotating shallow water
    py::class_<RswParams>(m, "RswParams")
        .def(py::init([](double eps, double F, const Array& f, const Array& b) {
                 return make_rsw_params(eps, F, from_numpy(f), from_numpy(b));
             }),
             py::arg("epsilon"), py::arg("froude"), py::arg("f"), py::arg("b"));
    py::class_<RswState>(m, "RswState")
        .def_readonly("time", &RswState::time)
        .def_readonly("step", &RswState::step)
        .def_property_readonly("velocity", [](const RswState& s) { return to_numpy(s.u); })
        .def_property_readonly("eta", [](const RswState& s) { return to_numpy(s.eta); });
    m.def(
        "balanced_rsw_state",
        [](const RswParams& p, double depth, double amplitude, int kmax, std::uint64_t seed) {
            return balanced_rsw_state(p.f.grid(), p, depth, amplitude, kmax, seed);
        },
        py::arg("params"), py::arg("depth") = 1.0, py::arg("amplitude") = 0.05, py::arg("kmax") = 4,
        py::arg("seed") = 1);
    m.def(
        "step_rsw",
        [](const RswState& s, const RswParams& p, const NoiseBasis& b, const std::vector<double>& dS) {
            return step_rsw(s, p, b, dS);
        },
        py::arg("state"), py::arg("params"), py::arg("basis"), py::arg("dS"));
    m.def("potential_vorticity", [](const RswState& s, const RswParams& p) { return to_numpy(potential_vorticity(s, p)); },
          py::arg("state"), py::arg("params"));
    m.def(
        "rsw_diagnostics",
        [](const RswState& s, const RswParams& p) {
            py::dict d;
            for (const auto& [k, v] : rsw_diagnostics(s, p).metrics) d[py::str(k)] = v;
            return d;
        },
        py::arg("state"), py::arg("params"));

    // advection
    m.def(
        "kiw_residual",
        [](const Array& a0, const Array& a, const Array& x0, const Array& x) {
            ParticleSet ps;
            ps.initial = points(x0);
            ps.positions = points(x);
            return kiw_residual(from_numpy(a0), from_numpy(a), ps);
        },
        py::arg("a0"), py::arg("a"), py::arg("initial_positions"), py::arg("positions"));

    // driver
    py::class_<RunConfig>(m, "RunConfig")
        .def_property_readonly("mode", [](const RunConfig& c) { return to_string(c.mode); })
        .def_readwrite("seed", &RunConfig::seed)
        .def_readwrite("members", &RunConfig::members)
        .def_readwrite("workers", &RunConfig::workers)
        .def_readwrite("out", &RunConfig::out)
        .def_readwrite("dt", &RunConfig::dt)
        .def_readwrite("T", &RunConfig::T)
        .def("__eq__", [](const RunConfig& a, const RunConfig& b) { return a == b; });
    m.def("parse_config", &parse_config, py::arg("text"));
    m.def("serialize_config", &serialize_config, py::arg("config"));
    m.def(
        "run",
        [](const RunConfig& c) {
            std::ostringstream log;
            return outcome_dict(run(c, log));
        },
        py::arg("config"));
    m.def(
        "convergence_study",
        [](const RunConfig& c, int levels) {
            std::ostringstream log;
            const auto r = convergence_study(c, levels, log);
            py::dict out;
            for (const auto& [name, rows] : r.metrics) {
                std::vector<double> values;
                for (const auto& row : rows) values.push_back(row.value);
                py::dict d;
                d["values"] = values;
                d["fitted_order"] = r.fitted_order.at(name);
                d["median_ratio"] = r.median_ratio.at(name);
                out[py::str(name)] = d;
            }
            return out;
        },
        py::arg("config"), py::arg("levels"));
    m.def("check_count", &check_count);
    m.def("check_name", &check_name, py::arg("id"));
    m.def(
        "run_check",
        [](int id) {
            const auto r = run_check(id);
            py::dict d;
            d["id"] = r.id;
            d["name"] = r.name;
            d["passed"] = r.passed;
            d["detail"] = r.detail;
            d["seconds"] = r.seconds;
            return d;
        },
        py::arg("id"));
}
