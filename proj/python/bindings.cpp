#include <sstream>
#include <string>

#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "qweak/errors.hpp"
#include "qweak/photonstats.hpp"
#include "qweak/sweep.hpp"
#include "qweak/verify.hpp"

namespace py = pybind11;
using namespace qweak;

namespace {

MeasurementConfig make_config(double q, double g, cdouble z, cdouble alpha, cdouble beta, const std::string& obs) {
    MeasurementConfig c;
    c.q = DeformationParameter(q);
    c.g = g;
    c.z = CoherentLabel::from_complex(z);
    c.alpha = CoherentLabel::from_complex(alpha);
    c.beta = CoherentLabel::from_complex(beta);
    c.observable = parse_observable(obs);
    c.validate();
    return c;
}

cli::SweepSpec make_spec(const std::string& command, const std::optional<std::string>& preset,
                         const cli::ParamMap& set, const std::optional<std::string>& axis,
                         const std::optional<std::string>& range) {
    static const std::map<std::string, cli::Command> commands{
        {"weak-value", cli::Command::WeakValue}, {"photon-dist", cli::Command::PhotonDist},
        {"mandel", cli::Command::Mandel},        {"g2", cli::Command::G2},
        {"quadrature", cli::Command::Quadrature}};
    const auto it = commands.find(command);
    if (it == commands.end()) throw ConfigError("unknown command '" + command + "'");
    cli::SweepSpec spec;
    spec.command = it->second;
    spec.preset = preset;
    spec.overrides = set;
    if (axis) spec.axis = cli::parse_axis(*axis);
    if (range) spec.range = cli::Range::parse(*range);
    return spec;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "q-deformed weak measurement: special functions, weak values and pointer statistics";

    auto error = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
    py::register_exception<DomainError>(m, "DomainError", error.ptr());
    py::register_exception<NonConvergence>(m, "NonConvergence", error.ptr());
    py::register_exception<DimensionOverflow>(m, "DimensionOverflow", error.ptr());
    py::register_exception<ZeroMeanPhoton>(m, "ZeroMeanPhoton", error.ptr());
    py::register_exception<ConfigError>(m, "ConfigError", error.ptr());
    py::register_exception<IoError>(m, "IoError", error.ptr());

    m.def("q_number", [](std::size_t n, double q) { return q_number(n, DeformationParameter(q)); }, py::arg("n"),
          py::arg("q"));
    m.def("q_factorial", [](std::size_t n, double q) { return q_factorial(n, DeformationParameter(q)); },
          py::arg("n"), py::arg("q"));
    m.def("q_exp", [](cdouble x, double q) { return q_exp(x, DeformationParameter(q)).value; }, py::arg("x"),
          py::arg("q"));
    m.def("convergence_radius", [](double q) { return convergence_radius(DeformationParameter(q)); }, py::arg("q"));

    m.def(
        "fidelity",
        [](cdouble alpha, cdouble beta, double q) {
            return fidelity(CoherentLabel::from_complex(alpha), CoherentLabel::from_complex(beta),
                            DeformationParameter(q));
        },
        py::arg("alpha"), py::arg("beta"), py::arg("q"));
    m.def(
        "weak_value",
        [](cdouble alpha, cdouble beta, double q, const std::string& observable) {
            MeasurementConfig c = make_config(q, 0.0, 0.0, alpha, beta, observable);
            return weak_value(c).value;
        },
        py::arg("alpha"), py::arg("beta"), py::arg("q"), py::arg("observable") = "x2");


    m.def(
        "photon_distribution",
        [](double q, double g, cdouble z, cdouble alpha, cdouble beta, const std::string& obs) {
            return photon_distribution(make_config(q, g, z, alpha, beta, obs)).probs;
        },
        py::arg("q"), py::arg("g"), py::arg("z"), py::arg("alpha"), py::arg("beta"), py::arg("observable") = "x2");
    m.def(
        "mandel_q",
        [](double q, double g, cdouble z, cdouble alpha, cdouble beta, const std::string& obs) {
            return mandel_q(make_config(q, g, z, alpha, beta, obs));
        },
        py::arg("q"), py::arg("g"), py::arg("z"), py::arg("alpha"), py::arg("beta"), py::arg("observable") = "x2");
    m.def(
        "g2_zero",
        [](double q, double g, cdouble z, cdouble alpha, cdouble beta, const std::string& obs) {
            return g2_zero(make_config(q, g, z, alpha, beta, obs));
        },
        py::arg("q"), py::arg("g"), py::arg("z"), py::arg("alpha"), py::arg("beta"), py::arg("observable") = "x2");
    m.def(
        "quadrature_moments",
        [](double q, double g, cdouble z, cdouble alpha, cdouble beta, const std::string& obs) {
            const QuadratureMoments mo = quadrature_moments(make_config(q, g, z, alpha, beta, obs));
            py::dict d;
            d["mean_x"] = mo.mean_x;
            d["mean_p"] = mo.mean_p;
            d["var_x"] = mo.var_x;
            d["var_p"] = mo.var_p;
            d["cross_xp"] = mo.cross_xp;
            d["commutator"] = mo.commutator_expect;
            d["squeezed_x"] = mo.squeezed_x;
            d["squeezed_p"] = mo.squeezed_p;
            return d;
        },
        py::arg("q"), py::arg("g"), py::arg("z"), py::arg("alpha"), py::arg("beta"), py::arg("observable") = "x2");

    m.def(
        "_verify_json",
        [](double tol, std::uint64_t seed, std::size_t count) {
            cli::VerifyOptions opts;
            opts.tolerance = tol;
            opts.seed = seed;
            opts.count = count;
            return cli::run_verify(opts, fock::DimPolicy::from_environment()).to_json();
        },
        py::arg("tol") = 1e-8, py::arg("seed") = 42, py::arg("count") = 200);
    m.def(
        "_sweep_text",
        [](const std::string& command, const std::optional<std::string>& preset, const cli::ParamMap& set,
           const std::optional<std::string>& axis, const std::optional<std::string>& range,
           const std::string& format) {
            const auto result =
                cli::run_sweep(cli::resolve(make_spec(command, preset, set, axis, range)),
                               fock::DimPolicy::from_environment());
            std::ostringstream out;
            if (cli::parse_format(format) == cli::OutputFormat::Json) cli::write_json(result, out);
            else cli::write_csv(result, out);
            return out.str();
        },
        py::arg("command"), py::arg("preset") = py::none(), py::arg("set") = cli::ParamMap{},
        py::arg("axis") = py::none(), py::arg("range") = py::none(), py::arg("format") = "csv");
}
