#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "nsfv/errors.hpp"
#include "nsfv/mms.hpp"
#include "nsfv/run.hpp"

namespace py = pybind11;
using namespace nsfv;

namespace {

// Shape and strides are spelled out: older pybind11 releases compute zero
// strides for the (count, pointer) constructor.
py::array_t<double> copy_array(std::vector<py::ssize_t> shape, const double* data) {
    std::vector<py::ssize_t> strides(shape.size(), static_cast<py::ssize_t>(sizeof(double)));
    for (std::size_t i = shape.size(); i-- > 1;) strides[i - 1] = strides[i] * shape[i];
    return py::array_t<double>(shape, strides, data);
}

py::array_t<double> to_array(const std::vector<double>& v) {
    return copy_array({static_cast<py::ssize_t>(v.size())}, v.data());
}

py::array_t<double> to_array(const ScalarField& f) {
    const auto& g = f.grid();
    if (g.dim == 1) return copy_array({g.n}, f.values().data());
    // Row-major (y, x) so that arr[iy, ix] matches the flat layout.
    return copy_array({g.n, g.n}, f.values().data());
}

py::dict series_dict(const DiagnosticSeries& s) {
    py::dict d;
    for (std::size_t i = 0; i < DiagnosticSeries::column_names.size(); ++i)
        d[py::str(std::string(DiagnosticSeries::column_names[i]))] = to_array(s.column(i));
    return d;
}

py::dict check_dict(const CheckResult& c) {
    py::dict d;
    d["id"] = c.id;
    d["status"] = to_string(c.status);
    d["witness_rho"] = c.witness_rho;
    d["witness_theta"] = c.witness_theta;
    d["margin"] = c.margin;
    d["fitted_c"] = c.fitted_c;
    d["note"] = c.note;
    return d;
}

py::list mms_rows(const std::vector<MmsRow>& rows) {
    py::list out;
    for (const auto& r : rows) out.append(py::make_tuple(r.n, r.dt, r.error, r.order));
    return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Compressible Navier-Stokes-Fourier solver for virial pressure laws";

    static py::exception<Error> base(m, "Error");
    py::register_exception<ConfigError>(m, "ConfigError", base.ptr());
    py::register_exception<DomainError>(m, "DomainError", base.ptr());
    py::register_exception<ConvergenceFailure>(m, "ConvergenceFailure", base.ptr());
    py::register_exception<NonPhysicalState>(m, "NonPhysicalState", base.ptr());
    py::register_exception<FormatError>(m, "FormatError", base.ptr());
    py::register_exception<IOError>(m, "IOError", base.ptr());
    py::register_exception<NegativeInput>(m, "NegativeInput", base.ptr());
    py::register_exception<IndexOutOfRange>(m, "IndexOutOfRange", base.ptr());

    py::class_<VirialLaw>(m, "VirialLaw")
        .def_readwrite("gamma", &VirialLaw::gamma)
        .def_readwrite("gamma_theta", &VirialLaw::gamma_theta)
        .def_readwrite("alpha", &VirialLaw::alpha)
        .def_readwrite("alpha_bar", &VirialLaw::alpha_bar)
        .def_readonly("n_trunc", &VirialLaw::n_trunc)
        .def_readwrite("mu", &VirialLaw::mu)
        .def_readwrite("lambda_", &VirialLaw::lambda)
        .def_readwrite("kappa_a", &VirialLaw::kappa_a)
        .def_readwrite("kappa_b", &VirialLaw::kappa_b)
        .def("coefficient", [](const VirialLaw& l, int n) { return l.b.at(static_cast<std::size_t>(n)).to_string(); })
        .def("set_coefficient",
             [](VirialLaw& l, int n, const std::string& text) { l.b.at(static_cast<std::size_t>(n)) = parse_coefficient(text); })
        .def("__repr__", [](const VirialLaw& l) {
            std::string s = "VirialLaw(gamma=" + format_double(l.gamma) + ", N=" + std::to_string(l.n_trunc);
            for (std::size_t n = 0; n < l.b.size(); ++n) s += ", B" + std::to_string(n) + "=" + l.b[n].to_string();
            return s + ")";
        });

    m.def("reference", &laws::reference);
    m.def("nonmonotone_demo", &laws::nonmonotone_demo);
    m.def("constant_b2", &laws::constant_b2, py::arg("c") = 1.0);
    m.def("nonconcave", &laws::nonconcave);
    m.def("concave", &laws::concave, py::arg("c") = 0.1, py::arg("p") = 0.5);

    m.def("pressure", [](const VirialLaw& l, double r, double t) { return pressure(l, {r, t}); });
    m.def("pressure_drho", [](const VirialLaw& l, double r, double t) { return pressure_drho(l, {r, t}); });
    m.def("pressure_dtheta", [](const VirialLaw& l, double r, double t) { return pressure_dtheta(l, {r, t}); });
    m.def("internal_energy", [](const VirialLaw& l, double r, double t) { return internal_energy(l, {r, t}); });
    m.def("entropy", [](const VirialLaw& l, double r, double t) { return entropy(l, {r, t}); });
    m.def("specific_heat", [](const VirialLaw& l, double r, double t) { return specific_heat(l, {r, t}); });
    m.def("good_unknown", [](const VirialLaw& l, double r, double t, double eps) { return good_unknown(l, {r, t}, eps); },
          py::arg("law"), py::arg("rho"), py::arg("theta"), py::arg("eps") = 0.0);
    m.def("theta_of_g", &theta_of_g, py::arg("law"), py::arg("rho"), py::arg("g"), py::arg("eps") = 0.0);

    m.def(
        "validate_law",
        [](const VirialLaw& l, int dim) {
            const ValidationReport r = validate_law(l, dim);
            py::dict d;
            py::list checks;
            for (const auto& c : r.checks) checks.append(check_dict(c));
            d["checks"] = checks;
            d["failures"] = r.failures();
            d["csv"] = r.to_csv();
            if (r.nonmonotone_witness)
                d["nonmonotone_witness"] = py::make_tuple(r.nonmonotone_witness->rho, r.nonmonotone_witness->theta);
            else
                d["nonmonotone_witness"] = py::none();
            return d;
        },
        py::arg("law"), py::arg("dim") = 1);

    py::class_<RunConfig>(m, "RunConfig")
        .def_readwrite("law", &RunConfig::law)
        .def_readwrite("n", &RunConfig::n)
        .def_readwrite("dim", &RunConfig::dim)
        .def_readwrite("t_final", &RunConfig::t_final)
        .def_readwrite("slab_length", &RunConfig::slab_length)
        .def_readwrite("thermal_steps_per_slab", &RunConfig::thermal_steps_per_slab)
        .def_readwrite("eps", &RunConfig::eps)
        .def_readwrite("out_dir", &RunConfig::out_dir)
        .def_readwrite("force", &RunConfig::force)
        .def("to_text", [](const RunConfig& c) { return to_text(c); });
    m.def("parse_config", &parse_config);
    m.def("load_config", &load_config);

    m.def(
        "run",
        [](const RunConfig& cfg, bool write_artifacts) {
            RunResult r;
            {
                py::gil_scoped_release release;
                r = run_simulation(cfg, write_artifacts);
            }
            py::dict d;
            d["exit_code"] = r.exit_code;
            d["message"] = r.message;
            d["series"] = series_dict(r.series);
            py::list iters;
            for (const auto& s : r.report.slabs) iters.append(s.iterations);
            d["iterations"] = iters;
            d["energy_pass"] = r.verdict.energy_pass;
            d["entropy_pass"] = r.verdict.entropy_pass;
            d["g_balance_pass"] = r.verdict.g_balance_pass;
            if (r.trajectory.samples() > 0) {
                const std::size_t k = r.trajectory.samples() - 1;
                d["rho"] = to_array(r.trajectory.rho[k]);
                d["theta"] = to_array(r.trajectory.theta[k]);
                d["g"] = to_array(r.trajectory.g[k]);
            }
            return d;
        },
        py::arg("config"), py::arg("write_artifacts") = false);

    m.def(
        "read_snapshot",
        [](const std::string& path, double length) {
            const Snapshot s = read_snapshot(path, length);
            py::dict d;
            d["time"] = s.time;
            d["eps"] = s.eps;
            d["dim"] = s.grid.dim;
            d["n"] = s.grid.n;
            for (std::size_t i = 0; i < s.tags.size(); ++i) d[field_name(s.tags[i])] = to_array(s.fields[i]);
            return d;
        },
        py::arg("path"), py::arg("length") = 1.0);

    m.def("thermal_mms_space",
          [](const VirialLaw& l, const std::vector<int>& ns, double t, double eps, double amp) {
              return mms_rows(thermal_mms_space(l, ns, t, eps, amp));
          },
          py::arg("law"), py::arg("resolutions"), py::arg("t_final"), py::arg("eps") = 1e-3, py::arg("amplitude") = 0.5);
    m.def("hydro_mms",
          [](const VirialLaw& l, const std::vector<int>& ns, double t, double amp) { return mms_rows(hydro_mms(l, ns, t, amp)); },
          py::arg("law"), py::arg("resolutions"), py::arg("t_final"), py::arg("amplitude") = 0.2);
}
