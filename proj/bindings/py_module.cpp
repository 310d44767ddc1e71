#include <pybind11/complex.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <sstream>

#include "nslab/blowup.hpp"
#include "nslab/classify.hpp"
#include "nslab/dissipation.hpp"
#include "nslab/dynamics.hpp"
#include "nslab/ensemble.hpp"
#include "nslab/harmonics.hpp"
#include "nslab/snapshot.hpp"
#include "nslab/spectral_ops.hpp"
#include "nslab/verify.hpp"

namespace py = pybind11;
using namespace nslab;

namespace {

py::array_t<std::complex<double>> coefficients_array(const SpectralVelocityField& u) {
    const int n = u.grid.n;
    py::array_t<std::complex<double>> out({3, n, n, n});
    auto buf = out.mutable_unchecked<4>();
    for (int c = 0; c < 3; ++c)
        for (int a0 = 0; a0 < n; ++a0)
            for (int a1 = 0; a1 < n; ++a1)
                for (int a2 = 0; a2 < n; ++a2)
                    buf(c, a0, a1, a2) = u.coeffs[c][u.grid.index(a0, a1, a2)];
    return out;
}

SpectralVelocityField field_from_array(const WaveGrid& grid,
                                       py::array_t<std::complex<double>, py::array::c_style>
                                           coefficients) {
    const auto buf = coefficients.unchecked<4>();
    if (buf.shape(0) != 3 || buf.shape(1) != grid.n || buf.shape(2) != grid.n ||
        buf.shape(3) != grid.n)
        throw Error("coefficient array must have shape (3, N, N, N)");
    SpectralVelocityField u(grid);
    for (int c = 0; c < 3; ++c)
        for (int a0 = 0; a0 < grid.n; ++a0)
            for (int a1 = 0; a1 < grid.n; ++a1)
                for (int a2 = 0; a2 < grid.n; ++a2)
                    u.coeffs[c][grid.index(a0, a1, a2)] = buf(c, a0, a1, a2);
    return u;
}

py::array_t<double> physical_array(const SpectralVelocityField& u) {
    FourierWorkspace ws(u.grid.n);
    const auto phys = to_physical(u, ws);
    const int n = u.grid.n;
    py::array_t<double> out({3, n, n, n});
    auto buf = out.mutable_unchecked<4>();
    for (int c = 0; c < 3; ++c)
        for (int a0 = 0; a0 < n; ++a0)
            for (int a1 = 0; a1 < n; ++a1)
                for (int a2 = 0; a2 < n; ++a2)
                    buf(c, a0, a1, a2) = phys[c][u.grid.index(a0, a1, a2)];
    return out;
}

SpectralVelocityField field_from_physical(const WaveGrid& grid,
                                          py::array_t<double, py::array::c_style> samples) {
    const auto buf = samples.unchecked<4>();
    if (buf.shape(0) != 3 || buf.shape(1) != grid.n || buf.shape(2) != grid.n ||
        buf.shape(3) != grid.n)
        throw Error("sample array must have shape (3, N, N, N)");
    std::array<std::vector<double>, 3> phys;
    for (int c = 0; c < 3; ++c) {
        phys[c].resize(grid.size());
        for (int a0 = 0; a0 < grid.n; ++a0)
            for (int a1 = 0; a1 < grid.n; ++a1)
                for (int a2 = 0; a2 < grid.n; ++a2)
                    phys[c][grid.index(a0, a1, a2)] = buf(c, a0, a1, a2);
    }
    FourierWorkspace ws(grid.n);
    return from_physical(grid, phys, ws);
}

SimulationConfig config_from_kwargs(int n, double length, double nu, double dt, double t_final,
                                    const std::string& scheme, const std::string& dealias,
                                    const std::string& init, int output_every,
                                    std::uint64_t seed, bool store_fields) {
    SimulationConfig cfg;
    cfg.n = n;
    cfg.length = length;
    cfg.nu = nu;
    cfg.dt = dt;
    cfg.t_final = t_final;
    cfg.scheme = parse_scheme(scheme);
    cfg.dealias = parse_dealias(dealias);
    cfg.init = init;
    cfg.output_every = output_every;
    cfg.seed = seed;
    cfg.store_fields = store_fields;
    return cfg;
}

}  // namespace

PYBIND11_MODULE(_nslab, m) {
    m.doc() = "Pseudo-spectral incompressible Navier-Stokes laboratory";

    py::register_exception<Error>(m, "NsLabError");

    py::class_<WaveGrid>(m, "Grid")
        .def(py::init([](int n, double length) { return make_grid(n, length); }), py::arg("n"),
             py::arg("length") = kTwoPi)
        .def_readonly("n", &WaveGrid::n)
        .def_readonly("length", &WaveGrid::length)
        .def_property_readonly("dealias_limit", &WaveGrid::dealias_limit)
        .def("wavenumbers",
             [](const WaveGrid& g) {
                 py::array_t<double> out(g.n);
                 auto buf = out.mutable_unchecked<1>();
                 for (int a = 0; a < g.n; ++a) buf(a) = g.wavenumber(a);
                 return out;
             })
        .def("__repr__", [](const WaveGrid& g) {
            std::ostringstream ss;
            ss << "Grid(n=" << g.n << ", length=" << g.length << ")";
            return ss.str();
        });

    py::class_<SpectralVelocityField>(m, "Field")
        .def(py::init([](const WaveGrid& g) { return SpectralVelocityField(g); }),
             py::arg("grid"))
        .def_readonly("grid", &SpectralVelocityField::grid)
        .def_property(
            "time_tag",
            [](const SpectralVelocityField& u) -> py::object {
                if (u.time_tag) return py::float_(*u.time_tag);
                return py::none();
            },
            [](SpectralVelocityField& u, double t) { u.time_tag = t; })
        .def("coefficients", &coefficients_array,
             "Complex coefficient table with shape (3, N, N, N) in FFT index order")
        .def("physical", &physical_array, "Collocation samples with shape (3, N, N, N)");

    m.def("field_from_coefficients", &field_from_array, py::arg("grid"),
          py::arg("coefficients"));
    m.def("field_from_physical", &field_from_physical, py::arg("grid"), py::arg("samples"));

    // spectral-core operations
    m.def("leray_project", &leray_project);
    m.def("stokes_apply", &stokes_apply, py::arg("u"), py::arg("s"), py::arg("nu"));
    m.def("sobolev_norm", &sobolev_norm, py::arg("u"), py::arg("s"), py::arg("nu"));
    m.def("remove_drift", &remove_drift);
    m.def("h_norm", &h_norm);
    m.def("h_inner", &h_inner);
    m.def("energy", &energy);
    m.def("enstrophy", &enstrophy);
    m.def("divergence_residual", &divergence_residual);
    m.def("reality_defect", &reality_defect);
    m.def("shell_spectrum", [](const SpectralVelocityField& u) {
        const auto s = shell_spectrum(u);
        return py::array_t<double>(static_cast<py::ssize_t>(s.size()), s.data());
    });
    m.def("vorticity",
          [](const SpectralVelocityField& u) { return field_gradients(u).vorticity; });

    m.def("initial_data", &initial_data, py::arg("descriptor"), py::arg("grid"),
          py::arg("seed") = 0);
    m.def(
        "nonlinear_term",
        [](const SpectralVelocityField& u, const std::string& dealias) {
            FourierWorkspace ws(u.grid.n);
            return nonlinear_term(u, ws, parse_dealias(dealias));
        },
        py::arg("u"), py::arg("dealias") = "two-thirds");

    m.def(
        "simulate",
        [](int n, double length, double nu, double dt, double t_final,
           const std::string& scheme, const std::string& dealias, const std::string& init,
           int output_every, std::uint64_t seed, bool store_fields) {
            const auto cfg = config_from_kwargs(n, length, nu, dt, t_final, scheme, dealias,
                                                init, output_every, seed, store_fields);
            const auto traj = simulate(cfg);
            py::dict out;
            py::list times, energies, dissipation, fields;
            for (const auto& rec : traj.steps) {
                times.append(rec.t);
                energies.append(rec.energy);
                dissipation.append(rec.energy_dissipation);
            }
            out["step_times"] = times;
            out["energies"] = energies;
            out["energy_dissipation"] = dissipation;
            py::list sample_times;
            for (const auto& s : traj.samples) {
                fields.append(s.u);
                sample_times.append(s.t);
            }
            out["sample_times"] = sample_times;
            out["fields"] = fields;
            return out;
        },
        py::arg("n"), py::arg("length") = kTwoPi, py::arg("nu") = 0.01, py::arg("dt") = 1e-3,
        py::arg("t_final") = 1.0, py::arg("scheme") = "etd-rk2",
        py::arg("dealias") = "two-thirds", py::arg("init") = "taylor-green",
        py::arg("output_every") = 100, py::arg("seed") = 0, py::arg("store_fields") = true);

    m.def("heat_solution", &heat_solution, py::arg("u0"), py::arg("nu"), py::arg("t"));

    // classifier
    py::enum_<DataLabel>(m, "DataLabel")
        .value("smooth", DataLabel::Smooth)
        .value("turbulent", DataLabel::Turbulent)
        .value("strictly_turbulent", DataLabel::StrictlyTurbulent);
    m.def(
        "classify_initial_data",
        [](const SpectralVelocityField& u, int lmax, double tolerance) {
            const auto c = classify_initial_data(u, lmax, tolerance);
            py::dict out;
            out["label"] = to_string(c.label);
            out["smooth_discriminant"] = c.smooth_discriminant;
            out["strict_discriminant"] = c.strict_discriminant;
            out["tolerance"] = c.tolerance;
            return out;
        },
        py::arg("u"), py::arg("lmax"), py::arg("tolerance") = kClassifierTolerance);
    m.def(
        "synthesize_labeled",
        [](const WaveGrid& grid, const std::string& label, int lmax, double rms) {
            DataLabel l;
            if (label == "smooth") l = DataLabel::Smooth;
            else if (label == "turbulent") l = DataLabel::Turbulent;
            else if (label == "strictly-turbulent") l = DataLabel::StrictlyTurbulent;
            else throw Error("unknown label '" + label + "'");
            return synthesize_labeled(grid, l, lmax, rms);
        },
        py::arg("grid"), py::arg("label"), py::arg("lmax"), py::arg("rms") = 0.1);

    // harmonics
    m.def("ylm", &ylm, py::arg("l"), py::arg("m"), py::arg("theta"), py::arg("phi"));
    m.def(
        "spherical_bessel",
        [](int l, double x) {
            const auto b = spherical_bessel(l, x);
            return py::make_tuple(b.j, b.y);
        },
        py::arg("l"), py::arg("x"));
    m.def("young_bound", &young_bound, py::arg("a"), py::arg("b"), py::arg("p"));

    // dissipation diagnostics
    m.def(
        "entropy_surrogate",
        [](const SpectralVelocityField& u, int lmax) {
            const auto s = entropy_surrogate(u, lmax);
            py::dict out;
            out["value"] = s.value;
            out["mean_weight"] = s.mean_weight;
            return out;
        },
        py::arg("u"), py::arg("lmax") = 4);

    // blowup monitor
    m.def(
        "fit_spectral_decay",
        [](py::array_t<double> shells, double kappa_unit, double noise_floor) {
            std::vector<double> s(shells.data(), shells.data() + shells.size());
            const auto fit = fit_spectral_decay(s, kappa_unit, noise_floor);
            py::dict out;
            out["delta"] = fit.delta;
            out["r2"] = fit.r2;
            out["exponential"] = fit.exponential;
            out["shells_used"] = fit.shells_used;
            out["flag"] = fit.flag;
            return out;
        },
        py::arg("shell_energy"), py::arg("kappa_unit") = 1.0, py::arg("noise_floor") = 1e-28);
    m.def("analyticity_strip_width", [](const SpectralVelocityField& u) {
        const auto fit = analyticity_strip_width(u);
        py::dict out;
        out["delta"] = fit.delta;
        out["r2"] = fit.r2;
        out["exponential"] = fit.exponential;
        return out;
    });
    m.def(
        "excluded_region_time",
        [](double nu_t_at_0, double floor, double d_min) -> py::object {
            const auto t = excluded_region_time(nu_t_at_0, floor, d_min);
            if (t) return py::float_(*t);
            return py::none();
        },
        py::arg("nu_t_at_0"), py::arg("nu_t_floor"), py::arg("d_min"));

    // persistence
    m.def("save_field", &save_field, py::arg("u"), py::arg("nu"), py::arg("path"));
    m.def(
        "load_field",
        [](const std::filesystem::path& path) {
            auto snap = load_field(path);
            return py::make_tuple(snap.field, snap.nu);
        },
        py::arg("path"));

    m.def("run_verify", []() {
        std::ostringstream out;
        const int failures = run_verify(out);
        return py::make_tuple(failures, out.str());
    });

    m.attr("__version__") = "0.1.0";
}
