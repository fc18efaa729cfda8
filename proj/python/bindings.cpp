#include "berrytop/cli.hpp"
#include "berrytop/curvature.hpp"
#include "berrytop/dynamics.hpp"
#include "berrytop/errors.hpp"
#include "berrytop/field.hpp"
#include "berrytop/fieldspec.hpp"
#include "berrytop/gauge.hpp"
#include "berrytop/hopf.hpp"
#include "berrytop/loops.hpp"
#include "berrytop/mapgrid.hpp"
#include "berrytop/verify.hpp"

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

namespace py = pybind11;
using namespace berrytop;

namespace {

using Triple = std::array<double, 3>;

Branch to_branch(int b) { return branch_from_int(b); }

KVector to_k(const Triple& k) { return {k[0], k[1], k[2]}; }
Triple from_vec(const Vec3& v) { return {v.x(), v.y(), v.z()}; }

// A builtin or preset name, or a dict in the custom-field JSON schema.
SpinorSystem resolve(const py::object& system, const ParamMap& params, int branch) {
    const Branch b = to_branch(branch);
    if (py::isinstance<py::str>(system)) {
        const auto name = system.cast<std::string>();
        if (auto sys = system_from_name(name, params, b)) return *sys;
        throw InvalidArgument("unknown system '" + name + "'");
    }
    if (py::isinstance<py::dict>(system)) {
        const auto text = py::module_::import("json").attr("dumps")(system).cast<std::string>();
        FieldSpec spec = parse_field_spec(nlohmann::json::parse(text));
        if (!params.empty()) {
            ParamMap merged = spec.params;
            for (const auto& [k, v] : params) merged[k] = v;
            spec = make_field_spec(spec.name, merged, spec.bx_source, spec.by_source, spec.bz_source);
        }
        return SpinorSystem::custom(std::move(spec), b);
    }
    throw InvalidArgument("system must be a name or a field-spec dict");
}

ChartPolicy to_policy(const std::string& chart) {
    if (chart == "auto") return ChartPolicy::Auto;
    if (chart == "north") return ChartPolicy::North;
    if (chart == "south") return ChartPolicy::South;
    throw InvalidArgument("chart must be auto, north or south");
}

Chart to_chart(const std::string& chart) {
    if (chart == "north") return Chart::North;
    if (chart == "south") return Chart::South;
    throw InvalidArgument("chart must be north or south");
}

py::object json_to_py(const nlohmann::json& j) { return py::module_::import("json").attr("loads")(j.dump()); }

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Berry curvature and monopole gauge fields of SU(2) spinor systems";

    // never destroyed
    static auto* berry_error = new py::exception<Error>(m, "BerryError", PyExc_ValueError);
    static auto* parse_error = new py::exception<ParseError>(m, "ParseError", berry_error->ptr());
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const ParseError& e) {
            // args = (message, byte offset, component)
            py::tuple args = py::make_tuple(std::string(e.what()), e.position(), e.component());
            PyErr_SetObject(parse_error->ptr(), args.ptr());
        } catch (const Error& e) {
            py::set_error(*berry_error, e.what());
        }
    });

    m.def("builtin_systems", [] {
        std::vector<std::string> names;
        for (SystemKind k : builtin_kinds()) names.emplace_back(kind_name(k));
        for (const auto& p : preset_names()) names.push_back(p);
        return names;
    });

    m.def(
        "field", [](const py::object& system, const Triple& k, const ParamMap& params) {
            return from_vec(eval_field(resolve(system, params, 1), to_k(k)).vec());
        },
        py::arg("system"), py::arg("k"), py::arg("params") = ParamMap{});

    m.def(
        "gauge",
        [](const py::object& system, const Triple& k, const std::string& chart, int branch, const ParamMap& params) {
            const SpinorSystem sys = resolve(system, params, branch);
            const Chart c = chart == "auto" ? auto_chart(eval_field(sys, to_k(k))) : to_chart(chart);
            return from_vec(pullback_gauge_K(sys, to_k(k), c).components);
        },
        py::arg("system"), py::arg("k"), py::arg("chart") = "auto", py::arg("branch") = 1,
        py::arg("params") = ParamMap{});

    m.def(
        "curvature", [](const py::object& system, const Triple& k, int branch, const ParamMap& params) {
            const SpinorSystem sys = resolve(system, params, branch);
            return from_vec(curvature_K(sys, to_k(k), sys.branch()).components);
        },
        py::arg("system"), py::arg("k"), py::arg("branch") = 1, py::arg("params") = ParamMap{});

    m.def(
        "berry_phase",
        [](const py::object& system, double radius, int steps, const Triple& center, int turns, int branch,
           const std::string& chart, const ParamMap& params) {
            const SpinorSystem sys = resolve(system, params, branch);
            const auto loop = LoopSpec::circle(radius, steps, Vec3(center[0], center[1], center[2]), turns);
            return berry_phase_loop(sys, loop, sys.branch(), to_policy(chart)).phase;
        },
        py::arg("system"), py::arg("radius") = 1.0, py::arg("steps") = 4096, py::arg("center") = Triple{0, 0, 0},
        py::arg("turns") = 1, py::arg("branch") = 1, py::arg("chart") = "auto", py::arg("params") = ParamMap{});

    m.def(
        "winding_number",
        [](const py::object& system, double radius, int steps, const Triple& center, const ParamMap& params) {
            const auto loop = LoopSpec::circle(radius, steps, Vec3(center[0], center[1], center[2]));
            return berrytop::winding_number(resolve(system, params, 1), loop);
        },
        py::arg("system"), py::arg("radius") = 1.0, py::arg("steps") = 4096, py::arg("center") = Triple{0, 0, 0},
        py::arg("params") = ParamMap{});

    m.def(
        "flux_sphere_monopole", [](double radius, int n_theta, int n_phi) {
            return flux_sphere(
                [](const Vec3& b) { return monopole_curvature_B(BVector::from(b), Branch::Aligned).components; },
                {radius, n_theta, n_phi});
        },
        py::arg("radius") = 1.0, py::arg("n_theta") = 256, py::arg("n_phi") = 256);

    m.def(
        "flux_disk",
        [](const py::object& system, double radius, int branch, int n_r, int n_phi, const ParamMap& params) {
            const SpinorSystem sys = resolve(system, params, branch);
            return berrytop::flux_disk(sys, radius, sys.branch(), n_r, n_phi);
        },
        py::arg("system"), py::arg("radius"), py::arg("branch") = 1, py::arg("n_r") = 40000, py::arg("n_phi") = 16,
        py::arg("params") = ParamMap{});

    m.def(
        "ensemble_separation",
        [](const py::object& system, const Triple& E, double dt, long steps, int n, std::uint64_t seed,
           const ParamMap& params, unsigned threads) {
            DriveConfig d;
            d.E = Vec3(E[0], E[1], E[2]);
            d.dt = dt;
            d.steps = steps;
            EnsembleOptions opts;
            opts.threads = threads;
            const SpinorSystem sys = resolve(system, params, 1);
            EnsembleResult r;
            {
                py::gil_scoped_release release;
                r = berrytop::ensemble_separation(sys, d, n, seed, opts);
            }
            py::dict out;
            out["mean_transverse_aligned"] = r.mean_transverse_aligned;
            out["mean_transverse_anti"] = r.mean_transverse_anti;
            out["separation"] = r.separation;
            out["used"] = r.used;
            out["dropped"] = r.dropped;
            return out;
        },
        py::arg("system"), py::arg("E") = Triple{-0.01, 0, 0}, py::arg("dt") = 0.01, py::arg("steps") = 10000,
        py::arg("n_particles") = 100, py::arg("seed") = 1, py::arg("params") = ParamMap{}, py::arg("threads") = 0u);

    m.def(
        "hopf_pullback", [](const std::string& chart, double theta, double phi) {
            const auto c = omega_pullback(to_chart(chart), theta, phi);
            return std::make_pair(c.a_theta, c.a_phi);
        },
        py::arg("chart"), py::arg("theta"), py::arg("phi"));

    m.def(
        "map_grid",
        [](const py::object& system, const std::string& quantity, const std::string& plane, double range, int grid,
           int branch, const ParamMap& params) {
            const MapGrid g = compute_map(resolve(system, params, branch), map_quantity_from_string(quantity),
                                          PlaneSpec::parse(plane), range, grid);
            py::array_t<double> arr({static_cast<py::ssize_t>(g.rows.size()), static_cast<py::ssize_t>(7)});
            auto a = arr.mutable_unchecked<2>();
            for (std::size_t i = 0; i < g.rows.size(); ++i) {
                const auto& r = g.rows[i];
                const double vals[7] = {r.k.kx, r.k.ky, r.k.kz, r.v.x(), r.v.y(), r.v.z(), r.magnitude};
                for (int c = 0; c < 7; ++c) a(static_cast<py::ssize_t>(i), c) = vals[c];
            }
            return arr;
        },
        py::arg("system"), py::arg("quantity") = "curvature", py::arg("plane") = "z=0", py::arg("range") = 2.0,
        py::arg("grid") = 64, py::arg("branch") = 1, py::arg("params") = ParamMap{});

    m.def("parse_expression", [](const std::string& source) { return to_sexpr(*parse_expr(source)); },
          py::arg("source"));

    m.def(
        "verify", [](const std::string& suite) { return json_to_py(run_verify(suite).to_json()); },
        py::arg("suite") = "all");

    m.def(
        "run_cli", [](const std::vector<std::string>& args) {
            std::ostringstream out, err;
            const int code = cli::run(args, out, err);
            return py::make_tuple(code, out.str(), err.str());
        },
        py::arg("args"));
}
