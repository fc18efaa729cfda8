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

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <numbers>
#include <optional>
#include <ostream>
#include <sstream>

namespace berrytop::cli {

namespace {

using nlohmann::json;

/// Input problem attributed to a flag.
class UsageError : public std::runtime_error {
public:
    UsageError(const std::string& flag, const std::string& message) : std::runtime_error(flag + ": " + message) {}
};

double parse_number(const std::string& flag, std::string_view text) {
    double v = 0.0;
    const auto* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, v);
    if (ec != std::errc() || ptr != end || !std::isfinite(v))
        throw UsageError(flag, "'" + std::string(text) + "' is not a finite number");
    return v;
}

std::vector<std::string> split(std::string_view text, char sep) {
    std::vector<std::string> parts;
    std::size_t start = 0;
    while (true) {
        const auto pos = text.find(sep, start);
        parts.emplace_back(text.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return parts;
}

Vec3 parse_vec3(const std::string& flag, const std::string& text) {
    const auto parts = split(text, ',');
    if (parts.size() != 3) throw UsageError(flag, "expected three comma-separated numbers, got '" + text + "'");
    return {parse_number(flag, parts[0]), parse_number(flag, parts[1]), parse_number(flag, parts[2])};
}

// "name:key=value,key=value"
std::pair<std::string, std::map<std::string, std::string>> parse_shape(const std::string& flag,
                                                                       const std::string& text) {
    const auto colon = text.find(':');
    std::pair<std::string, std::map<std::string, std::string>> out;
    out.first = text.substr(0, colon);
    if (colon == std::string::npos) return out;
    for (const auto& item : split(std::string_view(text).substr(colon + 1), ',')) {
        const auto eq = item.find('=');
        if (eq == std::string::npos || eq == 0) throw UsageError(flag, "expected key=value, got '" + item + "'");
        if (!out.second.emplace(item.substr(0, eq), item.substr(eq + 1)).second)
            throw UsageError(flag, "key '" + item.substr(0, eq) + "' given twice");
    }
    return out;
}

Branch parse_branch(const std::string& text) {
    if (text == "+1" || text == "1" || text == "+" || text == "aligned") return Branch::Aligned;
    if (text == "-1" || text == "-" || text == "anti" || text == "anti-aligned") return Branch::AntiAligned;
    throw UsageError("--branch", "expected +1, -1, aligned or anti, got '" + text + "'");
}

const char* branch_label(Branch b) { return b == Branch::Aligned ? "+1" : "-1"; }

ParamMap parse_params(const std::vector<std::string>& items) {
    ParamMap out;
    for (const auto& item : items) {
        const auto eq = item.find('=');
        if (eq == std::string::npos || eq == 0) throw UsageError("--param", "expected name=value, got '" + item + "'");
        out[item.substr(0, eq)] = parse_number("--param " + item.substr(0, eq), std::string_view(item).substr(eq + 1));
    }
    return out;
}

SpinorSystem load_custom(const std::string& path, const ParamMap& overrides, Branch branch) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw UsageError("--system", "cannot read '" + path + "'");
    std::stringstream buf;
    buf << f.rdbuf();
    json doc;
    try {
        doc = json::parse(buf.str());
    } catch (const json::parse_error& e) {
        throw UsageError("--system", path + ": invalid JSON (at byte " + std::to_string(e.byte) + ")");
    }
    FieldSpec spec;
    try {
        spec = parse_field_spec(doc);
        if (!overrides.empty()) {
            ParamMap params = spec.params;
            for (const auto& [k, v] : overrides) {
                if (!params.count(k)) throw UsageError("--param", "'" + k + "' is not a parameter of " + path);
                params[k] = v;
            }
            spec = make_field_spec(spec.name, params, spec.bx_source, spec.by_source, spec.bz_source);
        }
    } catch (const ParseError& e) {
        throw UsageError("--system", path + ": " + e.what());
    } catch (const InvalidArgument& e) {
        throw UsageError("--system", path + ": " + e.what());
    }
    return SpinorSystem::custom(std::move(spec), branch);
}

struct SystemOptions {
    std::string system = "rashba";
    std::vector<std::string> params;
    std::string branch = "+1";

    void attach(CLI::App* app, bool with_system = true) {
        if (with_system)
            app->add_option("--system", system, "builtin name, preset, or path to a custom-field JSON file");
        app->add_option("--param", params, "coupling override name=value (repeatable)");
        app->add_option("--branch", branch, "spin branch: +1 (aligned) or -1 (anti-aligned)");
    }

    SpinorSystem resolve() const {
        const Branch b = parse_branch(branch);
        const ParamMap overrides = parse_params(params);
        if (const auto kind = kind_from_name(system)) {
            try {
                return SpinorSystem::builtin(*kind, overrides, b);
            } catch (const InvalidArgument& e) {
                throw UsageError("--param", e.what());
            }
        }
        const auto names = preset_names();
        if (std::find(names.begin(), names.end(), system) != names.end()) {
            try {
                return SpinorSystem::custom(*preset_field_spec(system, overrides), b);
            } catch (const InvalidArgument& e) {
                throw UsageError("--param", e.what());
            }
        }
        if (!std::filesystem::exists(system))
            throw UsageError("--system", "'" + system + "' is not a builtin, a preset, or an existing file");
        return load_custom(system, overrides, b);
    }
};

struct OutputOptions {
    std::string out_path;
    void attach(CLI::App* app) { app->add_option("--out", out_path, "write the result here instead of stdout"); }

    void emit(const std::string& text, std::ostream& out) const {
        if (out_path.empty()) {
            out << text;
            return;
        }
        std::ofstream f(out_path, std::ios::binary | std::ios::trunc);
        if (!f) throw UsageError("--out", "cannot open '" + out_path + "' for writing");
        f << text;
        f.flush();
        if (!f) throw UsageError("--out", "failed writing '" + out_path + "'");
    }
    void emit(const json& j, std::ostream& out) const { emit(j.dump(2) + "\n", out); }
};

LoopSpec parse_loop(const std::string& text, int steps, bool reverse) {
    const std::string shape = text.substr(0, text.find(':'));
    const int orientation = reverse ? -1 : 1;
    if (shape == "circle") {
        const auto kv = parse_shape("--loop", text).second;
        double r = 1.0;
        Vec3 c = Vec3::Zero();
        int turns = 1;
        Axis normal = Axis::Z;
        for (const auto& [key, value] : kv) {
            if (key == "r") r = parse_number("--loop r", value);
            else if (key == "cx") c.x() = parse_number("--loop cx", value);
            else if (key == "cy") c.y() = parse_number("--loop cy", value);
            else if (key == "cz") c.z() = parse_number("--loop cz", value);
            else if (key == "turns") {
                const double t = parse_number("--loop turns", value);
                if (t != std::floor(t) || t < 1 || t > 1e6) throw UsageError("--loop turns", "must be a positive integer");
                turns = static_cast<int>(t);
            } else if (key == "normal") {
                if (value == "x") normal = Axis::X;
                else if (value == "y") normal = Axis::Y;
                else if (value == "z") normal = Axis::Z;
                else throw UsageError("--loop normal", "expected x, y or z");
            } else {
                throw UsageError("--loop", "unknown circle key '" + key + "' (r, cx, cy, cz, turns, normal)");
            }
        }
        LoopSpec spec = LoopSpec::circle(r, steps, c, turns, orientation);
        std::get<CircleLoop>(spec.shape).normal = normal;
        try {
            spec.validate();
        } catch (const InvalidArgument& e) {
            throw UsageError("--loop", e.what());
        }
        return spec;
    }
    if (shape == "polyline") {
        // polyline:x,y,z;x,y,z;...
        const auto colon = text.find(':');
        if (colon == std::string::npos) throw UsageError("--loop", "polyline needs points: polyline:x,y,z;x,y,z;...");
        std::vector<Vec3> pts;
        for (const auto& p : split(std::string_view(text).substr(colon + 1), ';')) pts.push_back(parse_vec3("--loop", p));
        if (pts.size() >= 2 && pts.front() != pts.back()) pts.push_back(pts.front());
        LoopSpec spec = LoopSpec::polyline(std::move(pts), steps, orientation);
        try {
            spec.validate();
        } catch (const InvalidArgument& e) {
            throw UsageError("--loop", e.what());
        }
        return spec;
    }
    throw UsageError("--loop", "expected circle:r=...[,cx=,cy=,cz=,turns=,normal=] or polyline:x,y,z;...");
}

ChartPolicy parse_chart(const std::string& text) {
    if (text == "auto") return ChartPolicy::Auto;
    if (text == "north") return ChartPolicy::North;
    if (text == "south") return ChartPolicy::South;
    throw UsageError("--chart", "expected auto, north or south, got '" + text + "'");
}

// Registers a subcommand and binds its action.
struct Command {
    CLI::App* app;
    std::function<int()> action;
};

int dispatch(const std::vector<Command>& commands) {
    for (const auto& c : commands)
        if (c.app->parsed()) return c.action();
    throw UsageError("command", "expected one of catalog, map, berry, flux, winding, verify, trajectory, hopf");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App root{"berrytop: Berry curvature and monopole gauge fields of SU(2) spinor systems"};
    root.require_subcommand(1);
    root.set_help_all_flag("--help-all", "show help for every command");

    unsigned threads = 0;
    root.add_option("--threads", threads, "worker threads (default BERRYTOP_THREADS or hardware)");

    std::vector<Command> commands;

    // catalog
    OutputOptions catalog_out;
    auto* catalog = root.add_subcommand("catalog", "list builtin systems and presets");
    catalog_out.attach(catalog);
    commands.push_back({catalog, [&] {
                            json list = json::array();
                            for (SystemKind k : builtin_kinds()) {
                                list.push_back({{"name", kind_name(k)},
                                                {"kind", "builtin"},
                                                {"coupling", coupling_name(k)},
                                                {"field", field_formula(k)}});
                            }
                            for (const auto& name : preset_names()) {
                                const FieldSpec spec = *preset_field_spec(name);
                                list.push_back({{"name", name}, {"kind", "preset"}, {"spec", to_json(spec)}});
                            }
                            catalog_out.emit(json{{"systems", list}}, out);
                            return kExitOk;
                        }});

    // map
    SystemOptions map_sys;
    OutputOptions map_out;
    std::string quantity = "curvature", plane = "z=0", map_format = "csv";
    double range = 2.0;
    int grid = 64;
    auto* map = root.add_subcommand("map", "sample field, gauge or curvature on a plane");
    map_sys.attach(map);
    map_out.attach(map);
    map->add_option("--quantity", quantity, "field, gauge or curvature");
    map->add_option("--plane", plane, "fixed coordinate, e.g. z=0");
    map->add_option("--range", range, "half-width of the square grid")->check(CLI::PositiveNumber);
    map->add_option("--grid", grid, "points per side")->check(CLI::Range(2, 20000));
    map->add_option("--format", map_format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    commands.push_back({map, [&] {
                            const SpinorSystem sys = map_sys.resolve();
                            MapQuantity q;
                            PlaneSpec p;
                            try {
                                q = map_quantity_from_string(quantity);
                            } catch (const InvalidArgument& e) {
                                throw UsageError("--quantity", e.what());
                            }
                            try {
                                p = PlaneSpec::parse(plane);
                            } catch (const InvalidArgument& e) {
                                throw UsageError("--plane", e.what());
                            }
                            const MapGrid g = compute_map(sys, q, p, range, grid, threads);
                            if (map_format == "csv") {
                                std::ostringstream s;
                                write_map_csv(g, s);
                                map_out.emit(s.str(), out);
                            } else {
                                json j = map_to_json(g);
                                j["system"] = sys.name();
                                j["quantity"] = to_string(q);
                                map_out.emit(j, out);
                            }
                            if (g.degenerate_count > 0)
                                err << "warning: " << g.degenerate_count << " of " << g.rows.size()
                                    << " grid points are degenerate (written as nan)\n";
                            return kExitOk;
                        }});

    // berry
    SystemOptions berry_sys;
    OutputOptions berry_out;
    std::string loop_text = "circle:r=1", chart_text = "auto";
    int steps = 4096;
    bool reverse = false;
    auto* berry = root.add_subcommand("berry", "Berry phase around a closed k-space loop");
    berry_sys.attach(berry);
    berry_out.attach(berry);
    berry->add_option("--loop", loop_text, "circle:r=1[,cx=,cy=,cz=,turns=,normal=] or polyline:x,y,z;...");
    berry->add_option("--steps", steps, "intervals per turn (circles) or in total (polylines)")
        ->check(CLI::Range(8, 100000000));
    berry->add_option("--chart", chart_text, "auto, north or south");
    berry->add_flag("--reverse", reverse, "traverse the loop clockwise");
    commands.push_back({berry, [&] {
                            const SpinorSystem sys = berry_sys.resolve();
                            const LoopSpec loop = parse_loop(loop_text, steps, reverse);
                            const PhaseResult r = berry_phase_loop(sys, loop, sys.branch(), parse_chart(chart_text));
                            json j{{"system", sys.name()},
                                   {"branch", branch_label(sys.branch())},
                                   {"phase", r.phase},
                                   {"phase_over_pi", r.phase / std::numbers::pi},
                                   {"chart_switches", r.chart_switches}};
                            if (sys.is_planar()) {
                                try {
                                    j["winding"] = winding_number(sys, loop);
                                } catch (const NonPlanarField&) {
                                }
                            }
                            berry_out.emit(j, out);
                            return kExitOk;
                        }});

    // flux
    SystemOptions flux_sys;
    OutputOptions flux_out;
    std::string surface = "sphere:r=1", flux_field = "monopole";
    int n_theta = 256, n_phi = 256, n_r = 40000;
    auto* flux = root.add_subcommand("flux", "flux through a sphere or a kz=0 disk");
    flux_sys.attach(flux);
    flux_out.attach(flux);
    flux->add_option("--surface", surface, "sphere:r=R or disk:r=R");
    flux->add_option("--field", flux_field, "sphere only: monopole, curvature, or string:eps=E");
    flux->add_option("--n-theta", n_theta, "polar cells (sphere)")->check(CLI::Range(16, 1 << 16));
    flux->add_option("--n-phi", n_phi, "azimuthal cells")->check(CLI::Range(1, 1 << 16));
    flux->add_option("--n-r", n_r, "radial cells (disk)")->check(CLI::Range(1, 10000000));
    commands.push_back({flux, [&] {
                            const auto [shape, kv] = parse_shape("--surface", surface);
                            double r = 1.0;
                            for (const auto& [key, value] : kv) {
                                if (key != "r") throw UsageError("--surface", "unknown key '" + key + "' (only r)");
                                r = parse_number("--surface r", value);
                            }
                            if (!(r > 0.0)) throw UsageError("--surface r", "radius must be positive");
                            json j{{"surface", shape}, {"radius", r}};
                            if (shape == "disk") {
                                const SpinorSystem sys = flux_sys.resolve();
                                const double f = flux_disk(sys, r, sys.branch(), n_r, n_phi);
                                j.update({{"system", sys.name()},
                                          {"branch", branch_label(sys.branch())},
                                          {"field", "curvature"},
                                          {"flux", f},
                                          {"flux_over_2pi", f / (2.0 * std::numbers::pi)}});
                            } else if (shape == "sphere") {
                                SphereSpec sphere{r, n_theta, n_phi};
                                try {
                                    sphere.validate();
                                } catch (const InvalidArgument& e) {
                                    throw UsageError("--n-phi", e.what());
                                }
                                const auto [fname, fkv] = parse_shape("--field", flux_field);
                                CurvatureField field;
                                if (fname == "monopole") {
                                    const Branch b = parse_branch(flux_sys.branch);
                                    field = [b](const Vec3& v) {
                                        return monopole_curvature_B(BVector::from(v), b).components;
                                    };
                                } else if (fname == "string") {
                                    if (!fkv.count("eps")) throw UsageError("--field", "string needs eps=E");
                                    const double e = parse_number("--field eps", fkv.at("eps"));
                                    if (!(e > 0.0)) throw UsageError("--field eps", "must be positive");
                                    const RegularizationParam p(e);
                                    field = [p](const Vec3& v) {
                                        return regularized_string_field(BVector::from(v), p).components;
                                    };
                                    j["epsilon"] = e;
                                } else if (fname == "curvature") {
                                    const SpinorSystem sys = flux_sys.resolve();
                                    field = [sys](const Vec3& k) {
                                        return curvature_K(sys, KVector::from(k), sys.branch()).components;
                                    };
                                    j["system"] = sys.name();
                                } else {
                                    throw UsageError("--field", "expected monopole, curvature or string:eps=E");
                                }
                                const double f = flux_sphere(field, sphere);
                                j.update({{"field", fname}, {"flux", f}, {"flux_over_4pi", f / (4.0 * std::numbers::pi)}});
                            } else {
                                throw UsageError("--surface", "expected sphere:r=R or disk:r=R");
                            }
                            flux_out.emit(j, out);
                            return kExitOk;
                        }});

    // winding
    SystemOptions wind_sys;
    OutputOptions wind_out;
    std::string wind_loop = "circle:r=1";
    int wind_steps = 4096;
    auto* winding = root.add_subcommand("winding", "winding number of a planar field around a loop");
    wind_sys.attach(winding);
    wind_out.attach(winding);
    winding->add_option("--loop", wind_loop, "loop as for berry");
    winding->add_option("--steps", wind_steps, "intervals")->check(CLI::Range(8, 100000000));
    commands.push_back({winding, [&] {
                            const SpinorSystem sys = wind_sys.resolve();
                            const int w = winding_number(sys, parse_loop(wind_loop, wind_steps, false));
                            wind_out.emit(json{{"system", sys.name()}, {"winding", w}}, out);
                            return kExitOk;
                        }});

    // verify
    OutputOptions verify_out;
    std::string suite = "all";
    auto* verify = root.add_subcommand("verify", "run the self-check suite");
    verify_out.attach(verify);
    std::vector<std::string> suite_names{"all"};
    for (const auto& s : verify_suites()) suite_names.push_back(s.name);
    verify->add_option("--suite", suite, "all or one suite")->check(CLI::IsMember(suite_names));
    commands.push_back({verify, [&] {
                            const VerifyReport report = run_verify(suite, threads);
                            verify_out.emit(report.to_json(), out);
                            for (const auto& c : report.checks) {
                                if (c.passed) continue;
                                err << "FAILED [" << c.criterion << "] " << c.name << ": measured " << c.measured.dump()
                                    << ", expected " << c.expected.dump();
                                if (c.tolerance > 0.0) err << ", tolerance " << c.tolerance;
                                if (!c.detail.empty()) err << " (" << c.detail << ")";
                                err << "\n";
                            }
                            return report.passed() ? kExitOk : kExitVerifyFailed;
                        }});

    // trajectory
    SystemOptions traj_sys;
    OutputOptions traj_out;
    std::string k0 = "1,0,0", efield = "-0.01,0,0", traj_format = "json";
    double dt = 0.01, mass = 1.0;
    long traj_steps = 10000, stride = 100;
    int ensemble = 0;
    std::uint64_t seed = 1;
    auto* trajectory = root.add_subcommand("trajectory", "semiclassical trajectory or branch ensemble");
    traj_sys.attach(trajectory);
    traj_out.attach(trajectory);
    trajectory->add_option("--k", k0, "initial wavevector kx,ky,kz");
    trajectory->add_option("--E,--drive", efield, "applied field Ex,Ey,Ez");
    trajectory->add_option("--dt", dt, "time step")->check(CLI::PositiveNumber);
    trajectory->add_option("--steps", traj_steps, "RK4 steps")->check(CLI::Range(0L, 1000000000L));
    trajectory->add_option("--mass", mass, "band mass")->check(CLI::PositiveNumber);
    trajectory->add_option("--stride", stride, "sample every N steps")->check(CLI::Range(1L, 1000000000L));
    trajectory->add_option("--ensemble", ensemble, "run N particles on both branches")->check(CLI::Range(0, 10000000));
    trajectory->add_option("--seed", seed, "ensemble seed");
    trajectory->add_option("--format", traj_format, "json or csv (single trajectory samples)")
        ->check(CLI::IsMember({"csv", "json"}));
    commands.push_back({trajectory, [&] {
                            const SpinorSystem sys = traj_sys.resolve();
                            DriveConfig drive;
                            drive.E = parse_vec3("--E", efield);
                            drive.dt = dt;
                            drive.steps = traj_steps;
                            drive.mass = mass;
                            if (ensemble > 0) {
                                EnsembleOptions opts;
                                opts.threads = threads;
                                const EnsembleResult r = ensemble_separation(sys, drive, ensemble, seed, opts);
                                traj_out.emit(json{{"system", sys.name()},
                                                   {"particles", ensemble},
                                                   {"seed", seed},
                                                   {"used", r.used},
                                                   {"dropped", r.dropped},
                                                   {"mean_transverse_aligned", r.mean_transverse_aligned},
                                                   {"mean_transverse_anti", r.mean_transverse_anti},
                                                   {"separation", r.separation}},
                                              out);
                                if (r.dropped > 0)
                                    err << "warning: " << r.dropped << " particles hit a field zero and were dropped\n";
                                return kExitOk;
                            }
                            const ParticleState start{Vec3::Zero(), KVector::from(parse_vec3("--k", k0)), sys.branch()};
                            const TrajectoryRecord rec = integrate_trajectory(start, drive, sys, stride);
                            if (traj_format == "csv") {
                                std::ostringstream s;
                                s << "t,rx,ry,rz,kx,ky,kz\n";
                                for (const auto& smp : rec.samples)
                                    s << format_double(smp.t) << ',' << format_double(smp.r.x()) << ','
                                      << format_double(smp.r.y()) << ',' << format_double(smp.r.z()) << ','
                                      << format_double(smp.k.kx) << ',' << format_double(smp.k.ky) << ','
                                      << format_double(smp.k.kz) << '\n';
                                traj_out.emit(s.str(), out);
                                return kExitOk;
                            }
                            json samples = json::array();
                            for (const auto& smp : rec.samples)
                                samples.push_back({{"t", smp.t},
                                                   {"r", {smp.r.x(), smp.r.y(), smp.r.z()}},
                                                   {"k", {smp.k.kx, smp.k.ky, smp.k.kz}}});
                            const Vec3& a = rec.anomalous_displacement;
                            traj_out.emit(json{{"system", sys.name()},
                                               {"branch", branch_label(sys.branch())},
                                               {"samples", samples},
                                               {"anomalous_displacement", {a.x(), a.y(), a.z()}},
                                               {"transverse_displacement", rec.transverse_displacement}},
                                          out);
                            return kExitOk;
                        }});

    // hopf
    OutputOptions hopf_out;
    double theta = std::numbers::pi / 3.0, phi = 0.5;
    auto* hopf = root.add_subcommand("hopf", "Hopf-bundle chart checks at a point of S^2");
    hopf_out.attach(hopf);
    hopf->add_option("--theta", theta, "polar angle in [0, pi]")->check(CLI::Range(0.0, std::numbers::pi));
    hopf->add_option("--phi", phi, "azimuth");
    commands.push_back({hopf, [&] {
                            const auto n = omega_pullback(Chart::North, theta, phi);
                            const auto s = omega_pullback(Chart::South, theta, phi);
                            const auto g_sn = transition_function(Chart::South, Chart::North, phi);
                            const auto g_ns = transition_function(Chart::North, Chart::South, phi);
                            const S3Point pn = section(Chart::North, theta, phi);
                            const S3Point ps = section(Chart::South, theta, phi);
                            const Vec3 xn = hopf_project(pn), xs = hopf_project(ps);
                            const double fiber = std::max(std::abs(pn.z1 - g_sn * ps.z1), std::abs(pn.z2 - g_sn * ps.z2));
                            const auto cplx = [](std::complex<double> z) { return json{z.real(), z.imag()}; };
                            hopf_out.emit(
                                json{{"theta", theta},
                                     {"phi", phi},
                                     {"north", {{"a_theta", n.a_theta}, {"a_phi", n.a_phi}}},
                                     {"south", {{"a_theta", s.a_theta}, {"a_phi", s.a_phi}}},
                                     {"expected_north_a_phi", 0.5 * (1.0 - std::cos(theta))},
                                     {"expected_south_a_phi", -0.5 * (1.0 + std::cos(theta))},
                                     {"g_SN", cplx(g_sn)},
                                     {"g_NS", cplx(g_ns)},
                                     {"cocycle_residual", std::abs(g_sn * g_ns - 1.0)},
                                     {"fiber_residual", fiber},
                                     {"projection_north", {xn.x(), xn.y(), xn.z()}},
                                     {"projection_south", {xs.x(), xs.y(), xs.z()}}},
                                out);
                            return kExitOk;
                        }});

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        root.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << root.help();
        return kExitOk;
    } catch (const CLI::CallForAllHelp&) {
        out << root.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return kExitInputError;
    }

    try {
        return dispatch(commands);
    } catch (const UsageError& e) {
        err << "error: " << e.what() << "\n";
        return kExitInputError;
    } catch (const ParseError& e) {
        err << "error: " << e.what() << "\n";
        return kExitInputError;
    } catch (const ContractViolation& e) {
        err << "error: contract violated: " << e.what() << "\n";
        return kExitVerifyFailed;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return kExitInputError;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitVerifyFailed;
    }
}

}  // namespace berrytop::cli
