#include "berrytop/mapgrid.hpp"

#include "berrytop/curvature.hpp"
#include "berrytop/errors.hpp"
#include "berrytop/gauge.hpp"
#include "berrytop/parallel.hpp"

#include <cerrno>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <limits>
#include <ostream>

namespace berrytop {

MapQuantity map_quantity_from_string(std::string_view name) {
    if (name == "field") return MapQuantity::Field;
    if (name == "gauge") return MapQuantity::Gauge;
    if (name == "curvature") return MapQuantity::Curvature;
    throw InvalidArgument("unknown map quantity '" + std::string(name) + "' (expected field, gauge or curvature)");
}

const char* to_string(MapQuantity quantity) {
    switch (quantity) {
        case MapQuantity::Field: return "field";
        case MapQuantity::Gauge: return "gauge";
        case MapQuantity::Curvature: return "curvature";
    }
    return "?";
}

PlaneSpec PlaneSpec::parse(std::string_view text) {
    const auto bad = [&] {
        return InvalidArgument("plane '" + std::string(text) + "' must look like z=0, x=1.5 or ky=-2");
    };
    const auto eq = text.find('=');
    if (eq == std::string_view::npos) throw bad();
    std::string_view axis = text.substr(0, eq);
    if (axis.size() == 2 && axis[0] == 'k') axis.remove_prefix(1);
    PlaneSpec p;
    if (axis == "x") p.fixed_axis = 0;
    else if (axis == "y") p.fixed_axis = 1;
    else if (axis == "z") p.fixed_axis = 2;
    else throw bad();
    const std::string_view num = text.substr(eq + 1);
    const auto [ptr, ec] = std::from_chars(num.data(), num.data() + num.size(), p.value);
    if (ec != std::errc() || ptr != num.data() + num.size() || !std::isfinite(p.value)) throw bad();
    return p;
}

std::pair<int, int> PlaneSpec::free_axes() const {
    switch (fixed_axis) {
        case 0: return {1, 2};
        case 1: return {0, 2};
        default: return {0, 1};
    }
}

MapGrid compute_map(const SpinorSystem& system, MapQuantity quantity, const PlaneSpec& plane, double range, int n,
                    unsigned threads) {
    if (n < 2) throw InvalidArgument("grid size must be at least 2");
    if (!(range > 0.0) || !std::isfinite(range)) throw InvalidArgument("range must be positive and finite");
    const auto [outer, inner] = plane.free_axes();
    MapGrid grid;
    grid.n = n;
    grid.rows.resize(static_cast<std::size_t>(n) * static_cast<std::size_t>(n));
    const double nan = std::numeric_limits<double>::quiet_NaN();

    auto coord = [&](int i) { return -range + 2.0 * range * i / (n - 1); };
    parallel_for(grid.rows.size(), worker_count(threads), [&, outer = outer, inner = inner](std::size_t idx) {
        const int i = static_cast<int>(idx / static_cast<std::size_t>(n));
        const int j = static_cast<int>(idx % static_cast<std::size_t>(n));
        Vec3 kv;
        kv[plane.fixed_axis] = plane.value;
        kv[outer] = coord(i);
        kv[inner] = coord(j);
        const KVector k = KVector::from(kv);
        MapRow row{k, Vec3::Constant(nan), nan, true};
        try {
            Vec3 v;
            switch (quantity) {
                case MapQuantity::Field:
                    v = eval_field(system, k).vec();
                    break;
                case MapQuantity::Gauge: {
                    const BVector b = eval_field(system, k);
                    v = pullback_gauge_K(system, k, auto_chart(b)).components;
                    break;
                }
                case MapQuantity::Curvature:
                    v = curvature_K(system, k, system.branch()).components;
                    break;
            }
            if (v.allFinite()) row = {k, v, v.norm(), false};
        } catch (const DegenerateField&) {
        } catch (const ChartSingular&) {
        } catch (const EvalError&) {
        }
        grid.rows[idx] = row;
    });
    for (const MapRow& r : grid.rows) grid.degenerate_count += r.degenerate ? 1 : 0;
    return grid;
}

std::string format_double(double x) {
    if (std::isnan(x)) return "nan";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

void write_map_csv(const MapGrid& grid, std::ostream& out) {
    out << "kx,ky,kz,vx,vy,vz,magnitude\n";
    for (const MapRow& r : grid.rows) {
        out << format_double(r.k.kx) << ',' << format_double(r.k.ky) << ',' << format_double(r.k.kz) << ','
            << format_double(r.v.x()) << ',' << format_double(r.v.y()) << ',' << format_double(r.v.z()) << ','
            << format_double(r.magnitude) << '\n';
    }
}

void write_map_csv(const MapGrid& grid, const std::string& path) {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw InvalidArgument("cannot open '" + path + "' for writing: " + std::strerror(errno));
    write_map_csv(grid, f);
    f.flush();
    if (!f) throw InvalidArgument("failed writing '" + path + "'");
}

nlohmann::json map_to_json(const MapGrid& grid) {
    auto num = [](double x) -> nlohmann::json {
        if (std::isnan(x)) return nullptr;
        return x;
    };
    nlohmann::json rows = nlohmann::json::array();
    for (const MapRow& r : grid.rows) {
        rows.push_back({{"k", {r.k.kx, r.k.ky, r.k.kz}},
                        {"v", {num(r.v.x()), num(r.v.y()), num(r.v.z())}},
                        {"magnitude", num(r.magnitude)}});
    }
    return {{"grid", grid.n}, {"degenerate", grid.degenerate_count}, {"rows", rows}};
}

}  // namespace berrytop
