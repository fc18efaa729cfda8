#pragma once

// Field, gauge and curvature maps on a square grid in a coordinate plane of k-space.

#include "berrytop/field.hpp"
#include "berrytop/types.hpp"

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

namespace berrytop {

enum class MapQuantity { Field, Gauge, Curvature };

MapQuantity map_quantity_from_string(std::string_view name);
const char* to_string(MapQuantity quantity);

/// A plane such as "z=0" or "x=-0.5": one fixed k component, the other two swept.
struct PlaneSpec {
    int fixed_axis = 2;
    double value = 0.0;

    static PlaneSpec parse(std::string_view text);
    /// The two swept axes in increasing order; the first is the outer loop.
    std::pair<int, int> free_axes() const;
};

struct MapRow {
    KVector k;
    Vec3 v;
    double magnitude;
    bool degenerate;
};

struct MapGrid {
    int n = 0;
    std::vector<MapRow> rows;
    int degenerate_count = 0;
};

/// Samples `quantity` at n x n points spanning [-range, range] on both free
/// axes, point i at -range + 2 range i / (n - 1). Gauge samples use the
/// automatic chart. Points where the quantity is undefined become NaN rows.
MapGrid compute_map(const SpinorSystem& system, MapQuantity quantity, const PlaneSpec& plane, double range, int n,
                    unsigned threads = 0);

/// Header kx,ky,kz,vx,vy,vz,magnitude then one row per sample, 17 significant
/// digits, LF endings.
void write_map_csv(const MapGrid& grid, std::ostream& out);
void write_map_csv(const MapGrid& grid, const std::string& path);

nlohmann::json map_to_json(const MapGrid& grid);

/// %.17g formatting with NaN spelled "nan".
std::string format_double(double x);

}  // namespace berrytop
