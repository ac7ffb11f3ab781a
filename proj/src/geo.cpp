#include "slr/geo.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "slr/error.hpp"
#include "slr/format.hpp"
#include "slr/parallel.hpp"

namespace slr {

namespace {

constexpr double kDegToRad = std::numbers::pi / 180.0;

}  // namespace

double haversine_km(GeoPoint p, GeoPoint q) {
    const double phi1 = p.lat * kDegToRad;
    const double phi2 = q.lat * kDegToRad;
    const double dphi = (q.lat - p.lat) * kDegToRad;
    const double dlambda = (q.lon - p.lon) * kDegToRad;
    const double s1 = std::sin(dphi / 2.0);
    const double s2 = std::sin(dlambda / 2.0);
    const double h = s1 * s1 + std::cos(phi1) * std::cos(phi2) * s2 * s2;
    return 2.0 * kEarthRadiusKm * std::asin(std::min(1.0, std::sqrt(h)));
}

double spatial_score_pair(double distance_km, bool cross_border, double lambda) {
    const double base = std::log10(std::max(distance_km, 1.0));
    return cross_border ? base + lambda : base;
}

GeoPoint DensityGrid::cell_center(std::size_t row, std::size_t col) const {
    const double dlat = (spec.lat_max - spec.lat_min) / static_cast<double>(spec.rows);
    const double dlon = (spec.lon_max - spec.lon_min) / static_cast<double>(spec.cols);
    return {spec.lat_max - (static_cast<double>(row) + 0.5) * dlat,
            spec.lon_min + (static_cast<double>(col) + 0.5) * dlon};
}

DensityGrid kde_grid(std::span<const WeightedPoint> points, double bandwidth_km, const GridSpec& spec) {
    if (!(bandwidth_km > 0.0) || !std::isfinite(bandwidth_km))
        throw InputError("bandwidth must be a positive finite number of kilometers");
    if (spec.rows == 0 || spec.cols == 0) throw InputError("grid needs at least one row and one column");
    if (!(spec.lat_min < spec.lat_max) || !(spec.lon_min < spec.lon_max))
        throw InputError("grid bounds must satisfy lat_min < lat_max and lon_min < lon_max");
    if (spec.lat_min < -90.0 || spec.lat_max > 90.0 || spec.lon_min < -180.0 || spec.lon_max > 180.0)
        throw InputError("grid bounds outside valid latitude/longitude ranges");
    for (const auto& p : points)
        if (!(p.weight >= 0.0) || !std::isfinite(p.weight)) throw InputError("KDE weights must be finite and non-negative");

    DensityGrid grid;
    grid.spec = spec;
    grid.bandwidth_km = bandwidth_km;
    grid.values.assign(spec.rows * spec.cols, 0.0);
    const double two_h2 = 2.0 * bandwidth_km * bandwidth_km;

    parallel_for_chunks(spec.rows, [&](std::size_t begin, std::size_t end) {
        for (std::size_t r = begin; r < end; ++r) {
            for (std::size_t c = 0; c < spec.cols; ++c) {
                const GeoPoint center = grid.cell_center(r, c);
                double sum = 0.0;
                for (const auto& p : points) {
                    const double d = haversine_km(p.point, center);
                    sum += p.weight * std::exp(-d * d / two_h2);
                }
                grid.values[r * spec.cols + c] = sum;
            }
        }
    });
    return grid;
}

std::string serialize_grid(const DensityGrid& grid) {
    std::string out = "lat_min,lat_max,lon_min,lon_max,rows,cols,bandwidth_km\n";
    const auto& s = grid.spec;
    out += format_number(s.lat_min) + ',' + format_number(s.lat_max) + ',' + format_number(s.lon_min) + ',' +
           format_number(s.lon_max) + ',' + std::to_string(s.rows) + ',' + std::to_string(s.cols) + ',' +
           format_number(grid.bandwidth_km) + '\n';
    for (std::size_t r = 0; r < s.rows; ++r) {
        for (std::size_t c = 0; c < s.cols; ++c) {
            if (c) out += ',';
            out += format_number(grid.at(r, c));
        }
        out += '\n';
    }
    return out;
}

}  // namespace slr
