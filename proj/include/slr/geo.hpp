#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace slr {

inline constexpr double kEarthRadiusKm = 6371.0088;
inline constexpr double kDefaultBandwidthKm = 100.0;

struct GeoPoint {
    double lat = 0.0;
    double lon = 0.0;
};

/// Great-circle distance on a sphere of radius kEarthRadiusKm.
double haversine_km(GeoPoint p, GeoPoint q);

/// Pair spatial score: log10 of the distance (floored at 1 km) plus lambda
/// when the pair crosses a border.
double spatial_score_pair(double distance_km, bool cross_border, double lambda);

struct WeightedPoint {
    GeoPoint point;
    double weight = 0.0;
};

struct GridSpec {
    double lat_min = -90.0;
    double lat_max = 90.0;
    double lon_min = -180.0;
    double lon_max = 180.0;
    std::size_t rows = 180;
    std::size_t cols = 360;
};

/// Row-major density grid; row 0 is the northernmost row.
struct DensityGrid {
    GridSpec spec;
    double bandwidth_km = kDefaultBandwidthKm;
    std::vector<double> values;

    double at(std::size_t row, std::size_t col) const { return values[row * spec.cols + col]; }
    GeoPoint cell_center(std::size_t row, std::size_t col) const;
};

/// Gaussian kernel sum over haversine distances evaluated at every cell
/// center. Throws InputError on a non-positive bandwidth or empty/inverted
/// grid. Rows are evaluated in parallel; each cell sums points in input order.
DensityGrid kde_grid(std::span<const WeightedPoint> points, double bandwidth_km, const GridSpec& spec);

/// Header `lat_min,lat_max,lon_min,lon_max,rows,cols,bandwidth_km` followed by
/// one comma-separated line per grid row.
std::string serialize_grid(const DensityGrid& grid);

}  // namespace slr
