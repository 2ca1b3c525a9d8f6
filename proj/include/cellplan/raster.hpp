#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "cellplan/geo.hpp"

namespace cellplan {

/// Georeferenced 2D grid. The grid lives in the local ENU frame anchored
/// at `origin` (the lower-left / southwest corner); cells are square with
/// `cell_size` meters on a side. Values are stored row-major with the
/// southernmost row first, so values[0] is the southwest cell.
struct RasterGrid {
    GeoPoint origin;
    double cell_size = 0.0; // meters
    int ncols = 0;
    int nrows = 0;
    double nodata = -9999.0;
    std::vector<double> values;

    double at(int row, int col) const { return values[static_cast<size_t>(row) * ncols + col]; }
    double& at(int row, int col) { return values[static_cast<size_t>(row) * ncols + col]; }

    bool in_bounds(int row, int col) const {
        return row >= 0 && row < nrows && col >= 0 && col < ncols;
    }

    /// Geographic position of a cell's center.
    GeoPoint cell_center(int row, int col) const;

    /// True when the other grid has identical origin, cell size and shape.
    bool same_extent(const RasterGrid& other) const;

    /// Throws std::invalid_argument when the grid invariants are violated.
    void validate() const;

    static RasterGrid filled(const GeoPoint& origin, double cell_size, int ncols, int nrows,
                             double value, double nodata = -9999.0);
};

/// Value of the cell containing `p` (nearest-cell semantics), or the
/// grid's nodata value when `p` lies outside the extent. Total function.
double raster_lookup(const RasterGrid& grid, const GeoPoint& p);

/// (row, col) of the cell containing `p`, or nullopt when outside.
std::optional<std::pair<int, int>> raster_cell_index(const RasterGrid& grid, const GeoPoint& p);

/// Parses an ESRI ASCII grid. Header keys are expected in the standard
/// order (ncols, nrows, xllcorner, yllcorner, cellsize, NODATA_value),
/// matched case-insensitively; xllcorner/yllcorner carry the origin
/// longitude/latitude in degrees and cellsize is in meters (see README).
/// Values follow row-major, north row first. Throws ParseError with the
/// offending line number on malformed input.
RasterGrid parse_ascii_grid(std::string_view text);

/// Inverse of parse_ascii_grid; values are written with shortest
/// round-trip formatting so parse(write(g)) == g bit-exactly.
std::string write_ascii_grid(const RasterGrid& grid);

} // namespace cellplan
