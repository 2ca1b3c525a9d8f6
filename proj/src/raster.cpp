#include "cellplan/raster.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "cellplan/errors.hpp"

namespace cellplan {

namespace {

std::string format_double(double v) {
    char buf[32];
    auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    if (ec != std::errc{}) throw std::runtime_error("format_double: to_chars failed");
    return std::string(buf, end);
}

bool parse_double(std::string_view token, double& out) {
    const char* first = token.data();
    const char* last = token.data() + token.size();
    auto [ptr, ec] = std::from_chars(first, last, out);
    return ec == std::errc{} && ptr == last;
}

std::string lower(std::string_view s) {
    std::string out(s);
    for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return out;
}

} // namespace

GeoPoint RasterGrid::cell_center(int row, int col) const {
    return enu_to_geo(origin, EnuPoint{(col + 0.5) * cell_size, (row + 0.5) * cell_size});
}

bool RasterGrid::same_extent(const RasterGrid& other) const {
    return origin == other.origin && cell_size == other.cell_size && ncols == other.ncols &&
           nrows == other.nrows;
}

void RasterGrid::validate() const {
    if (ncols <= 0 || nrows <= 0) throw std::invalid_argument("RasterGrid: ncols/nrows must be positive");
    if (!(cell_size > 0.0)) throw std::invalid_argument("RasterGrid: cell_size must be positive");
    if (values.size() != static_cast<size_t>(ncols) * nrows) {
        throw std::invalid_argument("RasterGrid: values length must equal ncols*nrows");
    }
    if (!geo_point_valid(origin)) throw std::invalid_argument("RasterGrid: invalid origin");
}

RasterGrid RasterGrid::filled(const GeoPoint& origin, double cell_size, int ncols, int nrows,
                              double value, double nodata) {
    RasterGrid g;
    g.origin = origin;
    g.cell_size = cell_size;
    g.ncols = ncols;
    g.nrows = nrows;
    g.nodata = nodata;
    g.values.assign(static_cast<size_t>(ncols) * nrows, value);
    g.validate();
    return g;
}

std::optional<std::pair<int, int>> raster_cell_index(const RasterGrid& grid, const GeoPoint& p) {
    const double dlat = p.lat - grid.origin.lat;
    const double dlon = p.lon - grid.origin.lon;
    // Anything beyond the projection's locality bound is far off any
    // desk-scale grid; report outside rather than erroring.
    if (std::abs(dlat) >= 1.0 || std::abs(dlon) >= 1.0) return std::nullopt;
    const EnuPoint e = geo_to_enu(grid.origin, p);
    const int col = static_cast<int>(std::floor(e.x / grid.cell_size));
    const int row = static_cast<int>(std::floor(e.y / grid.cell_size));
    if (!grid.in_bounds(row, col)) return std::nullopt;
    return std::make_pair(row, col);
}

double raster_lookup(const RasterGrid& grid, const GeoPoint& p) {
    const auto idx = raster_cell_index(grid, p);
    if (!idx) return grid.nodata;
    return grid.at(idx->first, idx->second);
}

RasterGrid parse_ascii_grid(std::string_view text) {
    std::istringstream in{std::string(text)};
    std::string line;
    int line_no = 0;

    struct HeaderField {
        const char* key;
        double value;
    };
    HeaderField fields[6] = {{"ncols", 0},     {"nrows", 0},    {"xllcorner", 0},
                             {"yllcorner", 0}, {"cellsize", 0}, {"nodata_value", 0}};

    for (auto& field : fields) {
        if (!std::getline(in, line)) {
            throw ParseError(line_no + 1, std::string("missing header field ") + field.key);
        }
        ++line_no;
        std::istringstream ls(line);
        std::string key, value, extra;
        if (!(ls >> key >> value) || (ls >> extra)) {
            throw ParseError(line_no, std::string("expected '") + field.key + " <value>'");
        }
        if (lower(key) != field.key) {
            throw ParseError(line_no, "expected header field " + std::string(field.key) + ", got " + key);
        }
        if (!parse_double(value, field.value)) {
            throw ParseError(line_no, std::string("non-numeric value for ") + field.key + ": " + value);
        }
    }

    RasterGrid grid;
    const double ncols_d = fields[0].value;
    const double nrows_d = fields[1].value;
    if (ncols_d <= 0 || nrows_d <= 0 || ncols_d != std::floor(ncols_d) || nrows_d != std::floor(nrows_d)) {
        throw ParseError(1, "ncols/nrows must be positive integers");
    }
    grid.ncols = static_cast<int>(ncols_d);
    grid.nrows = static_cast<int>(nrows_d);
    grid.origin = GeoPoint{fields[3].value, fields[2].value};
    grid.cell_size = fields[4].value;
    grid.nodata = fields[5].value;
    if (!(grid.cell_size > 0.0)) throw ParseError(5, "cellsize must be positive");
    if (!geo_point_valid(grid.origin)) throw ParseError(4, "xllcorner/yllcorner out of range");

    const size_t expected = static_cast<size_t>(grid.ncols) * grid.nrows;
    grid.values.assign(expected, grid.nodata);

    // Values arrive north row first; storage is south row first.
    size_t count = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::istringstream ls(line);
        std::string token;
        while (ls >> token) {
            if (count >= expected) {
                throw ParseError(line_no, "too many values: expected " + std::to_string(expected));
            }
            double v = 0;
            if (!parse_double(token, v)) {
                throw ParseError(line_no, "non-numeric value: " + token);
            }
            const int file_row = static_cast<int>(count) / grid.ncols;
            const int col = static_cast<int>(count) % grid.ncols;
            grid.at(grid.nrows - 1 - file_row, col) = v;
            ++count;
        }
    }
    if (count != expected) {
        throw ParseError(line_no + 1, "expected " + std::to_string(expected) + " values, got " +
                                          std::to_string(count));
    }
    return grid;
}

std::string write_ascii_grid(const RasterGrid& grid) {
    grid.validate();
    std::string out;
    out.reserve(grid.values.size() * 8 + 128);
    out += "ncols " + std::to_string(grid.ncols) + "\n";
    out += "nrows " + std::to_string(grid.nrows) + "\n";
    out += "xllcorner " + format_double(grid.origin.lon) + "\n";
    out += "yllcorner " + format_double(grid.origin.lat) + "\n";
    out += "cellsize " + format_double(grid.cell_size) + "\n";
    out += "NODATA_value " + format_double(grid.nodata) + "\n";
    for (int row = grid.nrows - 1; row >= 0; --row) {
        for (int col = 0; col < grid.ncols; ++col) {
            if (col > 0) out += ' ';
            out += format_double(grid.at(row, col));
        }
        out += '\n';
    }
    return out;
}

} // namespace cellplan
