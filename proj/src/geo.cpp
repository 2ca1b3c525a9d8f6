#include "cellplan/geo.hpp"

#include <cmath>
#include <stdexcept>

namespace cellplan {

bool geo_point_valid(const GeoPoint& p) {
    return std::isfinite(p.lat) && std::isfinite(p.lon) && p.lat >= -90.0 && p.lat <= 90.0 &&
           p.lon >= -180.0 && p.lon <= 180.0;
}

double haversine_distance(const GeoPoint& a, const GeoPoint& b) {
    const double lat1 = deg_to_rad(a.lat);
    const double lat2 = deg_to_rad(b.lat);
    const double dlat = deg_to_rad(b.lat - a.lat);
    const double dlon = deg_to_rad(b.lon - a.lon);

    const double s = std::sin(dlat / 2.0) * std::sin(dlat / 2.0) +
                     std::cos(lat1) * std::cos(lat2) * std::sin(dlon / 2.0) * std::sin(dlon / 2.0);
    const double c = 2.0 * std::atan2(std::sqrt(s), std::sqrt(1.0 - s));
    return kEarthRadiusM * c;
}

EnuPoint geo_to_enu(const GeoPoint& origin, const GeoPoint& p) {
    const double dlat = p.lat - origin.lat;
    const double dlon = p.lon - origin.lon;
    if (std::abs(dlat) >= 1.0 || std::abs(dlon) >= 1.0) {
        throw std::invalid_argument("geo_to_enu: point beyond the 1 degree locality bound");
    }
    return EnuPoint{kEarthRadiusM * deg_to_rad(dlon) * std::cos(deg_to_rad(origin.lat)),
                    kEarthRadiusM * deg_to_rad(dlat)};
}

GeoPoint enu_to_geo(const GeoPoint& origin, const EnuPoint& e) {
    return GeoPoint{origin.lat + rad_to_deg(e.y / kEarthRadiusM),
                    origin.lon + rad_to_deg(e.x / (kEarthRadiusM * std::cos(deg_to_rad(origin.lat))))};
}

double bearing_deg(const GeoPoint& from, const GeoPoint& to) {
    const EnuPoint e = geo_to_enu(from, to);
    double b = rad_to_deg(std::atan2(e.x, e.y));
    if (b < 0.0) b += 360.0;
    return b;
}

Route cumulative_route_distance(std::span<const GeoPoint> points) {
    if (points.empty()) {
        throw std::invalid_argument("cumulative_route_distance: empty point list");
    }
    Route route;
    route.points.assign(points.begin(), points.end());
    route.cumulative_m.resize(points.size());
    route.cumulative_m[0] = 0.0;
    for (size_t i = 1; i < points.size(); ++i) {
        route.cumulative_m[i] = route.cumulative_m[i - 1] + haversine_distance(points[i - 1], points[i]);
    }
    return route;
}

} // namespace cellplan
