#pragma once

#include <span>
#include <vector>

namespace cellplan {

/// Mean Earth radius of the spherical model used throughout (meters).
inline constexpr double kEarthRadiusM = 6371000.0;

inline constexpr double kPi = 3.14159265358979323846;

constexpr double deg_to_rad(double deg) { return deg * kPi / 180.0; }
constexpr double rad_to_deg(double rad) { return rad * 180.0 / kPi; }

/// Geographic position, WGS84 degrees.
struct GeoPoint {
    double lat = 0.0; // degrees, -90..90
    double lon = 0.0; // degrees, -180..180

    bool operator==(const GeoPoint&) const = default;
};

bool geo_point_valid(const GeoPoint& p);

/// Local east/north offsets from a projection origin, meters.
struct EnuPoint {
    double x = 0.0; // meters east
    double y = 0.0; // meters north

    bool operator==(const EnuPoint&) const = default;
};

/// Great-circle distance on the mean-radius sphere, meters.
double haversine_distance(const GeoPoint& a, const GeoPoint& b);

/// Equirectangular projection into a local frame anchored at `origin`:
/// x = R * dlon * cos(origin.lat), y = R * dlat. Only valid near the
/// origin; throws std::invalid_argument if |dlat| or |dlon| >= 1 degree.
EnuPoint geo_to_enu(const GeoPoint& origin, const GeoPoint& p);

/// Exact inverse of geo_to_enu.
GeoPoint enu_to_geo(const GeoPoint& origin, const EnuPoint& e);

/// Initial bearing from `from` towards `to`, degrees clockwise from north
/// in [0, 360). Uses the local ENU frame (consistent with geo_to_enu).
double bearing_deg(const GeoPoint& from, const GeoPoint& to);

/// An ordered sequence of positions with the running along-track distance.
struct Route {
    std::vector<GeoPoint> points;
    std::vector<double> cumulative_m; // cumulative_m[0] == 0, nondecreasing

    double total_m() const { return cumulative_m.empty() ? 0.0 : cumulative_m.back(); }
};

/// Builds a Route by accumulating haversine leg distances.
/// Throws std::invalid_argument on an empty input.
Route cumulative_route_distance(std::span<const GeoPoint> points);

} // namespace cellplan
