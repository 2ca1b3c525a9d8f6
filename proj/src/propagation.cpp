#include "cellplan/propagation.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <thread>

#include <json.hpp>

#include "cellplan/errors.hpp"

namespace cellplan {

namespace {

constexpr double kMaxAttenuationDb = 30.0; // A_max per pattern plane
constexpr double kMinPathDistanceM = 1.0;

double wrap_azimuth_offset(double deg) {
    while (deg > 180.0) deg -= 360.0;
    while (deg <= -180.0) deg += 360.0;
    return deg;
}

double free_space_path_loss_db(double distance_m, double freq_mhz) {
    return 20.0 * std::log10(4.0 * kPi * distance_m * freq_mhz * 1.0e6 / kSpeedOfLight);
}

/// Geometry of a target relative to a sector antenna.
struct TargetGeometry {
    double distance_2d_m = 0.0;
    double distance_3d_m = 0.0;
    double az_offset_deg = 0.0; // from sector azimuth
    double elevation_deg = 0.0; // of the ray towards the target, above horizontal
};

TargetGeometry target_geometry(const Sector& sector, const GeoPoint& target,
                               double target_ground_m, const SiteContext& ctx) {
    TargetGeometry g;
    g.distance_2d_m = haversine_distance(sector.site_position, target);
    const double h_site = ctx.site_ground_m + sector.acl_height_m;
    const double h_target = target_ground_m + ctx.ue_height_m;
    const double dh = h_target - h_site;
    g.distance_3d_m = std::hypot(g.distance_2d_m, dh);
    if (g.distance_2d_m > 0.0) {
        g.az_offset_deg = wrap_azimuth_offset(bearing_deg(sector.site_position, target) - sector.azimuth_deg);
        g.elevation_deg = rad_to_deg(std::atan2(dh, g.distance_2d_m));
    } else {
        g.az_offset_deg = 0.0;
        g.elevation_deg = dh >= 0.0 ? 90.0 : -90.0;
    }
    return g;
}

} // namespace

BeamSet BeamSet::evenly_spaced(int count, double envelope_deg, double az_beamwidth_deg,
                               double el_beamwidth_deg, double peak_gain_dbi) {
    if (count < 1) throw std::invalid_argument("BeamSet: count must be >= 1");
    if (!(envelope_deg > 0.0)) throw std::invalid_argument("BeamSet: envelope must be positive");
    BeamSet set;
    const double spacing = envelope_deg / count;
    for (int i = 0; i < count; ++i) {
        set.boresights_deg.push_back(-envelope_deg / 2.0 + (i + 0.5) * spacing);
    }
    set.az_beamwidth_deg = az_beamwidth_deg;
    set.el_beamwidth_deg = el_beamwidth_deg;
    set.peak_gain_dbi = peak_gain_dbi;
    set.validate();
    return set;
}

void BeamSet::validate() const {
    if (boresights_deg.empty()) throw std::invalid_argument("BeamSet: no boresights");
    if (!(az_beamwidth_deg > 0.0) || !(el_beamwidth_deg > 0.0)) {
        throw std::invalid_argument("BeamSet: beamwidths must be positive");
    }
    for (size_t i = 0; i + 1 < boresights_deg.size(); ++i) {
        if (!(boresights_deg[i] < boresights_deg[i + 1])) {
            throw std::invalid_argument("BeamSet: boresights must be strictly increasing");
        }
        // symmetry about zero
        const double a = boresights_deg[i];
        const double b = boresights_deg[boresights_deg.size() - 1 - i];
        if (std::abs(a + b) > 1e-9) {
            throw std::invalid_argument("BeamSet: boresights must be symmetric about 0");
        }
    }
}

void Sector::validate() const {
    if (!geo_point_valid(site_position)) throw std::invalid_argument("sector: invalid site position");
    if (!(acl_height_m > 0.0)) throw std::invalid_argument("sector: acl_height_m must be positive");
    if (azimuth_deg < 0.0 || azimuth_deg >= 360.0) {
        throw std::invalid_argument("sector: azimuth must be in [0, 360)");
    }
    if (std::abs(electrical_tilt_deg) > 15.0 || std::abs(mechanical_tilt_deg) > 15.0) {
        throw std::invalid_argument("sector: tilts must be within [-15, 15] degrees");
    }
    beams.validate();
}

const ClutterClass* ClutterTable::find(int id) const {
    for (const auto& c : classes) {
        if (c.id == id) return &c;
    }
    return nullptr;
}

void ClutterTable::validate() const {
    for (const auto& c : classes) {
        if (c.extra_loss_db < 0.0) {
            throw std::invalid_argument("clutter class " + std::to_string(c.id) +
                                        ": extra_loss_db must be nonnegative");
        }
        for (const auto& other : classes) {
            if (&c != &other && c.id == other.id) {
                throw std::invalid_argument("clutter table: duplicate id " + std::to_string(c.id));
            }
        }
    }
}

PathLossResult path_loss(double distance_3d_m, double carrier_freq_mhz, double h_bs_m,
                         double h_ut_m, bool los) {
    if (!(carrier_freq_mhz > 0.0)) throw std::invalid_argument("path_loss: frequency must be positive");
    if (!(h_bs_m > 0.0) || !(h_ut_m > 0.0)) {
        throw std::invalid_argument("path_loss: antenna heights must be positive");
    }
    PathLossResult r;
    double d = distance_3d_m;
    if (d < kMinPathDistanceM) {
        d = kMinPathDistanceM;
        r.distance_clamped = true;
    }
    const double f_ghz = carrier_freq_mhz / 1000.0;
    const double los_db = 28.0 + 22.0 * std::log10(d) + 20.0 * std::log10(f_ghz);
    double model = los_db;
    if (!los) {
        const double nlos_db =
            13.54 + 39.08 * std::log10(d) + 20.0 * std::log10(f_ghz) - 0.6 * (h_ut_m - 1.5);
        model = std::max(los_db, nlos_db);
    }
    r.loss_db = std::max(model, free_space_path_loss_db(d, carrier_freq_mhz) - 1.0);
    return r;
}

double beam_gain_dbi(const BeamSet& beams, int beam_idx, double az_offset_deg,
                     double el_offset_deg) {
    if (beam_idx < 0 || beam_idx >= beams.count()) {
        throw std::out_of_range("beam_gain: beam index " + std::to_string(beam_idx) +
                                " outside 0.." + std::to_string(beams.count() - 1));
    }
    const double daz = wrap_azimuth_offset(az_offset_deg - beams.boresights_deg[beam_idx]);
    const double az_att = std::min(12.0 * (daz / beams.az_beamwidth_deg) * (daz / beams.az_beamwidth_deg),
                                   kMaxAttenuationDb);
    const double del = el_offset_deg;
    const double el_att = std::min(12.0 * (del / beams.el_beamwidth_deg) * (del / beams.el_beamwidth_deg),
                                   kMaxAttenuationDb);
    return beams.peak_gain_dbi - az_att - el_att;
}

double beam_nrsrp_dbm(const Sector& sector, const CarrierConfig& carrier, int beam_idx,
                      const GeoPoint& target, double target_ground_m,
                      const ClutterClass& clutter, const SiteContext& ctx) {
    const TargetGeometry g = target_geometry(sector, target, target_ground_m, ctx);
    const double total_tilt = sector.electrical_tilt_deg + sector.mechanical_tilt_deg;
    // The beam boresight sits at elevation -tilt; el offset is measured
    // from it.
    const double el_offset = g.elevation_deg + total_tilt;
    const double gain = beam_gain_dbi(sector.beams, beam_idx, g.az_offset_deg, el_offset);
    const PathLossResult pl =
        path_loss(g.distance_3d_m, carrier.center_freq_mhz, sector.acl_height_m, ctx.ue_height_m, ctx.los);
    return sector.tx_power_per_beam_dbm + gain - pl.loss_db - clutter.extra_loss_db -
           10.0 * std::log10(carrier.subcarrier_count);
}

BeamChoice best_beam_nrsrp(const Sector& sector, const CarrierConfig& carrier,
                           const GeoPoint& target, double target_ground_m,
                           const ClutterClass& clutter, const SiteContext& ctx) {
    BeamChoice best{0, beam_nrsrp_dbm(sector, carrier, 0, target, target_ground_m, clutter, ctx)};
    for (int idx = 1; idx < sector.beams.count(); ++idx) {
        const double v = beam_nrsrp_dbm(sector, carrier, idx, target, target_ground_m, clutter, ctx);
        if (v > best.nrsrp_dbm) best = BeamChoice{idx, v};
    }
    return best;
}

namespace {

/// True when the straight ray between the antenna and the UE clears all
/// intermediate terrain + clutter representative heights. Samples every
/// cell size along the ground track, skipping one cell at each end so a
/// terminal's own clutter does not shadow it.
bool ray_is_los(const GeoPoint& site, double h_site_asl, const GeoPoint& ue, double h_ue_asl,
                const RasterGrid& dtm, const RasterGrid& clutter, const ClutterTable& table) {
    const EnuPoint a = geo_to_enu(dtm.origin, site);
    const EnuPoint b = geo_to_enu(dtm.origin, ue);
    const double dx = b.x - a.x;
    const double dy = b.y - a.y;
    const double dist = std::hypot(dx, dy);
    const double step = dtm.cell_size;
    if (dist <= 2.0 * step) return true;
    const int steps = static_cast<int>(dist / step);
    for (int i = 1; i < steps; ++i) {
        const double t = i * step / dist;
        const GeoPoint p = enu_to_geo(dtm.origin, EnuPoint{a.x + t * dx, a.y + t * dy});
        const double ground = raster_lookup(dtm, p);
        if (ground == dtm.nodata) continue; // unknown terrain cannot block
        double obstruction = ground;
        const double clutter_id = raster_lookup(clutter, p);
        if (clutter_id != clutter.nodata) {
            if (const ClutterClass* cc = table.find(static_cast<int>(clutter_id))) {
                obstruction += cc->representative_height_m;
            }
        }
        const double ray_h = h_site_asl + t * (h_ue_asl - h_site_asl);
        if (obstruction > ray_h) return false;
    }
    return true;
}

int resolve_thread_count(int requested, int nrows) {
    int n = requested;
    if (n <= 0) n = static_cast<int>(std::thread::hardware_concurrency());
    if (n < 1) n = 1;
    return std::min(n, nrows);
}

} // namespace

CoverageMap predict_coverage(std::span<const Sector> sectors, const RasterGrid& dtm,
                             const RasterGrid& clutter, const ClutterTable& clutter_table,
                             const CarrierConfig& carrier, const PredictOptions& options) {
    dtm.validate();
    clutter.validate();
    clutter_table.validate();
    carrier.validate();
    if (sectors.empty()) throw std::invalid_argument("predict_coverage: empty sector list");
    if (!dtm.same_extent(clutter)) {
        throw std::invalid_argument("predict_coverage: DTM and clutter rasters must share extent and resolution");
    }
    for (const auto& s : sectors) s.validate();

    // Terrain elevation under each site, from config or the DTM.
    std::vector<double> site_ground(sectors.size(), 0.0);
    for (size_t i = 0; i < sectors.size(); ++i) {
        if (sectors[i].site_ground_m) {
            site_ground[i] = *sectors[i].site_ground_m;
            continue;
        }
        const double g = raster_lookup(dtm, sectors[i].site_position);
        if (g == dtm.nodata) {
            throw std::invalid_argument(
                "predict_coverage: sector " + std::to_string(i) +
                " stands outside the DTM (or on a nodata cell); set site_ground_m");
        }
        site_ground[i] = g;
    }

    CoverageMap map;
    map.nrsrp = RasterGrid::filled(dtm.origin, dtm.cell_size, dtm.ncols, dtm.nrows, dtm.nodata, dtm.nodata);
    map.best_beam =
        RasterGrid::filled(dtm.origin, dtm.cell_size, dtm.ncols, dtm.nrows, dtm.nodata, dtm.nodata);

    auto predict_row = [&](int row) {
        for (int col = 0; col < dtm.ncols; ++col) {
            const double ground = dtm.at(row, col);
            const double clutter_id = clutter.at(row, col);
            if (ground == dtm.nodata || clutter_id == clutter.nodata) continue;
            const ClutterClass* cc = clutter_table.find(static_cast<int>(clutter_id));
            if (cc == nullptr) continue;
            ClutterClass effective = *cc;
            if (options.indoor) effective.extra_loss_db += cc->indoor_extra_loss_db;

            const GeoPoint target = dtm.cell_center(row, col);
            double best_value = 0.0;
            int best_beam = -1;
            for (size_t si = 0; si < sectors.size(); ++si) {
                SiteContext ctx;
                ctx.site_ground_m = site_ground[si];
                ctx.ue_height_m = options.ue_height_m;
                ctx.los = ray_is_los(sectors[si].site_position,
                                     site_ground[si] + sectors[si].acl_height_m, target,
                                     ground + options.ue_height_m, dtm, clutter, clutter_table);
                const BeamChoice choice =
                    best_beam_nrsrp(sectors[si], carrier, target, ground, effective, ctx);
                if (best_beam < 0 || choice.nrsrp_dbm > best_value) {
                    best_value = choice.nrsrp_dbm;
                    best_beam = choice.beam_idx;
                }
            }
            map.nrsrp.at(row, col) = best_value;
            map.best_beam.at(row, col) = best_beam;
        }
    };

    const int threads = resolve_thread_count(options.threads, dtm.nrows);
    if (threads <= 1) {
        for (int row = 0; row < dtm.nrows; ++row) predict_row(row);
    } else {
        // Rows are partitioned statically; each pixel is written by
        // exactly one thread, so output is identical for any thread count.
        std::vector<std::thread> pool;
        pool.reserve(threads);
        for (int t = 0; t < threads; ++t) {
            pool.emplace_back([&, t]() {
                for (int row = t; row < dtm.nrows; row += threads) predict_row(row);
            });
        }
        for (auto& th : pool) th.join();
    }
    return map;
}

RasterGrid classify_bands(const CoverageMap& map, std::span<const double> thresholds) {
    if (thresholds.empty()) throw std::invalid_argument("classify_bands: no thresholds");
    for (size_t i = 0; i + 1 < thresholds.size(); ++i) {
        if (!(thresholds[i] < thresholds[i + 1])) {
            throw std::invalid_argument("classify_bands: thresholds must be strictly increasing");
        }
    }
    RasterGrid bands = RasterGrid::filled(map.nrsrp.origin, map.nrsrp.cell_size, map.nrsrp.ncols,
                                          map.nrsrp.nrows, map.nrsrp.nodata, map.nrsrp.nodata);
    for (size_t i = 0; i < map.nrsrp.values.size(); ++i) {
        const double v = map.nrsrp.values[i];
        if (v == map.nrsrp.nodata) continue;
        int band = -1; // below all thresholds
        for (size_t t = 0; t < thresholds.size(); ++t) {
            if (v >= thresholds[t]) band = static_cast<int>(t);
        }
        bands.values[i] = band;
    }
    return bands;
}

std::string render_ppm(const RasterGrid& nrsrp) {
    nrsrp.validate();
    struct Stop {
        double min_dbm;
        unsigned char r, g, b;
    };
    // Fixed ramp, strongest first (README documents the exact table).
    static constexpr Stop kRamp[] = {
        {-80.0, 204, 0, 0},    // red
        {-90.0, 227, 66, 52},  // vermilion
        {-100.0, 255, 150, 0}, // orange: the 200 Mbps band
        {-110.0, 255, 221, 0}, // yellow
        {-120.0, 76, 175, 80}, // green
    };
    std::string out = "P6\n" + std::to_string(nrsrp.ncols) + " " + std::to_string(nrsrp.nrows) + "\n255\n";
    out.reserve(out.size() + static_cast<size_t>(nrsrp.ncols) * nrsrp.nrows * 3);
    for (int row = nrsrp.nrows - 1; row >= 0; --row) { // image rows top = north
        for (int col = 0; col < nrsrp.ncols; ++col) {
            const double v = nrsrp.at(row, col);
            unsigned char rgb[3] = {255, 255, 255}; // nodata: white
            if (v != nrsrp.nodata) {
                rgb[0] = 63, rgb[1] = 81, rgb[2] = 181; // below all stops: blue
                for (const auto& stop : kRamp) {
                    if (v >= stop.min_dbm) {
                        rgb[0] = stop.r;
                        rgb[1] = stop.g;
                        rgb[2] = stop.b;
                        break;
                    }
                }
            }
            out.append(reinterpret_cast<const char*>(rgb), 3);
        }
    }
    return out;
}

namespace {

using nlohmann::json;

Sector sector_from_json(const json& j) {
    Sector s;
    s.site_position = GeoPoint{j.at("lat").get<double>(), j.at("lon").get<double>()};
    s.acl_height_m = j.at("acl_height_m").get<double>();
    s.azimuth_deg = j.at("azimuth_deg").get<double>();
    s.electrical_tilt_deg = j.value("electrical_tilt_deg", 3.0);
    s.mechanical_tilt_deg = j.value("mechanical_tilt_deg", 0.0);
    s.tx_power_per_beam_dbm = j.at("tx_power_per_beam_dbm").get<double>();
    if (j.contains("site_ground_m")) s.site_ground_m = j.at("site_ground_m").get<double>();
    if (j.contains("beams")) {
        const auto& b = j.at("beams");
        const double az_bw = b.value("az_beamwidth_deg", 12.0);
        const double el_bw = b.value("el_beamwidth_deg", 6.0);
        const double peak = b.value("peak_gain_dbi", 24.0);
        if (b.contains("boresights_deg")) {
            BeamSet set;
            set.boresights_deg = b.at("boresights_deg").get<std::vector<double>>();
            set.az_beamwidth_deg = az_bw;
            set.el_beamwidth_deg = el_bw;
            set.peak_gain_dbi = peak;
            set.validate();
            s.beams = set;
        } else {
            s.beams = BeamSet::evenly_spaced(b.value("count", 8), b.value("envelope_deg", 120.0),
                                             az_bw, el_bw, peak);
        }
    }
    s.validate();
    return s;
}

} // namespace

SiteConfig parse_site_json(std::string_view text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError("site config: " + std::string(e.what()));
    }
    try {
        SiteConfig config;
        const auto& carrier = doc.at("carrier");
        config.carrier.center_freq_mhz = carrier.at("center_freq_mhz").get<double>();
        config.carrier.bandwidth_mhz = carrier.at("bandwidth_mhz").get<double>();
        config.carrier.subcarrier_count = carrier.at("subcarrier_count").get<int>();
        config.carrier.duplex = duplex_from_string(carrier.value("duplex", "TDD"));
        config.carrier.validate();
        for (const auto& j : doc.at("sectors")) {
            config.sectors.push_back(sector_from_json(j));
        }
        if (config.sectors.empty()) throw ParseError("site config: no sectors");
        return config;
    } catch (const json::exception& e) {
        throw ParseError("site config: " + std::string(e.what()));
    } catch (const std::invalid_argument& e) {
        throw ParseError("site config: " + std::string(e.what()));
    }
}

ClutterTable parse_clutter_table_json(std::string_view text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError("clutter table: " + std::string(e.what()));
    }
    try {
        ClutterTable table;
        for (const auto& j : doc.at("classes")) {
            ClutterClass c;
            c.id = j.at("id").get<int>();
            c.name = j.at("name").get<std::string>();
            c.extra_loss_db = j.at("extra_loss_db").get<double>();
            c.representative_height_m = j.value("representative_height_m", 0.0);
            c.indoor_extra_loss_db = j.value("indoor_extra_loss_db", 0.0);
            table.classes.push_back(std::move(c));
        }
        table.validate();
        return table;
    } catch (const json::exception& e) {
        throw ParseError("clutter table: " + std::string(e.what()));
    } catch (const std::invalid_argument& e) {
        throw ParseError("clutter table: " + std::string(e.what()));
    }
}

} // namespace cellplan
