#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cellplan/geo.hpp"
#include "cellplan/radio_math.hpp"
#include "cellplan/raster.hpp"

namespace cellplan {

/// The swept SSB beam set of one sector: identical patterns with evenly
/// spaced azimuth boresights, shared elevation pattern.
struct BeamSet {
    std::vector<double> boresights_deg; // offsets from sector azimuth, increasing, symmetric
    double az_beamwidth_deg = 12.0;     // 3 dB
    double el_beamwidth_deg = 6.0;      // 3 dB
    double peak_gain_dbi = 24.0;

    int count() const { return static_cast<int>(boresights_deg.size()); }

    /// count beams spread across `envelope_deg`, symmetric about zero.
    /// Default 8 beams over 120 degrees gives 15-degree spacing.
    static BeamSet evenly_spaced(int count, double envelope_deg, double az_beamwidth_deg,
                                 double el_beamwidth_deg, double peak_gain_dbi);

    void validate() const;
};

struct Sector {
    GeoPoint site_position;
    double acl_height_m = 27.77;       // antenna center line above ground
    double azimuth_deg = 0.0;          // clockwise from north
    double electrical_tilt_deg = 3.0;  // positive = downtilt
    double mechanical_tilt_deg = 0.0;
    double tx_power_per_beam_dbm = 43.0;
    BeamSet beams = BeamSet::evenly_spaced(8, 120.0, 12.0, 6.0, 24.0);
    /// Terrain elevation under the mast. When unset, predict_coverage
    /// reads it from the DTM; a site outside the DTM then fails loudly.
    std::optional<double> site_ground_m;

    void validate() const;
};

struct ClutterClass {
    int id = 0;
    std::string name;
    double extra_loss_db = 0.0;
    double representative_height_m = 0.0;
    double indoor_extra_loss_db = 0.0; // applied only for indoor maps
};

struct ClutterTable {
    std::vector<ClutterClass> classes;

    const ClutterClass* find(int id) const;
    void validate() const;
};

struct CoverageMap {
    RasterGrid nrsrp;     // dBm per pixel
    RasterGrid best_beam; // beam index 0..7 per pixel, nodata outside
};

struct PathLossResult {
    double loss_db = 0.0;
    bool distance_clamped = false; // distance < 1 m was clamped to 1 m
};

/// Urban-macro style path loss.
///   LOS:  28.0 + 22*log10(d3d) + 20*log10(f_GHz)
///   NLOS: max(LOS, 13.54 + 39.08*log10(d3d) + 20*log10(f_GHz) - 0.6*(h_ut - 1.5))
/// Both floored at free-space path loss minus 1 dB.
PathLossResult path_loss(double distance_3d_m, double carrier_freq_mhz, double h_bs_m,
                         double h_ut_m, bool los);

/// Gain of one beam towards (az_offset, el_offset), where az_offset is
/// the target azimuth relative to the sector azimuth and el_offset the
/// elevation angle relative to the tilted boresight (the caller folds
/// electrical + mechanical downtilt into el_offset):
///   peak - min(12*(daz/az_bw)^2, 30) - min(12*(del/el_bw)^2, 30)
/// Throws std::out_of_range for an invalid beam index.
double beam_gain_dbi(const BeamSet& beams, int beam_idx, double az_offset_deg,
                     double el_offset_deg);

/// Terrain context for a single prediction point.
struct SiteContext {
    double site_ground_m = 0.0; // terrain elevation at the site
    bool los = true;
    double ue_height_m = 1.5;
};

/// NRSRP of one specific beam at the target:
///   tx_power + beam_gain - path_loss - clutter loss - 10*log10(subcarriers)
double beam_nrsrp_dbm(const Sector& sector, const CarrierConfig& carrier, int beam_idx,
                      const GeoPoint& target, double target_ground_m,
                      const ClutterClass& clutter, const SiteContext& ctx);

struct BeamChoice {
    int beam_idx = 0;
    double nrsrp_dbm = 0.0;
};

/// Evaluates all beams and returns the argmax; ties go to the lowest index.
BeamChoice best_beam_nrsrp(const Sector& sector, const CarrierConfig& carrier,
                           const GeoPoint& target, double target_ground_m,
                           const ClutterClass& clutter, const SiteContext& ctx);

struct PredictOptions {
    bool indoor = false;    // add per-clutter indoor_extra_loss_db
    int threads = 0;        // 0 = auto
    double ue_height_m = 1.5;
};

/// Per-pixel best-server NRSRP over the study area. UE are placed 1.5 m
/// above the DTM; line of sight is decided by sampling the terrain +
/// clutter representative heights along the ray from each sector antenna.
/// Output is deterministic and independent of the thread count.
/// Throws std::invalid_argument on mismatched rasters or an empty sector
/// list.
CoverageMap predict_coverage(std::span<const Sector> sectors, const RasterGrid& dtm,
                             const RasterGrid& clutter, const ClutterTable& clutter_table,
                             const CarrierConfig& carrier, const PredictOptions& options = {});

/// Band index per pixel: value v maps to i with thresholds[i] <= v <
/// thresholds[i+1] (half-open; the last band is unbounded above), -1
/// below all thresholds, nodata propagated. Throws std::invalid_argument
/// unless thresholds are strictly increasing.
RasterGrid classify_bands(const CoverageMap& map, std::span<const double> thresholds);

/// Binary PPM (P6) heatmap of an NRSRP grid with the fixed color ramp
/// documented in the README (red above -80 dBm, orange -100..-90).
std::string render_ppm(const RasterGrid& nrsrp);

/// Site configuration document: one carrier plus one or more sectors.
struct SiteConfig {
    CarrierConfig carrier;
    std::vector<Sector> sectors;
};

SiteConfig parse_site_json(std::string_view text);
ClutterTable parse_clutter_table_json(std::string_view text);

} // namespace cellplan
