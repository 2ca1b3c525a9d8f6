#pragma once

#include <map>
#include <span>
#include <string>

#include "cellplan/drive_test.hpp"
#include "cellplan/propagation.hpp"

namespace cellplan {

struct ComparisonPoint {
    GeoPoint position;
    double measured_dbm = 0.0;
    double predicted_dbm = 0.0;
    double delta_db = 0.0; // measured - predicted
};

struct ComparisonReport {
    std::vector<ComparisonPoint> per_point;
    double mean_error_db = 0.0;
    double std_error_db = 0.0; // n-1 denominator
    double rmse_db = 0.0;
    double correlation = 0.0; // Pearson, measured vs predicted
    int excluded_outside = 0; // points off the map extent
};

/// Per-point measured-minus-predicted deltas against the coverage map,
/// with summary error statistics. Points outside the map (or on nodata
/// pixels) are counted and excluded. Throws std::invalid_argument when no
/// point overlaps the map.
ComparisonReport compare(const CoverageMap& map, std::span<const SeriesPoint> measured);

struct TuneResult {
    std::map<int, double> offsets_db;  // clutter id -> additional loss, dB
    std::map<int, int> class_counts;   // measurement count per class
    std::vector<int> frozen_classes;   // under-sampled, offset forced to 0
    double pre_rmse_db = 0.0;
    double post_rmse_db = 0.0;
    int points_used = 0;
};

/// Least-squares fit of per-clutter additive loss offsets against the
/// measured envelope. Offsets enter linearly (prediction = base - offset
/// per class), so the solution is the per-class mean of
/// (predicted - measured). Classes with fewer than min_points_per_class
/// samples are frozen at 0. Throws when every class is under-sampled or
/// no point overlaps the map.
TuneResult tune_offsets(const CoverageMap& map, const RasterGrid& clutter_raster,
                        const ClutterTable& clutter_table,
                        std::span<const SeriesPoint> measured, int min_points_per_class = 20);

std::string comparison_report_json(const ComparisonReport& report);
std::string comparison_delta_csv(const ComparisonReport& report);

/// Measured points binned onto the prediction grid; each touched cell
/// carries the mean delta of its points, everything else nodata.
RasterGrid delta_raster(const CoverageMap& map, const ComparisonReport& report);

std::string tune_result_json(const TuneResult& result);

} // namespace cellplan
