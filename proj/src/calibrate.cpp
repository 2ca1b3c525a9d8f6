#include "cellplan/calibrate.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <stdexcept>

#include <json.hpp>

namespace cellplan {

namespace {

std::string format_double(double v) {
    char buf[32];
    auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    if (ec != std::errc{}) throw std::runtime_error("format_double: to_chars failed");
    return std::string(buf, end);
}

} // namespace

ComparisonReport compare(const CoverageMap& map, std::span<const SeriesPoint> measured) {
    ComparisonReport report;
    for (const auto& p : measured) {
        const double predicted = raster_lookup(map.nrsrp, p.position);
        if (predicted == map.nrsrp.nodata) {
            ++report.excluded_outside;
            continue;
        }
        report.per_point.push_back(
            ComparisonPoint{p.position, p.value_db, predicted, p.value_db - predicted});
    }
    if (report.per_point.empty()) {
        throw std::invalid_argument("compare: no measured point overlaps the prediction");
    }

    const auto n = static_cast<double>(report.per_point.size());
    double delta_sum = 0.0, meas_sum = 0.0, pred_sum = 0.0;
    for (const auto& p : report.per_point) {
        delta_sum += p.delta_db;
        meas_sum += p.measured_dbm;
        pred_sum += p.predicted_dbm;
    }
    report.mean_error_db = delta_sum / n;
    const double meas_mean = meas_sum / n;
    const double pred_mean = pred_sum / n;

    double delta_ss = 0.0, sq_sum = 0.0, meas_ss = 0.0, pred_ss = 0.0, cross = 0.0;
    for (const auto& p : report.per_point) {
        delta_ss += (p.delta_db - report.mean_error_db) * (p.delta_db - report.mean_error_db);
        sq_sum += p.delta_db * p.delta_db;
        meas_ss += (p.measured_dbm - meas_mean) * (p.measured_dbm - meas_mean);
        pred_ss += (p.predicted_dbm - pred_mean) * (p.predicted_dbm - pred_mean);
        cross += (p.measured_dbm - meas_mean) * (p.predicted_dbm - pred_mean);
    }
    report.std_error_db = report.per_point.size() > 1 ? std::sqrt(delta_ss / (n - 1.0)) : 0.0;
    report.rmse_db = std::sqrt(sq_sum / n);
    if (meas_ss > 0.0 && pred_ss > 0.0) {
        report.correlation = cross / std::sqrt(meas_ss * pred_ss);
    } else {
        // Degenerate (constant) series: perfectly affine when the deltas
        // are constant, else undefined; report 1 or 0 accordingly.
        report.correlation = delta_ss == 0.0 ? 1.0 : 0.0;
    }
    return report;
}

TuneResult tune_offsets(const CoverageMap& map, const RasterGrid& clutter_raster,
                        const ClutterTable& clutter_table, std::span<const SeriesPoint> measured,
                        int min_points_per_class) {
    clutter_table.validate();
    if (min_points_per_class < 1) {
        throw std::invalid_argument("tune_offsets: min_points_per_class must be >= 1");
    }

    struct PointObs {
        int clutter_id;
        double delta_db; // measured - predicted
    };
    std::vector<PointObs> obs;
    std::map<int, int> counts;
    for (const auto& p : measured) {
        const double predicted = raster_lookup(map.nrsrp, p.position);
        if (predicted == map.nrsrp.nodata) continue;
        const double clutter_value = raster_lookup(clutter_raster, p.position);
        if (clutter_value == clutter_raster.nodata) continue;
        const int id = static_cast<int>(clutter_value);
        if (clutter_table.find(id) == nullptr) continue;
        obs.push_back(PointObs{id, p.value_db - predicted});
        ++counts[id];
    }
    if (obs.empty()) throw std::invalid_argument("tune_offsets: no usable measured point");

    TuneResult result;
    result.class_counts = counts;
    result.points_used = static_cast<int>(obs.size());

    // Offsets enter linearly (prediction = base - offset per class), so
    // least squares decouples into the per-class mean delta.
    std::map<int, double> delta_sum;
    for (const auto& o : obs) delta_sum[o.clutter_id] += o.delta_db;
    int tuned = 0;
    for (const auto& [id, count] : counts) {
        if (count >= min_points_per_class) {
            result.offsets_db[id] = -delta_sum[id] / count; // positive = extra loss
            ++tuned;
        } else {
            result.offsets_db[id] = 0.0;
            result.frozen_classes.push_back(id);
        }
    }
    if (tuned == 0) {
        throw std::invalid_argument("tune_offsets: every clutter class has fewer than " +
                                    std::to_string(min_points_per_class) + " points");
    }

    double pre_ss = 0.0, post_ss = 0.0;
    for (const auto& o : obs) {
        pre_ss += o.delta_db * o.delta_db;
        const double post = o.delta_db + result.offsets_db[o.clutter_id];
        post_ss += post * post;
    }
    result.pre_rmse_db = std::sqrt(pre_ss / obs.size());
    result.post_rmse_db = std::sqrt(post_ss / obs.size());
    return result;
}

std::string comparison_report_json(const ComparisonReport& report) {
    nlohmann::json doc;
    doc["n"] = report.per_point.size();
    doc["excluded_outside"] = report.excluded_outside;
    doc["mean_error_db"] = report.mean_error_db;
    doc["std_error_db"] = report.std_error_db;
    doc["rmse_db"] = report.rmse_db;
    doc["correlation"] = report.correlation;
    return doc.dump(2) + "\n";
}

std::string comparison_delta_csv(const ComparisonReport& report) {
    std::string out = "lat,lon,measured_dbm,predicted_dbm,delta_db\n";
    for (const auto& p : report.per_point) {
        out += format_double(p.position.lat);
        out += ',';
        out += format_double(p.position.lon);
        out += ',';
        out += format_double(p.measured_dbm);
        out += ',';
        out += format_double(p.predicted_dbm);
        out += ',';
        out += format_double(p.delta_db);
        out += '\n';
    }
    return out;
}

RasterGrid delta_raster(const CoverageMap& map, const ComparisonReport& report) {
    RasterGrid grid = RasterGrid::filled(map.nrsrp.origin, map.nrsrp.cell_size, map.nrsrp.ncols,
                                         map.nrsrp.nrows, map.nrsrp.nodata, map.nrsrp.nodata);
    std::vector<double> sum(grid.values.size(), 0.0);
    std::vector<int> count(grid.values.size(), 0);
    for (const auto& p : report.per_point) {
        const auto idx = raster_cell_index(grid, p.position);
        if (!idx) continue;
        const size_t flat = static_cast<size_t>(idx->first) * grid.ncols + idx->second;
        sum[flat] += p.delta_db;
        ++count[flat];
    }
    for (size_t i = 0; i < grid.values.size(); ++i) {
        if (count[i] > 0) grid.values[i] = sum[i] / count[i];
    }
    return grid;
}

std::string tune_result_json(const TuneResult& result) {
    nlohmann::json doc;
    nlohmann::json offsets = nlohmann::json::object();
    for (const auto& [id, offset] : result.offsets_db) offsets[std::to_string(id)] = offset;
    nlohmann::json counts = nlohmann::json::object();
    for (const auto& [id, count] : result.class_counts) counts[std::to_string(id)] = count;
    doc["offsets_db"] = offsets;
    doc["class_counts"] = counts;
    doc["frozen_classes"] = result.frozen_classes;
    doc["pre_rmse_db"] = result.pre_rmse_db;
    doc["post_rmse_db"] = result.post_rmse_db;
    doc["points_used"] = result.points_used;
    return doc.dump(2) + "\n";
}

} // namespace cellplan
